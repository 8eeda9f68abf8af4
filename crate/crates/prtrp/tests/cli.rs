use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn prtrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prtrp")).args(args).env_remove("PRTRP_THREADS").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn star() -> String {
    data("star.json").to_string_lossy().into_owned()
}

#[test]
fn solve_star_exact() {
    let v = stdout_json(&prtrp(&["solve", &star(), "--method", "bidp", "--no-timing"]));
    assert_eq!(v["objective"], 6);
    assert_eq!(v["proven_optimal"], true);
    assert_eq!(v["order"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["r"], serde_json::json!([1, 2, 3]));
    assert!(v.get("wall_time_s").is_none());
}

#[test]
fn solve_star_with_every_method() {
    for (method, proven) in [("gipd", false), ("gid", false), ("brute", true), ("hk", true)] {
        let v = stdout_json(&prtrp(&["solve", &star(), "--method", method]));
        assert_eq!(v["objective"], 6, "{method}");
        assert_eq!(v["proven_optimal"], proven, "{method}");
        assert!(v["wall_time_s"].is_number());
    }
}

#[test]
fn heuristic_flags_and_stats() {
    let v = stdout_json(&prtrp(&[
        "solve",
        &star(),
        "--theta",
        "0.80",
        "--delta",
        "0.01",
        "--heuristic-source-beta",
        "--stats",
        "--no-timing",
    ]));
    assert_eq!(v["proven_optimal"], false);
    assert_eq!(v["config"]["mode"], "heuristic");
    assert_eq!(v["config"]["theta"], 0.8);
    assert!(v["stats"]["levels"].is_array());
    let bad = prtrp(&["solve", &star(), "--theta", "1.5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(prtrp(&["solve", "/definitely/missing.json"]).status.code(), Some(2));
    let cycle = prtrp(&["solve", data("cycle.json").to_str().unwrap()]);
    assert_eq!(cycle.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&cycle.stderr).contains("not a tree"));

    let dir = tempfile::tempdir().unwrap();
    let out = prtrp(&["generate", "--n", "12", "--seed", "1", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let big = dir.path().join("rand_n12_s1.json");
    assert_eq!(prtrp(&["solve", big.to_str().unwrap(), "--method", "brute"]).status.code(), Some(3));
    let capped = prtrp(&["solve", big.to_str().unwrap(), "--labels-cap", "3"]);
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert!(prtrp(&["generate", "--n", "9", "--seed", "7", "-o", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let star_dir = dir.path().join("stars");
    let out = prtrp(&["generate", "--family", "star", "--n", "6", "--seed", "1", "--out-dir", star_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(star_dir.join("star_n6_s1.json")).unwrap();
    let inst = prtrp::format::parse_instance(&text).unwrap();
    assert!(inst.validate().is_empty());
    assert!(inst.power_edges.iter().all(|&(p, _)| p == 1));

    let sub = dir.path().join("sub.json");
    let out = prtrp(&["generate", "--subtree", a.to_str().unwrap(), "--root", "4", "-o", sub.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sub = prtrp::format::read_instance(&sub).unwrap();
    assert!(sub.validate().is_empty());
    assert!(sub.original_labels.unwrap().contains(&4));
}

#[test]
fn byte_identical_runs_without_timing() {
    let args = ["solve", &star(), "--no-timing", "--stats"];
    assert_eq!(prtrp(&args).stdout, prtrp(&args).stdout);
    let bench = ["bench", "--count", "3", "--n", "7", "--seed", "5", "--no-timing"];
    assert_eq!(prtrp(&bench).stdout, prtrp(&bench).stdout);
}

#[test]
fn bench_csv_layout() {
    let out = prtrp(&["bench", "--count", "5", "--n", "8", "--seed", "0", "--no-timing"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let body: Vec<_> = rows.iter().filter(|r| !r[0].ends_with("_deviation")).collect();
    assert_eq!(body.len(), 15);
    for r in body.iter().filter(|r| &r[2] == "bidp") {
        assert_eq!(&r[6], "0.0000");
    }
    assert_eq!(rows.len(), 15 + 6);

    let empty = tempfile::tempdir().unwrap();
    let out = prtrp(&["bench", empty.path().to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "instance,n,method,objective,time_s,proven_optimal,gap_pct,status\n");

    let sweep = prtrp(&["bench", "--count", "2", "--n", "9", "--sweep", "--no-timing"]);
    let text = String::from_utf8(sweep.stdout).unwrap();
    assert!(text.contains("bidp[theta=0.80,delta=0.01]"));
    assert_eq!(text.lines().count(), 1 + 8 + 8);
}

#[test]
fn bench_reads_directories_and_keeps_going() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(data("star.json"), dir.path().join("a_star.json")).unwrap();
    std::fs::write(dir.path().join("b_broken.json"), "{").unwrap();
    let out = prtrp(&["bench", dir.path().to_str().unwrap(), "--methods", "bidp,gid", "--no-timing"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].starts_with("a_star,3,bidp,6,"));
    assert!(lines[3].starts_with("b_broken,,bidp,,"));
    assert!(lines[3].contains("malformed"));
}

#[test]
fn bounds_csv() {
    let out = prtrp(&["bounds", &star(), "--upper", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "vertex,successor_count,beta,position,lower_bound,upper_bound");
    assert_eq!(&lines[1..], ["1,3,1,1,6,6", "1,3,1,2,7,6", "1,3,1,3,9,6", "2,1,3,3,6,6", "3,1,3,3,6,6"]);
}

#[test]
fn evaluate_orders() {
    let v = stdout_json(&prtrp(&["evaluate", &star(), "--order", "2,3,1"]));
    assert_eq!(v["objective"], 15);
    assert_eq!(prtrp(&["evaluate", &star(), "--order", "1,1,2"]).status.code(), Some(2));
}

#[test]
fn mip_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("star.lp");
    let sol = dir.path().join("star-solution.json");
    let out = prtrp(&["export-mip", &star(), "-o", lp.to_str().unwrap(), "--solution", sol.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&lp).unwrap();
    assert!(prtrp_core::mip::lint_lp_text(&text).is_empty());
    assert!(text.contains(" time_0_1: t_1 - t_0 - 20 x_0_1 >= -19"));

    let v = stdout_json(&prtrp(&["check-mip", sol.to_str().unwrap()]));
    assert_eq!(v["feasible"], true);
    assert_eq!(v["objective"], 6.0);
    assert_eq!(v["route_objective"], 6);

    // break the r_3 >= t_1 row
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    doc["values"]["r_3"] = Value::from(0.5);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let out = prtrp(&["check-mip", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["violations"].as_array().unwrap().iter().any(|x| x["row"] == "link_3_1"));
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.json");
    assert!(prtrp(&["generate", "--n", "13", "--seed", "3", "-o", path.to_str().unwrap()]).status.success());
    let one = prtrp(&["--threads", "1", "solve", path.to_str().unwrap(), "--no-timing"]);
    let many = Command::new(env!("CARGO_BIN_EXE_prtrp"))
        .args(["solve", path.to_str().unwrap(), "--no-timing"])
        .env("PRTRP_THREADS", "8")
        .output()
        .unwrap();
    let (a, b) = (stdout_json(&one), stdout_json(&many));
    assert_eq!(a["order"], b["order"]);
    assert_eq!(a["objective"], b["objective"]);
    assert_eq!(b["config"]["threads"], 8);
}
