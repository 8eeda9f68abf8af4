//! Benchmark table: one row per (instance, method) with objective, time and
//! gap to the best objective any method found on that instance, followed
//! by average and maximum gap per method.

use std::io::Write;
use std::time::Duration;

use prtrp_core::{Instance, SolverConfig};

use crate::run::{solve_method, Method};

#[derive(Debug, Clone)]
pub struct BenchEntry {
    pub label: String,
    pub method: Method,
    pub config: SolverConfig,
}

impl BenchEntry {
    pub fn plain(method: Method) -> Self {
        BenchEntry { label: method.name().to_string(), method, config: SolverConfig::exact() }
    }

    pub fn relaxed(theta_pct: u32, delta_pct: u32) -> Self {
        BenchEntry {
            label: format!("bidp[theta={:.2},delta={:.2}]", theta_pct as f64 / 100.0, delta_pct as f64 / 100.0),
            method: Method::Bidp,
            config: SolverConfig::heuristic(theta_pct, delta_pct),
        }
    }
}

/// Exact labeling plus the three relaxed settings θ/δ = 0.80/0.01,
/// 0.90/0.01 and 1.00/0.
pub fn sweep_entries() -> Vec<BenchEntry> {
    vec![BenchEntry::plain(Method::Bidp), BenchEntry::relaxed(80, 1), BenchEntry::relaxed(90, 1), BenchEntry::relaxed(100, 0)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: Option<usize>,
    pub method: String,
    pub objective: Option<u128>,
    pub time_s: Option<f64>,
    pub proven_optimal: Option<bool>,
    pub gap_pct: Option<f64>,
    pub status: String,
}

/// An instance, or the reason it could not be loaded.
pub type BenchInput = (String, Result<Instance, String>);

pub fn run_bench(inputs: &[BenchInput], entries: &[BenchEntry], time_limit: Option<Duration>, timing: bool) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for (name, loaded) in inputs {
        let first = rows.len();
        for entry in entries {
            let mut row = BenchRow {
                instance: name.clone(),
                n: loaded.as_ref().ok().map(|i| i.n),
                method: entry.label.clone(),
                objective: None,
                time_s: None,
                proven_optimal: None,
                gap_pct: None,
                status: String::from("ok"),
            };
            match loaded {
                Err(e) => row.status = e.clone(),
                Ok(inst) => match solve_method(inst, entry.method, &entry.config, time_limit) {
                    Ok(out) => {
                        row.objective = Some(out.route.objective);
                        row.time_s = timing.then_some(out.wall.as_secs_f64());
                        row.proven_optimal = Some(out.proven_optimal);
                        row.status = crate::run::termination_name(out.termination).replace("completed", "ok");
                    }
                    Err(e) => row.status = e.to_string(),
                },
            }
            rows.push(row);
        }
        let best = rows[first..].iter().filter_map(|r| r.objective).min();
        if let Some(best) = best {
            for row in &mut rows[first..] {
                row.gap_pct = row.objective.map(|z| gap_pct(z, best));
            }
        }
    }
    rows
}

fn gap_pct(z: u128, best: u128) -> f64 {
    if best == 0 {
        0.0
    } else {
        (z - best) as f64 * 100.0 / best as f64
    }
}

/// Per-method average and maximum gap over the rows that produced one.
pub fn summary(rows: &[BenchRow], entries: &[BenchEntry]) -> Vec<BenchRow> {
    let mut out = Vec::new();
    for entry in entries {
        let gaps: Vec<f64> = rows.iter().filter(|r| r.method == entry.label).filter_map(|r| r.gap_pct).collect();
        let times: Vec<f64> = rows.iter().filter(|r| r.method == entry.label).filter_map(|r| r.time_s).collect();
        if gaps.is_empty() {
            continue;
        }
        let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
        let max = gaps.iter().copied().fold(0.0, f64::max);
        for (label, gap) in [("avg_deviation", mean(&gaps)), ("max_deviation", Some(max))] {
            out.push(BenchRow {
                instance: label.to_string(),
                n: None,
                method: entry.label.clone(),
                objective: None,
                time_s: if label == "avg_deviation" { mean(&times) } else { times.iter().copied().reduce(f64::max) },
                proven_optimal: None,
                gap_pct: gap,
                status: format!("{} instances", gaps.len()),
            });
        }
    }
    out
}

pub const HEADER: [&str; 8] = ["instance", "n", "method", "objective", "time_s", "proven_optimal", "gap_pct", "status"];

/// Writes the header, the rows and, when there are rows, the summary.
pub fn write_csv<W: Write>(out: W, rows: &[BenchRow], entries: &[BenchEntry]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    let tail = if rows.is_empty() { Vec::new() } else { summary(rows, entries) };
    for row in rows.iter().chain(&tail) {
        let opt = |v: Option<String>| v.unwrap_or_default();
        w.write_record([
            row.instance.clone(),
            opt(row.n.map(|n| n.to_string())),
            row.method.clone(),
            opt(row.objective.map(|z| z.to_string())),
            opt(row.time_s.map(|t| format!("{t:.6}"))),
            opt(row.proven_optimal.map(|b| b.to_string())),
            opt(row.gap_pct.map(|g| format!("{g:.4}"))),
            row.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use prtrp_core::instance::generate_random;

    fn inputs(count: u64) -> Vec<BenchInput> {
        (0..count)
            .map(|s| {
                let inst = generate_random(8, s, 100).unwrap();
                (inst.name.clone(), Ok(inst))
            })
            .collect()
    }

    #[test]
    fn three_methods_on_five_instances() {
        let entries: Vec<BenchEntry> = [Method::Gid, Method::Gipd, Method::Bidp].map(BenchEntry::plain).into();
        let rows = run_bench(&inputs(5), &entries, None, false);
        assert_eq!(rows.len(), 15);
        for row in rows.iter().filter(|r| r.method == "bidp") {
            assert_eq!(row.gap_pct, Some(0.0));
            assert_eq!(row.proven_optimal, Some(true));
        }
        assert!(rows.iter().all(|r| r.gap_pct.unwrap() >= 0.0));
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows, &entries).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 15 + 6);
    }

    #[test]
    fn empty_set_is_header_only() {
        let entries = sweep_entries();
        let rows = run_bench(&[], &entries, None, true);
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows, &entries).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "instance,n,method,objective,time_s,proven_optimal,gap_pct,status\n");
    }

    #[test]
    fn failures_stay_in_row() {
        let mut inp = inputs(1);
        inp.push(("broken.json".into(), Err("malformed JSON".into())));
        inp.push(("big".into(), Ok(generate_random(12, 0, 10).unwrap())));
        let entries = vec![BenchEntry::plain(Method::Brute), BenchEntry::plain(Method::Gid)];
        let rows = run_bench(&inp, &entries, None, false);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[2].status, "malformed JSON");
        assert!(rows[4].status.contains("at most 10"));
        assert_eq!(rows[5].gap_pct, Some(0.0));
    }

    #[test]
    fn sweep_labels() {
        let labels: Vec<String> = sweep_entries().into_iter().map(|e| e.label).collect();
        assert_eq!(labels, ["bidp", "bidp[theta=0.80,delta=0.01]", "bidp[theta=0.90,delta=0.01]", "bidp[theta=1.00,delta=0.00]"]);
    }
}
