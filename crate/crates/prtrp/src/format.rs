//! Instance files and the JSON documents the CLI reads and writes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use prtrp_core::{Instance, Vertex};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
}

/// Field order here is the on-disk key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    name: String,
    n: usize,
    source: Vertex,
    power_edges: Vec<[Vertex; 2]>,
    travel: Vec<Vec<i64>>,
    repair_durations: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    original_labels: Option<Vec<Vertex>>,
}

impl From<InstanceFile> for Instance {
    fn from(f: InstanceFile) -> Self {
        Instance {
            name: f.name,
            n: f.n,
            source: f.source,
            power_edges: f.power_edges.into_iter().map(|[p, c]| (p, c)).collect(),
            travel: f.travel,
            repair_durations: f.repair_durations,
            original_labels: f.original_labels,
        }
    }
}

/// Parses an instance. Structural validity is not checked here.
pub fn parse_instance(text: &str) -> Result<Instance, serde_json::Error> {
    serde_json::from_str::<InstanceFile>(text).map(Instance::from)
}

pub fn read_instance(path: &Path) -> Result<Instance, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Read { path: path.into(), source })?;
    parse_instance(&text).map_err(|source| FileError::Parse { path: path.into(), source })
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serialises")
}

/// Serialises with one travel row per line so matrices stay readable and
/// diffable. Output is a pure function of the instance.
pub fn instance_to_json(inst: &Instance) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"name\": {},", json(&inst.name));
    let _ = writeln!(out, "  \"n\": {},", inst.n);
    let _ = writeln!(out, "  \"source\": {},", inst.source);
    let edges: Vec<[Vertex; 2]> = inst.power_edges.iter().map(|&(p, c)| [p, c]).collect();
    let _ = writeln!(out, "  \"power_edges\": {},", json(&edges));
    out.push_str("  \"travel\": [\n");
    for (i, row) in inst.travel.iter().enumerate() {
        let sep = if i + 1 < inst.travel.len() { "," } else { "" };
        let _ = writeln!(out, "    {}{sep}", json(row));
    }
    out.push_str("  ],\n");
    let _ = write!(out, "  \"repair_durations\": {}", json(&inst.repair_durations));
    if let Some(labels) = &inst.original_labels {
        let _ = write!(out, ",\n  \"original_labels\": {}", json(labels));
    }
    out.push_str("\n}\n");
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FileError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| FileError::Write { path: dir.into(), source })?;
    }
    fs::write(path, text).map_err(|source| FileError::Write { path: path.into(), source })
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<(), FileError> {
    write_text(path, &instance_to_json(inst))
}

/// Variable values for `check-mip`. `instance` is resolved relative to the
/// solution file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_m: Option<i128>,
    pub values: serde_json::Map<String, serde_json::Value>,
}

pub fn read_solution(path: &Path) -> Result<SolutionFile, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| FileError::Parse { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use prtrp_core::instance::{generate_random, generate_random_star};

    #[test]
    fn round_trip() {
        for seed in 0..5 {
            let inst = generate_random(6, seed, 50).unwrap();
            assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
            let sub = inst.extract_subtree(inst.source).unwrap();
            assert_eq!(parse_instance(&instance_to_json(&sub)).unwrap(), sub);
        }
        let star = generate_random_star(4, 1, 10).unwrap();
        assert_eq!(parse_instance(&instance_to_json(&star)).unwrap(), star);
    }

    #[test]
    fn key_order_is_fixed() {
        let text = instance_to_json(&generate_random(3, 1, 10).unwrap());
        let keys = ["\"name\"", "\"n\"", "\"source\"", "\"power_edges\"", "\"travel\"", "\"repair_durations\""];
        let at: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(at.windows(2).all(|w| w[0] < w[1]));
        assert!(!text.contains("original_labels"));
    }

    #[test]
    fn rejects_unknown_and_missing_keys() {
        assert!(parse_instance(r#"{"name":"a","n":1,"source":1,"power_edges":[],"travel":[[0,1],[1,0]]}"#).is_err());
        assert!(parse_instance(
            r#"{"name":"a","n":1,"source":1,"power_edges":[],"travel":[[0,1],[1,0]],"repair_durations":[0],"extra":1}"#
        )
        .is_err());
        assert!(parse_instance(r#"{"name":"a","n":1,"source":1,"power_edges":[],"travel":[[0,1],[1,0]],"repair_durations":[0]}"#).is_ok());
    }
}
