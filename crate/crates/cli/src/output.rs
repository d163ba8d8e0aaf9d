//! Artifact writing: CSV tables and the JSON run summary.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

/// Full double precision, `.` decimal point. `-0` prints as `0`.
pub fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| num(*v)).collect());
    }

    fn write(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(path)
    }
}

/// Everything a command produces.
pub struct Report {
    pub results: Value,
    pub tables: Vec<Table>,
    /// Set when a solver failed; the partial results are still written.
    pub failure: Option<String>,
}

impl Report {
    pub fn ok(results: Value, tables: Vec<Table>) -> Self {
        Self {
            results,
            tables,
            failure: None,
        }
    }
}

pub fn config_hash(cfg: &RunConfig) -> String {
    let text = serde_json::to_string(cfg).expect("config serializes");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes the CSV tables and `<command>.json`; returns the summary.
pub fn write_artifacts(
    dir: &Path,
    command: &str,
    cfg: &RunConfig,
    report: &Report,
    elapsed: Option<f64>,
) -> anyhow::Result<Value> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();
    for t in &report.tables {
        t.write(dir)?;
        files.push(format!("{}.csv", t.name));
    }
    let mut summary = json!({
        "toolkit": "berryoptics",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config_hash": config_hash(cfg),
        "config": cfg,
        "status": if report.failure.is_some() { "failed" } else { "ok" },
        "results": report.results,
        "files": files,
    });
    if let Some(msg) = &report.failure {
        summary["error"] = json!(msg);
    }
    if let Some(s) = elapsed {
        summary["timing"] = json!({ "elapsed_s": s });
    }
    let path = dir.join(format!("{command}.json"));
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(summary)
}
