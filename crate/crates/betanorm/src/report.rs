//! Run reports and output files.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::ExperimentConfig;

/// A tolerance check; `passed` decides the exit code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable condition on `value`, e.g. `"< 0.05"`.
    pub tolerance: String,
    pub passed: bool,
    pub seed: u64,
}

impl Check {
    pub fn below(name: &str, value: f64, bound: f64, seed: u64) -> Self {
        Self { name: name.into(), value, tolerance: format!("< {}", num(bound)), passed: value < bound, seed }
    }

    pub fn above(name: &str, value: f64, bound: f64, seed: u64) -> Self {
        Self { name: name.into(), value, tolerance: format!("> {}", num(bound)), passed: value > bound, seed }
    }

    pub fn within(name: &str, value: f64, lo: f64, hi: f64, seed: u64) -> Self {
        Self { name: name.into(), value, tolerance: format!("in [{}, {}]", num(lo), num(hi)), passed: (lo..=hi).contains(&value), seed }
    }
}

/// Short display form of a number: scientific outside `[1e-4, 1e6)`.
pub fn num(x: f64) -> String {
    if x == 0.0 || (1e-4..1e6).contains(&x.abs()) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    /// The config with every default filled in; rerunning it reproduces
    /// this report.
    pub config: ExperimentConfig,
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    /// Only with `--timing`, so that reports stay byte-identical by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

impl RunReport {
    pub fn new(config: ExperimentConfig, results: serde_json::Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config,
            results,
            checks: Vec::new(),
            warnings: Vec::new(),
            wall_clock_s: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// A file produced by a run, relative to the output directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: RunReport,
    pub files: Vec<OutputFile>,
}

impl RunOutput {
    /// Writes `<command>-report.json` and the other files into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let name = format!("{}-report.json", self.report.config.command.name());
        let all = std::iter::once((name.as_str(), self.report.to_json()))
            .chain(self.files.iter().map(|f| (f.name.as_str(), f.contents.clone())));
        for (n, c) in all {
            let p = dir.join(n);
            std::fs::write(&p, c).with_context(|| format!("writing {}", p.display()))?;
        }
        Ok(())
    }
}

/// CSV text from a header and rows of fields.
pub fn csv_text(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
