//! CSV tables, the run directory and the JSON manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::{Result, RunError};

/// Name of the manifest inside a run directory.
pub const MANIFEST_NAME: &str = "manifest.json";

/// An in-memory CSV table. Headers read `name[unit]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Table {
            header: columns.iter().map(|(name, unit)| format!("{name}[{unit}]")).collect(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width does not match the header.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| RunError::Csv(e.into_error().into()))
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
    pub rows: usize,
}

/// One checked property: how many cases were tested and the worst margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Smallest (bound − observed) over all cases; negative means violated.
    pub worst_slack: Option<f64>,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            cases: 1,
            worst_slack: None,
            detail: detail.into(),
        }
    }

    /// Passes when every slack is at least `-tolerance`.
    pub fn from_slacks(name: impl Into<String>, slacks: &[f64], tolerance: f64, detail: impl Into<String>) -> Self {
        let worst = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        let passed = !slacks.is_empty() && slacks.iter().all(|s| *s >= -tolerance);
        Check {
            name: name.into(),
            passed,
            cases: slacks.len(),
            worst_slack: worst.is_finite().then_some(worst),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputFile>,
    pub checks: Vec<Check>,
    /// Named scalar results (slopes, chosen α, constants).
    pub metrics: std::collections::BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub passed: bool,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_NAME);
        let text = fs::read_to_string(&path).map_err(RunError::io(&path))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// The manifest as JSON with the timing field zeroed.
    pub fn without_timing(&self) -> Result<String> {
        let mut m = self.clone();
        m.wall_clock_seconds = 0.0;
        Ok(serde_json::to_string_pretty(&m)?)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Collects the files, checks and metrics of one run.
#[derive(Debug)]
pub struct RunWriter {
    dir: PathBuf,
    started: Instant,
    outputs: Vec<OutputFile>,
    checks: Vec<Check>,
    metrics: std::collections::BTreeMap<String, f64>,
    notes: Vec<String>,
}

impl RunWriter {
    /// Creates the directory and removes a stale manifest from an earlier run.
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(RunError::io(&dir))?;
        let stale = dir.join(MANIFEST_NAME);
        if stale.exists() {
            fs::remove_file(&stale).map_err(RunError::io(&stale))?;
        }
        Ok(RunWriter {
            dir,
            started: Instant::now(),
            outputs: Vec::new(),
            checks: Vec::new(),
            metrics: Default::default(),
            notes: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_csv(&mut self, name: &str, table: &Table) -> Result<()> {
        assert!(
            self.outputs.iter().all(|o| o.path != name),
            "{name} written twice in one run"
        );
        let bytes = table.to_bytes()?;
        let path = self.dir.join(name);
        fs::write(&path, &bytes).map_err(RunError::io(&path))?;
        self.outputs.push(OutputFile {
            path: name.to_string(),
            sha256: hex(&Sha256::digest(&bytes)),
            rows: table.len(),
        });
        Ok(())
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Non-finite values cannot go into JSON; they become a note instead.
    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        let name = name.into();
        if value.is_finite() {
            self.metrics.insert(name, value);
        } else {
            self.notes.push(format!("{name} = {value}"));
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Writes the manifest through a temporary file and a rename.
    pub fn finish(self, config: &ExperimentConfig) -> Result<RunManifest> {
        let manifest = RunManifest {
            experiment: config.experiment().name().to_string(),
            config: config.to_json(),
            passed: self.checks.iter().all(|c| c.passed),
            outputs: self.outputs,
            checks: self.checks,
            metrics: self.metrics,
            notes: self.notes,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
        };
        let tmp = self.dir.join(format!("{MANIFEST_NAME}.tmp"));
        let text = serde_json::to_string_pretty(&manifest)?;
        fs::write(&tmp, text).map_err(RunError::io(&tmp))?;
        let path = self.dir.join(MANIFEST_NAME);
        fs::rename(&tmp, &path).map_err(RunError::io(&path))?;
        Ok(manifest)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// SHA-256 of a file, hex encoded.
pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(RunError::io(path))?;
    Ok(hex(&Sha256::digest(&bytes)))
}
