//! Versioned coefficient tables of the deconvolution test signals.
//!
//! Each table lists x̂[n] for 0 ≤ n ≤ bandwidth (the signals are real, so
//! x̂[−n] is the conjugate). Columns: `n,re,im`.

use std::fs;
use std::path::{Path, PathBuf};

use linfreg_core::perconv::{test_signal, TestSignalKind};
use linfreg_core::Complex64;

use crate::config::SignalName;
use crate::error::{Result, RunError};

pub const TABLE_VERSION: u32 = 1;
pub const TABLE_BANDWIDTH: usize = 256;

pub const ALL_SIGNALS: [SignalName; 3] = [
    SignalName::SmoothOscillatory,
    SignalName::PiecewiseLinear,
    SignalName::PiecewiseConstant,
];

pub fn table_file_name(kind: &TestSignalKind) -> String {
    format!("{}.v{TABLE_VERSION}.csv", kind.name())
}

/// Directory of the tables shipped with the crate.
pub fn shipped_table_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("test_signals")
}

pub fn table_bytes(kind: &TestSignalKind, bandwidth: usize) -> Result<Vec<u8>> {
    let signal = test_signal(kind, bandwidth)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "re", "im"])?;
    for n in 0..=bandwidth as i64 {
        let c = signal.coeff(n);
        w.write_record([n.to_string(), format!("{:?}", c.re), format!("{:?}", c.im)])?;
    }
    w.into_inner().map_err(|e| RunError::Csv(e.into_error().into()))
}

/// Writes one table per signal into `dir` and returns the paths.
pub fn export_tables(dir: &Path, bandwidth: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(RunError::io(dir))?;
    ALL_SIGNALS
        .iter()
        .map(|s| {
            let kind = s.kind();
            let path = dir.join(table_file_name(&kind));
            fs::write(&path, table_bytes(&kind, bandwidth)?).map_err(RunError::io(&path))?;
            Ok(path)
        })
        .collect()
}

/// Reads a table back as (n, x̂[n]) pairs.
pub fn read_table(path: &Path) -> Result<Vec<(i64, Complex64)>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for record in r.deserialize() {
        let (n, re, im): (i64, f64, f64) = record?;
        out.push((n, Complex64::new(re, im)));
    }
    Ok(out)
}
