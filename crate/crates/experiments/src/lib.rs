//! Experiment runners for `linfreg-core`: figure data as CSV, rate studies
//! and randomized bound audits, each with a JSON manifest.

pub mod coeff_table;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{Experiment, ExperimentConfig};
pub use error::{Result, RunError};
pub use experiments::run;
pub use output::{Check, RunManifest};
