pub mod bounds_audit;
pub mod perconv_recon;
pub mod rate_study;
pub mod wave_adversarial;
pub mod wave_regularized;

use std::path::Path;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::{RunManifest, RunWriter};

/// Runs one experiment into `dir` and writes its manifest last.
pub fn run(config: &ExperimentConfig, dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    let mut w = RunWriter::create(dir)?;
    match config {
        ExperimentConfig::WaveAdversarial(c) => wave_adversarial::run(c, &mut w)?,
        ExperimentConfig::WaveRegularized(c) => wave_regularized::run(c, &mut w)?,
        ExperimentConfig::PerconvRecon(c) => perconv_recon::run(c, &mut w)?,
        ExperimentConfig::RateStudy(c) => rate_study::run(c, &mut w)?,
        ExperimentConfig::BoundsAudit(c) => bounds_audit::run(c, &mut w)?,
    }
    w.finish(config)
}

/// Least-squares slope of ys against xs.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Largest α (up to bisection precision on log α) with `error(α) < target`,
/// searching [1e−16, 1e2]. None if even the smallest α misses the target.
pub fn bisect_alpha(error: impl Fn(f64) -> f64, target: f64) -> Option<f64> {
    let (mut lo, mut hi) = (1e-16f64, 1e2f64);
    if error(hi) < target {
        return Some(hi);
    }
    if error(lo) >= target {
        return None;
    }
    for _ in 0..64 {
        let mid = (lo * hi).sqrt();
        if error(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}
