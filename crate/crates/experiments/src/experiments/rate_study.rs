//! Convergence rates of the weighted filter on source-set data.
//!
//! The L² sweep uses data with ⟨y,u_m⟩ = σ_m^{(2+η+2β)/2}/m and the L∞ sweep
//! the smoother σ_m^{(2+2η+2β)/2}/m. The noisy sweep adds δ times the
//! normalized adversarial direction and sets α = √δ.
//!
//! Outputs:
//! - `rate_alpha.csv`: eta, alpha, l2_error, linf_error
//! - `rate_noise.csv`: eta, delta, alpha, linf_error

use linfreg_core::perconv::{adversarial_perturbation, singular_kernel, svd_of_convolution, AdversarialParams};
use linfreg_core::regularizers::{apply_filter, choose_alpha, source_set_data, FilterScheme, SvdOperator, WeightSchedule};
use linfreg_core::{norm, FourierSignal, NormKind};
use rayon::prelude::*;

use super::fit_slope;
use crate::config::RateStudyConfig;
use crate::error::Result;
use crate::output::{num, Check, RunWriter, Table};

/// Allowed shortfall of the fitted slopes below the predicted exponents.
pub const L2_SLOPE_TOL: f64 = 0.1;
pub const LINF_SLOPE_TOL: f64 = 0.15;
pub const NOISE_SLOPE_TOL: f64 = 0.1;

pub fn l2_rate(eta: f64) -> f64 {
    f64::min(1.0, eta / 4.0)
}

pub fn noise_rate(eta: f64) -> f64 {
    f64::min(0.5, eta / 8.0)
}

struct EtaRun {
    eta: f64,
    l2: Vec<f64>,
    linf: Vec<f64>,
    noisy: Vec<f64>,
}

fn sweep(cfg: &RateStudyConfig, op: &SvdOperator, weights: &WeightSchedule, direction: &FourierSignal, eta: f64) -> Result<EtaRun> {
    let rec = |y: &FourierSignal, a: f64| -> Result<FourierSignal> {
        Ok(apply_filter(op, &FilterScheme::weighted(a, weights.clone())?, y)?.signal)
    };
    let exact = |y: &FourierSignal| -> Result<FourierSignal> { Ok(apply_filter(op, &FilterScheme::pseudoinverse(), y)?.signal) };
    let y2 = source_set_data(op, eta + 2.0 * cfg.beta);
    let x2 = exact(&y2)?;
    let yi = source_set_data(op, 2.0 * eta + 2.0 * cfg.beta);
    let xi = exact(&yi)?;
    let mut l2 = Vec::new();
    let mut linf = Vec::new();
    for a in cfg.alphas() {
        l2.push(norm(&(&rec(&y2, a)? - &x2), NormKind::L2Torus)?);
        linf.push(norm(&(&rec(&yi, a)? - &xi), NormKind::SupGrid)?);
    }
    let noisy = cfg
        .deltas()
        .into_iter()
        .map(|d| {
            let yd = &yi + &(direction * d);
            Ok(norm(&(&rec(&yd, choose_alpha(d)?)? - &xi), NormKind::SupGrid)?)
        })
        .collect::<Result<_>>()?;
    Ok(EtaRun { eta, l2, linf, noisy })
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    fit_slope(&lx, &ly)
}

pub fn run(cfg: &RateStudyConfig, w: &mut RunWriter) -> Result<()> {
    let kernel = singular_kernel(cfg.rho, cfg.truncation)?;
    let op = svd_of_convolution(&kernel)?;
    let c: Vec<f64> = op.sigmas().iter().map(|s| s.powf(-cfg.beta)).collect();
    let floor = c.iter().copied().fold(f64::INFINITY, f64::min);
    let weights = WeightSchedule::new(c, floor, cfg.beta, 1.0, op.sigmas())?;
    let r = adversarial_perturbation(&AdversarialParams::new(cfg.rho, cfg.truncation)?, &kernel)?;
    let direction = &r * (1.0 / norm(&r, NormKind::L2Torus)?);

    let runs: Vec<EtaRun> = cfg
        .etas
        .par_iter()
        .map(|&eta| sweep(cfg, &op, &weights, &direction, eta))
        .collect::<Result<_>>()?;

    let alphas = cfg.alphas();
    let deltas = cfg.deltas();
    let mut alpha_table = Table::new(&[("eta", "1"), ("alpha", "1"), ("l2_error", "1"), ("linf_error", "1")]);
    let mut noise_table = Table::new(&[("eta", "1"), ("delta", "1"), ("alpha", "1"), ("linf_error", "1")]);
    let (mut l2_slacks, mut linf_slacks, mut noise_slacks) = (Vec::new(), Vec::new(), Vec::new());
    for run in &runs {
        for (i, a) in alphas.iter().enumerate() {
            alpha_table.push(vec![num(run.eta), num(*a), num(run.l2[i]), num(run.linf[i])]);
        }
        for (d, e) in deltas.iter().zip(&run.noisy) {
            noise_table.push(vec![num(run.eta), num(*d), num(d.sqrt()), num(*e)]);
        }
        let s2 = log_slope(&alphas, &run.l2);
        let si = log_slope(&alphas, &run.linf);
        let sn = log_slope(&deltas, &run.noisy);
        w.metric(format!("l2_slope_eta{}", run.eta), s2);
        w.metric(format!("linf_slope_eta{}", run.eta), si);
        w.metric(format!("noise_slope_eta{}", run.eta), sn);
        l2_slacks.push(s2 - (l2_rate(run.eta) - L2_SLOPE_TOL));
        linf_slacks.push(si - (l2_rate(run.eta) - LINF_SLOPE_TOL));
        noise_slacks.push(sn - (noise_rate(run.eta) - NOISE_SLOPE_TOL));
    }
    w.write_csv("rate_alpha.csv", &alpha_table)?;
    w.write_csv("rate_noise.csv", &noise_table)?;
    w.check(Check::from_slacks(
        "l2_rate",
        &l2_slacks,
        0.0,
        format!("L² slope ≥ min(1, η/4) − {L2_SLOPE_TOL}"),
    ));
    w.check(Check::from_slacks(
        "linf_rate",
        &linf_slacks,
        0.0,
        format!("L∞ slope ≥ min(1, η/4) − {LINF_SLOPE_TOL}"),
    ));
    w.check(Check::from_slacks(
        "noisy_rate",
        &noise_slacks,
        0.0,
        format!("δ slope with α = √δ ≥ min(1/2, η/8) − {NOISE_SLOPE_TOL}"),
    ));
    Ok(())
}
