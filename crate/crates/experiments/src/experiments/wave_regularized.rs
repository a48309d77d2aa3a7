//! A smooth pulse perturbed by a steep transition profile, propagated with
//! and without the filter preconditioner.
//!
//! Outputs:
//! - `fig3_states.csv`: r and the initial states f, f+r, T(f+r) and end
//!   states Bf, B(f+r), B T(f+r)
//! - `fig4_filters.csv`: r, k, h (unit scale) and k_α, h_β

use linfreg_core::multiplier::{
    apply_precondition, linf_operator_bound, regularized_propagate, DilatedFilterPair, RadialOperator,
};
use linfreg_core::wave3d::{
    make_transition_profile, propagate_radial, BumpProfile, LinearCombination, RadialProfile,
    TransitionFamilyParams, WavePropagator,
};
use linfreg_core::{norm, NormKind, RadialField, RadialGrid};

use crate::config::WaveRegularizedConfig;
use crate::error::Result;
use crate::output::{num, Check, RunWriter, Table};

/// Relative quadrature slack allowed in the sampled L∞ bound check.
const LINF_BOUND_TOL: f64 = 0.02;

pub fn run(cfg: &WaveRegularizedConfig, w: &mut RunWriter) -> Result<()> {
    let grid = RadialGrid::new(cfg.r_max, cfg.points)?;
    let pair = DilatedFilterPair::triangle_3d(cfg.alpha, cfg.beta)?;
    let unit = DilatedFilterPair::triangle_3d(1.0, 1.0)?;
    let b = WavePropagator { time: cfg.time };

    let clean = BumpProfile { amplitude: 1.0, radius: cfg.pulse_radius };
    let g = make_transition_profile(TransitionFamilyParams::standard(cfg.perturbation_index))?;
    let dirty = LinearCombination::new()
        .with(1.0, clean)
        .with(cfg.perturbation_amplitude, g);

    let f = RadialField::from_fn(grid, |r| clean.value(r))?;
    let fr = RadialField::from_fn(grid, |r| dirty.value(r))?;
    let tfr = apply_precondition(&pair, &fr)?;
    let bf = propagate_radial(&clean, cfg.time, &grid)?;
    let bfr = propagate_radial(&dirty, cfg.time, &grid)?;
    let btfr = regularized_propagate(&b, &pair, &fr)?;

    let mut states = Table::new(&[
        ("r", "1"),
        ("clean_initial", "1"),
        ("perturbed_initial", "1"),
        ("preconditioned_initial", "1"),
        ("clean_final", "1"),
        ("perturbed_final", "1"),
        ("regularized_final", "1"),
    ]);
    for (i, r) in grid.points().enumerate() {
        let row = [&f, &fr, &tfr, &bf, &bfr, &btfr].map(|s| num(s.values()[i]));
        states.push(std::iter::once(num(r)).chain(row).collect());
    }
    w.write_csv("fig3_states.csv", &states)?;

    let reach = [unit.k_support(), unit.h_support(), pair.k_support(), pair.h_support()]
        .into_iter()
        .fold(0.0, f64::max);
    let mut filters = Table::new(&[("r", "1"), ("k", "1"), ("h", "1"), ("k_alpha", "1"), ("h_beta", "1")]);
    for i in 0..cfg.filter_points {
        let r = reach * i as f64 / (cfg.filter_points - 1) as f64;
        filters.push(vec![
            num(r),
            num(unit.k_alpha(r)),
            num(unit.h_beta(r)),
            num(pair.k_alpha(r)),
            num(pair.h_beta(r)),
        ]);
    }
    w.write_csv("fig4_filters.csv", &filters)?;

    let unfiltered = norm(&bfr.sub(&bf)?, NormKind::SupRadial)?;
    let filtered = norm(&btfr.sub(&bf)?, NormKind::SupRadial)?;
    w.metric("unfiltered_spike", unfiltered);
    w.metric("filtered_spike", filtered);
    w.metric("alpha", cfg.alpha);
    w.metric("beta", cfg.beta);
    w.note(format!(
        "filter scales alpha = {}, beta = {}; the defaults 0.1 are the tested scales that halve the spike",
        cfg.alpha, cfg.beta
    ));
    w.check(Check::new(
        "spike_ordering",
        filtered < unfiltered,
        format!("‖BT(f+r) − Bf‖_∞ = {filtered} vs ‖B(f+r) − Bf‖_∞ = {unfiltered}"),
    ));
    w.check(Check::new(
        "spike_halved",
        filtered < unfiltered / 2.0,
        format!("{filtered} < {unfiltered} / 2"),
    ));
    let bound = linf_operator_bound(&b, &pair) * norm(&fr, NormKind::SupRadial)?;
    let observed = norm(&btfr, NormKind::SupRadial)?;
    w.metric("linf_bound", bound);
    w.check(Check::from_slacks(
        "linf_operator_bound",
        &[(bound - observed) / bound],
        LINF_BOUND_TOL,
        format!("‖BT(f+r)‖_∞ = {observed} ≤ {bound} (relative slack); symbol sup {}", b.symbol_sup()),
    ));
    Ok(())
}
