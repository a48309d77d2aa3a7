//! Steepening transition profiles f_n: initial states, end states, and the
//! same profiles as small perturbations of a smooth pulse.
//!
//! Outputs:
//! - `fig1_initial.csv`: r, n, value, sup_norm (‖f_n‖_∞)
//! - `fig1_final.csv`: r, n, value, center_value (the analytic Bf_n(0))
//! - `fig2_perturbed.csv`: r, n, time, value; n = 0 rows hold the clean pulse

use linfreg_core::wave3d::{
    center_value, fd_wave_oracle, make_transition_profile, propagate_radial, BumpProfile, LinearCombination,
    RadialProfile, TransitionFamilyParams,
};
use linfreg_core::{norm, NormKind, RadialField, RadialGrid};
use rayon::prelude::*;

use crate::config::WaveAdversarialConfig;
use crate::error::Result;
use crate::output::{num, Check, RunWriter, Table};

/// |‖f_n‖_∞ − 1| allowed by the sup-norm check.
const SUP_NORM_TOL: f64 = 1e-12;

struct Member {
    n: u32,
    initial: RadialField,
    sup_norm: f64,
    final_state: RadialField,
    center: f64,
    fd_relative_error: f64,
    perturbed_initial: RadialField,
    perturbed_final: RadialField,
}

fn member(cfg: &WaveAdversarialConfig, grid: RadialGrid, n: u32) -> Result<Member> {
    let g = make_transition_profile(TransitionFamilyParams::standard(n))?;
    let initial = RadialField::from_fn(grid, |r| g.value(r))?;
    let sup_norm = norm(&initial, NormKind::SupRadial)?;
    let final_state = propagate_radial(&g, cfg.time, &grid)?;
    let fd = fd_wave_oracle(&g, cfg.time, &grid, cfg.fd_cfl)?;
    let fd_relative_error = norm(&fd.sub(&final_state)?, NormKind::SupRadial)? / norm(&final_state, NormKind::SupRadial)?;
    let center = center_value(&g, cfg.time);
    let perturbed = LinearCombination::new()
        .with(1.0, BumpProfile { amplitude: 1.0, radius: cfg.pulse_radius })
        .with(cfg.perturbation_amplitude, g);
    Ok(Member {
        n,
        sup_norm,
        center,
        perturbed_initial: RadialField::from_fn(grid, |r| perturbed.value(r))?,
        perturbed_final: propagate_radial(&perturbed, cfg.time, &grid)?,
        initial,
        final_state,
        fd_relative_error,
    })
}

pub fn run(cfg: &WaveAdversarialConfig, w: &mut RunWriter) -> Result<()> {
    let grid = RadialGrid::new(cfg.r_max, cfg.points)?;
    let members: Vec<Member> = (cfg.n_min..=cfg.n_max)
        .into_par_iter()
        .map(|n| member(cfg, grid, n))
        .collect::<Result<_>>()?;
    let clean = BumpProfile { amplitude: 1.0, radius: cfg.pulse_radius };
    let clean_initial = RadialField::from_fn(grid, |r| clean.value(r))?;
    let clean_final = propagate_radial(&clean, cfg.time, &grid)?;

    let mut initial = Table::new(&[("r", "1"), ("n", "-"), ("value", "1"), ("sup_norm", "1")]);
    let mut final_t = Table::new(&[("r", "1"), ("n", "-"), ("value", "1"), ("center_value", "1")]);
    let mut perturbed = Table::new(&[("r", "1"), ("n", "-"), ("time", "1"), ("value", "1")]);
    let mut push_perturbed = |n: u32, f0: &RadialField, f1: &RadialField| {
        for (time, f) in [(0.0, f0), (cfg.time, f1)] {
            for (r, v) in grid.points().zip(f.values()) {
                perturbed.push(vec![num(r), n.to_string(), num(time), num(*v)]);
            }
        }
    };
    push_perturbed(0, &clean_initial, &clean_final);
    for m in &members {
        for (r, v) in grid.points().zip(m.initial.values()) {
            initial.push(vec![num(r), m.n.to_string(), num(*v), num(m.sup_norm)]);
        }
        for (r, v) in grid.points().zip(m.final_state.values()) {
            final_t.push(vec![num(r), m.n.to_string(), num(*v), num(m.center)]);
        }
        push_perturbed(m.n, &m.perturbed_initial, &m.perturbed_final);
    }
    w.write_csv("fig1_initial.csv", &initial)?;
    w.write_csv("fig1_final.csv", &final_t)?;
    w.write_csv("fig2_perturbed.csv", &perturbed)?;

    for m in &members {
        w.metric(format!("center_value_n{}", m.n), m.center);
        w.metric(format!("fd_relative_error_n{}", m.n), m.fd_relative_error);
    }
    let centers: Vec<f64> = members.iter().map(|m| m.center.abs()).collect();
    w.check(Check::new(
        "center_growth",
        centers.windows(2).all(|p| p[1] > p[0]),
        format!("|Bf_n(0)| = {centers:?}"),
    ));
    let sup_slacks: Vec<f64> = members.iter().map(|m| -(m.sup_norm - 1.0).abs()).collect();
    w.check(Check::from_slacks("unit_sup_norm", &sup_slacks, SUP_NORM_TOL, "‖f_n‖_∞ = 1"));
    let fd_slacks: Vec<f64> = members.iter().map(|m| cfg.fd_tolerance - m.fd_relative_error).collect();
    w.check(Check::from_slacks(
        "fd_agreement",
        &fd_slacks,
        0.0,
        format!("relative sup gap between exact and FD end states ≤ {}", cfg.fd_tolerance),
    ));
    Ok(())
}
