//! Radially symmetric solutions of u_tt = Δu in ℝ³ with u_t(0) = 0.
//!
//! With G(s) = s·g(|s|) the odd extension of r·g, the solution is
//! u(t, r) = [G(r+t) + G(r−t)] / (2r), and at the origin
//! u(t, 0) = G′(t) = g(t) + t·g′(t). Steep profiles therefore focus into
//! large center values even though |g| ≤ 1.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{ceil, exp, powi};
use crate::multiplier::RadialOperator;
use crate::radial::{RadialField, RadialGrid};
use crate::spline::NaturalCubicSpline;

/// A radial profile g: [0, ∞) → ℝ with derivative, vanishing beyond its support.
pub trait RadialProfile: Send + Sync {
    fn value(&self, r: f64) -> f64;
    fn derivative(&self, r: f64) -> f64;
    fn support_radius(&self) -> f64;
    /// Length scale of the sharpest feature, used for resolution checks.
    fn feature_width(&self) -> f64;
}

/// Parameters of the steepening transition family: width w = 2^{−n}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionFamilyParams {
    pub index: u32,
    pub center: f64,
    pub low: f64,
    pub high: f64,
}

impl TransitionFamilyParams {
    /// From −1 to 0 around r = 1.
    pub fn standard(index: u32) -> Self {
        TransitionFamilyParams {
            index,
            center: 1.0,
            low: -1.0,
            high: 0.0,
        }
    }

    pub fn width(&self) -> f64 {
        powi(2.0, -(self.index as i32))
    }
}

/// C¹ smoothstep transition from `low` to `high` over [center − w/2, center + w/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionProfile {
    params: TransitionFamilyParams,
    width: f64,
}

pub fn make_transition_profile(params: TransitionFamilyParams) -> Result<TransitionProfile> {
    if params.index < 1 {
        return Err(Error::InvalidParameter {
            name: "index",
            reason: "must be at least 1",
        });
    }
    let width = params.width();
    if !(params.center > width / 2.0 && params.center.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "center",
            reason: "transition window must lie in r > 0",
        });
    }
    if !params.low.is_finite() || params.high != 0.0 {
        return Err(Error::InvalidParameter {
            name: "high",
            reason: "outer level must be 0 for compact support",
        });
    }
    Ok(TransitionProfile { params, width })
}

impl TransitionProfile {
    pub fn params(&self) -> &TransitionFamilyParams {
        &self.params
    }

    fn local(&self, r: f64) -> f64 {
        (r - (self.params.center - self.width / 2.0)) / self.width
    }
}

impl RadialProfile for TransitionProfile {
    fn value(&self, r: f64) -> f64 {
        let x = self.local(r).clamp(0.0, 1.0);
        let p = &self.params;
        p.low + (p.high - p.low) * x * x * (3.0 - 2.0 * x)
    }

    fn derivative(&self, r: f64) -> f64 {
        let x = self.local(r);
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        (self.params.high - self.params.low) * 6.0 * x * (1.0 - x) / self.width
    }

    fn support_radius(&self) -> f64 {
        self.params.center + self.width / 2.0
    }

    fn feature_width(&self) -> f64 {
        self.width
    }
}

/// A(1 − r²/R²)³ on r < R, a C² pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    pub amplitude: f64,
    pub radius: f64,
}

impl RadialProfile for BumpProfile {
    fn value(&self, r: f64) -> f64 {
        if r >= self.radius {
            return 0.0;
        }
        let q = 1.0 - powi(r / self.radius, 2);
        self.amplitude * q * q * q
    }

    fn derivative(&self, r: f64) -> f64 {
        if r >= self.radius {
            return 0.0;
        }
        let q = 1.0 - powi(r / self.radius, 2);
        self.amplitude * 3.0 * q * q * (-2.0 * r / (self.radius * self.radius))
    }

    fn support_radius(&self) -> f64 {
        self.radius
    }

    fn feature_width(&self) -> f64 {
        self.radius
    }
}

/// A e^{−r²/s²}, cut off where it drops below e^{−72}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProfile {
    pub amplitude: f64,
    pub scale: f64,
}

impl GaussianProfile {
    const CUTOFF: f64 = 8.5;
}

impl RadialProfile for GaussianProfile {
    fn value(&self, r: f64) -> f64 {
        if r > self.support_radius() {
            return 0.0;
        }
        self.amplitude * exp(-powi(r / self.scale, 2))
    }

    fn derivative(&self, r: f64) -> f64 {
        -2.0 * r / (self.scale * self.scale) * self.value(r)
    }

    fn support_radius(&self) -> f64 {
        Self::CUTOFF * self.scale
    }

    fn feature_width(&self) -> f64 {
        self.scale
    }
}

/// Σ c_i g_i.
#[derive(Default)]
pub struct LinearCombination {
    terms: Vec<(f64, Box<dyn RadialProfile>)>,
}

impl LinearCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, coefficient: f64, profile: impl RadialProfile + 'static) -> Self {
        self.terms.push((coefficient, Box::new(profile)));
        self
    }
}

impl RadialProfile for LinearCombination {
    fn value(&self, r: f64) -> f64 {
        self.terms.iter().map(|(c, g)| c * g.value(r)).sum()
    }

    fn derivative(&self, r: f64) -> f64 {
        self.terms.iter().map(|(c, g)| c * g.derivative(r)).sum()
    }

    fn support_radius(&self) -> f64 {
        self.terms.iter().map(|(_, g)| g.support_radius()).fold(0.0, f64::max)
    }

    fn feature_width(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, g)| g.feature_width())
            .fold(f64::INFINITY, f64::min)
    }
}

/// u(t, 0) = g(t) + t·g′(t).
pub fn center_value(g: &dyn RadialProfile, t: f64) -> f64 {
    g.value(t) + t * g.derivative(t)
}

fn check_coverage(grid: &RadialGrid, required: f64) -> Result<()> {
    if required > grid.r_max() * (1.0 + 1e-12) {
        Err(Error::GridTooSmall {
            r_max: grid.r_max(),
            required,
        })
    } else {
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "t",
            reason: "time must be finite and non-negative",
        })
    }
}

/// Exact solution at time t, sampled on `grid`.
pub fn propagate_radial(g: &dyn RadialProfile, t: f64, grid: &RadialGrid) -> Result<RadialField> {
    check_time(t)?;
    check_coverage(grid, g.support_radius() + t)?;
    let big_g = |s: f64| s * g.value(s.abs());
    RadialField::from_fn(*grid, |r| {
        if r == 0.0 {
            center_value(g, t)
        } else {
            (big_g(r + t) + big_g(r - t)) / (2.0 * r)
        }
    })
}

/// The wave propagator B = cos(2π|ξ|t) acting on sampled radial fields.
///
/// Samples are interpolated by a natural cubic spline of r·u(r) (odd, so the
/// natural end condition at 0 is exact), then propagated with the exact
/// formula. The center value is the spline's G′(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePropagator {
    pub time: f64,
}

impl RadialOperator for WavePropagator {
    fn apply(&self, f: &RadialField) -> Result<RadialField> {
        let t = self.time;
        check_time(t)?;
        let grid = *f.grid();
        if t == 0.0 {
            return Ok(f.clone());
        }
        check_coverage(&grid, f.support_radius() + t)?;
        let r_max = grid.r_max();
        let rg: Vec<f64> = f.values().iter().zip(grid.points()).map(|(u, r)| r * u).collect();
        let spline = NaturalCubicSpline::uniform(0.0, grid.spacing(), rg)?;
        let big_g = |s: f64| {
            let a = s.abs();
            if a > r_max {
                0.0
            } else {
                s.signum() * spline.value(a)
            }
        };
        RadialField::from_fn(grid, |r| {
            if r == 0.0 {
                if t <= r_max {
                    spline.derivative(t)
                } else {
                    0.0
                }
            } else {
                (big_g(r + t) + big_g(r - t)) / (2.0 * r)
            }
        })
    }

    fn symbol_sup(&self) -> f64 {
        1.0
    }
}

/// Largest CFL number the oracle accepts.
pub const MAX_CFL: f64 = 0.9;
/// Minimum grid points across the sharpest feature.
pub const MIN_POINTS_PER_FEATURE: f64 = 8.0;

/// Finite-difference reference solution.
///
/// Solves v_tt = v_rr for v = r·u with v(t, 0) = 0 and v = 0 at r_max by
/// leapfrog, then recovers u = v/r and extrapolates the center with an even
/// parabola. The grid must cover support + t so nothing reflects.
pub fn fd_wave_oracle(g: &dyn RadialProfile, t: f64, grid: &RadialGrid, cfl: f64) -> Result<RadialField> {
    if !(cfl > 0.0 && cfl <= MAX_CFL) {
        return Err(Error::CflViolation { cfl, max: MAX_CFL });
    }
    check_time(t)?;
    let dr = grid.spacing();
    let points = g.feature_width() / dr;
    if points < MIN_POINTS_PER_FEATURE {
        return Err(Error::Underresolved {
            spacing: dr,
            points,
            min: MIN_POINTS_PER_FEATURE,
        });
    }
    check_coverage(grid, g.support_radius() + t)?;
    let m = grid.point_count();
    if m < 3 {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "need at least three points",
        });
    }
    let steps = ceil(t / (cfl * dr)) as usize;
    let mut prev: Vec<f64> = grid.points().map(|r| r * g.value(r)).collect();
    prev[0] = 0.0;
    prev[m - 1] = 0.0;
    let mut cur = prev.clone();
    if steps > 0 {
        let c2 = powi(t / steps as f64 / dr, 2);
        let mut next = vec![0.0; m];
        for i in 1..m - 1 {
            cur[i] = prev[i] + 0.5 * c2 * (prev[i + 1] - 2.0 * prev[i] + prev[i - 1]);
        }
        for _ in 1..steps {
            for i in 1..m - 1 {
                next[i] = 2.0 * cur[i] - prev[i] + c2 * (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]);
            }
            core::mem::swap(&mut prev, &mut cur);
            core::mem::swap(&mut cur, &mut next);
        }
    }
    let mut u: Vec<f64> = cur.iter().zip(grid.points()).map(|(v, r)| if r > 0.0 { v / r } else { 0.0 }).collect();
    u[0] = if steps == 0 {
        g.value(0.0)
    } else {
        (4.0 * u[1] - u[2]) / 3.0
    };
    RadialField::new(*grid, u)
}
