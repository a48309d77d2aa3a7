//! Periodic convolution with a badly singular kernel.
//!
//! Ax = k ∗ x on 𝕋 is diagonal in the Fourier basis with singular values
//! |k̂[n]|. With k̂[n] = (|n|+1)^{−ρ}, ρ < 1/2, the kernel is integrable but
//! not square integrable, and the perturbations r_N = Σ_{|n|≤N} a_n u_n with
//! a_n = (|n|+1)^{−(1−ρ)} stay bounded in L² while the Tikhonov
//! reconstruction of r_N grows at least like log N at t = 0.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{powf, PI};
use crate::regularizers::{BasisVector, SvdOperator};
use crate::signal::FourierSignal;

/// Fourier coefficients k̂[n] of a real, even kernel with |k̂[n]| ≥ (|n|+1)^{−ρ}.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicKernel {
    coeffs: FourierSignal,
    rho: f64,
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "rho",
            reason: "must lie in (0, 1/2)",
        })
    }
}

impl PeriodicKernel {
    pub fn new(coeffs: FourierSignal, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        if !coeffs.is_real_symmetric() {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                reason: "kernel must be real (conjugate-symmetric coefficients)",
            });
        }
        for n in coeffs.indices() {
            let floor = powf((n.abs() + 1) as f64, -rho);
            if !(crate::math::cabs(coeffs.coeff(n)) >= floor * (1.0 - 1e-12)) {
                return Err(Error::KernelCoefficient { index: n });
            }
        }
        Ok(PeriodicKernel { coeffs, rho })
    }

    pub fn coeffs(&self) -> &FourierSignal {
        &self.coeffs
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn max_index(&self) -> usize {
        self.coeffs.max_index()
    }
}

/// k̂[n] = (|n|+1)^{−ρ} for |n| ≤ N.
pub fn singular_kernel(rho: f64, max_index: usize) -> Result<PeriodicKernel> {
    check_rho(rho)?;
    if max_index < 1 {
        return Err(Error::InvalidParameter {
            name: "max_index",
            reason: "must be at least 1",
        });
    }
    let coeffs = FourierSignal::real_from_half(max_index, |k| Complex64::new(powf((k + 1) as f64, -rho), 0.0));
    PeriodicKernel::new(coeffs, rho)
}

/// ŷ[n] = k̂[n] x̂[n].
pub fn forward_convolve(kernel: &PeriodicKernel, x: &FourierSignal) -> Result<FourierSignal> {
    if x.max_index() > kernel.max_index() {
        return Err(Error::OutsideBasis {
            index: x.max_index() as i64,
        });
    }
    Ok(x.map(true, |n, c| c * kernel.coeffs.coeff(n)))
}

/// Singular values |k̂[n]| in non-increasing order (ties by |n|, then n ≥ 0
/// first), right vectors e^{2πint}, left vectors carrying the phase k̂[n]/|k̂[n]|.
pub fn svd_of_convolution(kernel: &PeriodicKernel) -> Result<SvdOperator> {
    let mut modes: Vec<(f64, i64, Complex64)> = kernel
        .coeffs
        .indices()
        .map(|n| {
            let k = kernel.coeffs.coeff(n);
            (crate::math::cabs(k), n, k)
        })
        .collect();
    if let Some(&(_, n, _)) = modes.iter().find(|m| !(m.0 > 0.0)) {
        return Err(Error::KernelCoefficient { index: n });
    }
    modes.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.abs().cmp(&b.1.abs()))
            .then((a.1 < 0).cmp(&(b.1 < 0)))
    });
    let sigmas = modes.iter().map(|m| m.0).collect();
    let left = modes
        .iter()
        .map(|&(s, n, k)| BasisVector { index: n, phase: k / s })
        .collect();
    let right = modes
        .iter()
        .map(|&(_, n, _)| BasisVector {
            index: n,
            phase: Complex64::new(1.0, 0.0),
        })
        .collect();
    SvdOperator::new(sigmas, left, right, alloc::vec![1.0; modes.len()])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversarialParams {
    rho: f64,
    truncation: usize,
}

impl AdversarialParams {
    pub fn new(rho: f64, truncation: usize) -> Result<Self> {
        check_rho(rho)?;
        Ok(AdversarialParams { rho, truncation })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// a_n = (|n|+1)^{−(1−ρ)}.
    pub fn amplitude(&self, n: i64) -> f64 {
        powf((n.abs() + 1) as f64, -(1.0 - self.rho))
    }
}

/// r_N = Σ_{|n|≤N} a_n u_n, with bandwidth N.
pub fn adversarial_perturbation(params: &AdversarialParams, kernel: &PeriodicKernel) -> Result<FourierSignal> {
    let n = params.truncation;
    if n > kernel.max_index() {
        return Err(Error::OutsideBasis { index: n as i64 });
    }
    let coeffs = (-(n as i64)..=n as i64)
        .map(|k| {
            let kh = kernel.coeffs.coeff(k);
            kh / crate::math::cabs(kh) * params.amplitude(k)
        })
        .collect();
    FourierSignal::with_detected_symmetry(n, coeffs)
}

/// a cos(2πft) + b sin(2πft).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub frequency: u32,
    pub cos: f64,
    pub sin: f64,
}

/// The three reconstruction targets, with their shape parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum TestSignalKind {
    /// A finite sum of harmonics.
    SmoothOscillatory { harmonics: Vec<Harmonic> },
    /// Periodic linear interpolation of knots (t_k, v_k), t_k increasing in [0, 1).
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// `high` on [start, end), `low` elsewhere.
    PiecewiseConstant {
        start: f64,
        end: f64,
        low: f64,
        high: f64,
    },
}

impl TestSignalKind {
    /// sin(2πt) + 0.5 cos(6πt) + 0.25 sin(10πt).
    pub fn smooth_oscillatory() -> Self {
        TestSignalKind::SmoothOscillatory {
            harmonics: alloc::vec![
                Harmonic { frequency: 1, cos: 0.0, sin: 1.0 },
                Harmonic { frequency: 3, cos: 0.5, sin: 0.0 },
                Harmonic { frequency: 5, cos: 0.0, sin: 0.25 },
            ],
        }
    }

    /// A periodic notch: 0 at t = 0, rising to 1 at 0.3, flat to 0.7, back to 0.
    pub fn piecewise_linear() -> Self {
        TestSignalKind::PiecewiseLinear {
            knots: alloc::vec![(0.0, 0.0), (0.3, 1.0), (0.7, 1.0)],
        }
    }

    /// 1 on [0, 0.4), 0 elsewhere.
    pub fn piecewise_constant() -> Self {
        TestSignalKind::PiecewiseConstant {
            start: 0.0,
            end: 0.4,
            low: 0.0,
            high: 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestSignalKind::SmoothOscillatory { .. } => "smooth_oscillatory",
            TestSignalKind::PiecewiseLinear { .. } => "piecewise_linear",
            TestSignalKind::PiecewiseConstant { .. } => "piecewise_constant",
        }
    }

    /// Exact pointwise value at t (taken mod 1).
    pub fn sample(&self, t: f64) -> f64 {
        let t = t - crate::math::floor(t);
        match self {
            TestSignalKind::SmoothOscillatory { harmonics } => harmonics
                .iter()
                .map(|h| {
                    let th = 2.0 * PI * f64::from(h.frequency) * t;
                    h.cos * crate::math::cos(th) + h.sin * crate::math::sin(th)
                })
                .sum(),
            TestSignalKind::PiecewiseLinear { knots } => {
                let segs = segments(knots);
                let (a, va, b, vb) = segs
                    .into_iter()
                    .find(|&(a, _, b, _)| t >= a && t < b)
                    .unwrap_or((0.0, knots[0].1, 1.0, knots[0].1));
                va + (vb - va) * (t - a) / (b - a)
            }
            TestSignalKind::PiecewiseConstant { start, end, low, high } => {
                if t >= *start && t < *end {
                    *high
                } else {
                    *low
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            TestSignalKind::SmoothOscillatory { harmonics } => !harmonics.is_empty(),
            TestSignalKind::PiecewiseLinear { knots } => {
                knots.len() >= 2
                    && knots[0].0 >= 0.0
                    && knots.last().is_some_and(|k| k.0 < 1.0)
                    && knots.windows(2).all(|w| w[1].0 > w[0].0)
            }
            TestSignalKind::PiecewiseConstant { start, end, .. } => 0.0 <= *start && start < end && *end <= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "kind",
                reason: "malformed test signal shape",
            })
        }
    }

    /// Exact Fourier coefficient c_n.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        let e = |t: f64| crate::math::cis(-2.0 * PI * n as f64 * t);
        let iw = Complex64::new(0.0, 2.0 * PI * n as f64);
        match self {
            TestSignalKind::SmoothOscillatory { harmonics } => harmonics
                .iter()
                .filter(|h| i64::from(h.frequency) == n.abs())
                .map(|h| {
                    if h.frequency == 0 {
                        Complex64::new(h.cos, 0.0)
                    } else {
                        let c = Complex64::new(h.cos / 2.0, -h.sin / 2.0);
                        if n > 0 {
                            c
                        } else {
                            c.conj()
                        }
                    }
                })
                .sum(),
            TestSignalKind::PiecewiseLinear { knots } => {
                let segs = segments(knots);
                if n == 0 {
                    return Complex64::new(segs.iter().map(|&(a, va, b, vb)| 0.5 * (va + vb) * (b - a)).sum(), 0.0);
                }
                // Two integrations by parts: x is continuous and periodic, x′ piecewise constant.
                segs.iter()
                    .map(|&(a, va, b, vb)| (e(a) - e(b)) * ((vb - va) / (b - a)))
                    .sum::<Complex64>()
                    / (iw * iw)
            }
            TestSignalKind::PiecewiseConstant { start, end, low, high } => {
                if n == 0 {
                    return Complex64::new(low + (high - low) * (end - start), 0.0);
                }
                (e(*start) - e(*end)) * (high - low) / iw
            }
        }
    }
}

/// Segments (a, v_a, b, v_b) covering [0, 1) for periodic interpolation.
fn segments(knots: &[(f64, f64)]) -> Vec<(f64, f64, f64, f64)> {
    let mut out: Vec<(f64, f64, f64, f64)> = knots.windows(2).map(|w| (w[0].0, w[0].1, w[1].0, w[1].1)).collect();
    let (first, last) = (knots[0], knots[knots.len() - 1]);
    let wrap_value = if first.0 == 0.0 {
        first.1
    } else {
        // Value at t = 0 on the wrapping segment from `last` to `first` + 1.
        last.1 + (first.1 - last.1) * (1.0 - last.0) / (first.0 + 1.0 - last.0)
    };
    out.push((last.0, last.1, 1.0, wrap_value));
    if first.0 > 0.0 {
        out.insert(0, (0.0, wrap_value, first.0, first.1));
    }
    out
}

/// Minimum bandwidth for [`test_signal`].
pub const MIN_TEST_BANDWIDTH: usize = 64;

/// Fourier projection of the test signal onto |n| ≤ bandwidth.
pub fn test_signal(kind: &TestSignalKind, bandwidth: usize) -> Result<FourierSignal> {
    if bandwidth < MIN_TEST_BANDWIDTH {
        return Err(Error::InvalidParameter {
            name: "bandwidth",
            reason: "test signals need bandwidth at least 64",
        });
    }
    kind.validate()?;
    Ok(FourierSignal::real_from_half(bandwidth, |k| kind.coefficient(k as i64)))
}
