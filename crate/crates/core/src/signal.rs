//! Truncated Fourier series on the unit circle and their sampling.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;

const SYMMETRY_TOL: f64 = 1e-12;
const IMAG_DROP_TOL: f64 = 1e-10;

/// Coefficients c_n, n ∈ [−N, N], of a trigonometric polynomial on 𝕋 = [0, 1).
///
/// When `real_symmetric` is set, c_{−n} = conj(c_n) has been checked and the
/// synthesized signal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSignal {
    max_index: usize,
    coeffs: Vec<Complex64>,
    real_symmetric: bool,
}

impl FourierSignal {
    /// Wraps `coeffs` (ordered n = −N..=N). With `real_symmetric` the
    /// conjugate symmetry is verified.
    pub fn new(max_index: usize, coeffs: Vec<Complex64>, real_symmetric: bool) -> Result<Self> {
        if coeffs.len() != 2 * max_index + 1 {
            return Err(Error::LengthMismatch {
                expected: 2 * max_index + 1,
                found: coeffs.len(),
            });
        }
        let s = FourierSignal {
            max_index,
            coeffs,
            real_symmetric: false,
        };
        if real_symmetric {
            s.check_symmetry()?;
        }
        Ok(FourierSignal {
            real_symmetric,
            ..s
        })
    }

    /// Like [`FourierSignal::new`], but sets the flag only if the symmetry holds.
    pub fn with_detected_symmetry(max_index: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let mut s = Self::new(max_index, coeffs, false)?;
        s.real_symmetric = s.check_symmetry().is_ok();
        Ok(s)
    }

    pub fn zeros(max_index: usize) -> Self {
        FourierSignal {
            max_index,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * max_index + 1],
            real_symmetric: true,
        }
    }

    /// Complex signal with c_n = f(n).
    pub fn from_fn(max_index: usize, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let n = max_index as i64;
        FourierSignal {
            max_index,
            coeffs: (-n..=n).map(&mut f).collect(),
            real_symmetric: false,
        }
    }

    /// Real signal from its non-negative half: c_n = f(n) for n ≥ 0 and
    /// c_{−n} = conj(f(n)). The imaginary part of f(0) is discarded.
    pub fn real_from_half(max_index: usize, mut f: impl FnMut(u64) -> Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * max_index + 1];
        for k in 0..=max_index {
            let mut c = f(k as u64);
            if k == 0 {
                c.im = 0.0;
            }
            coeffs[max_index + k] = c;
            coeffs[max_index - k] = c.conj();
        }
        FourierSignal {
            max_index,
            coeffs,
            real_symmetric: true,
        }
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// Coefficients ordered n = −N..=N.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    /// c_n, or zero for |n| > N.
    pub fn coeff(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.max_index {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + self.max_index as i64) as usize]
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + Clone {
        let n = self.max_index as i64;
        -n..=n
    }

    /// Σ |c_n|².
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Maps each coefficient; the flag survives only if `keeps_symmetry`
    /// and the result is still symmetric.
    pub fn map(&self, keeps_symmetry: bool, mut f: impl FnMut(i64, Complex64) -> Complex64) -> Self {
        let coeffs: Vec<Complex64> = self.indices().zip(&self.coeffs).map(|(n, &c)| f(n, c)).collect();
        let mut s = FourierSignal {
            max_index: self.max_index,
            coeffs,
            real_symmetric: false,
        };
        s.real_symmetric = keeps_symmetry && self.real_symmetric && s.check_symmetry().is_ok();
        s
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * lambda).collect();
        FourierSignal {
            max_index: self.max_index,
            coeffs,
            real_symmetric: self.real_symmetric && lambda.im == 0.0,
        }
    }

    /// Truncates or zero-pads to a new bandwidth.
    pub fn resized(&self, max_index: usize) -> Self {
        let n = max_index as i64;
        FourierSignal {
            max_index,
            coeffs: (-n..=n).map(|k| self.coeff(k)).collect(),
            real_symmetric: self.real_symmetric,
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let max_index = self.max_index.max(other.max_index);
        let n = max_index as i64;
        FourierSignal {
            max_index,
            coeffs: (-n..=n).map(|k| f(self.coeff(k), other.coeff(k))).collect(),
            real_symmetric: self.real_symmetric && other.real_symmetric,
        }
    }

    fn check_symmetry(&self) -> Result<()> {
        let scale = self.coeffs.iter().map(|c| crate::math::cabs(*c)).fold(1.0_f64, f64::max);
        for k in 0..=self.max_index as i64 {
            let dev = crate::math::cabs(self.coeff(-k) - self.coeff(k).conj());
            if !(dev <= SYMMETRY_TOL * scale) {
                return Err(Error::NotConjugateSymmetric {
                    index: k,
                    deviation: dev,
                });
            }
        }
        Ok(())
    }
}

impl Add for &FourierSignal {
    type Output = FourierSignal;
    fn add(self, rhs: &FourierSignal) -> FourierSignal {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &FourierSignal {
    type Output = FourierSignal;
    fn sub(self, rhs: &FourierSignal) -> FourierSignal {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &FourierSignal {
    type Output = FourierSignal;
    fn mul(self, rhs: f64) -> FourierSignal {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

/// M equispaced points t_j = j/M on [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    point_count: usize,
}

impl TorusGrid {
    pub fn new(point_count: usize) -> Result<Self> {
        if point_count == 0 {
            return Err(Error::InvalidParameter {
                name: "point_count",
                reason: "must be positive",
            });
        }
        Ok(TorusGrid { point_count })
    }

    /// The sup-norm grid for bandwidth N: the next power of two at or
    /// above 8(2N+1) points.
    pub fn sup_grid_for(max_index: usize) -> Self {
        TorusGrid {
            point_count: (8 * (2 * max_index + 1)).next_power_of_two(),
        }
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.point_count as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        j as f64 / self.point_count as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.point_count).map(|j| self.point(j))
    }
}

/// Samples Σ_n c_n e^{2πi n t_j} on the grid.
///
/// For real-symmetric signals, imaginary parts below 1e−10 are zeroed.
pub fn synthesize(signal: &FourierSignal, grid: &TorusGrid) -> Result<Vec<Complex64>> {
    let m = grid.point_count;
    let n = signal.max_index;
    if m < 2 * n + 1 {
        return Err(Error::Aliasing {
            points: m,
            max_index: n,
        });
    }
    let mut out = if m.is_power_of_two() {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (k, c) in signal.indices().zip(&signal.coeffs) {
            buf[k.rem_euclid(m as i64) as usize] = *c;
        }
        fft::fft_in_place(&mut buf, 1.0);
        buf
    } else {
        fft::direct_sum(signal.indices(), &signal.coeffs, m, 1.0)
    };
    if signal.real_symmetric {
        for v in &mut out {
            if v.im.abs() < IMAG_DROP_TOL {
                v.im = 0.0;
            }
        }
    }
    Ok(out)
}

/// Real samples of a real-symmetric signal.
pub fn synthesize_real(signal: &FourierSignal, grid: &TorusGrid) -> Result<Vec<f64>> {
    if !signal.real_symmetric {
        return Err(Error::InvalidParameter {
            name: "signal",
            reason: "real synthesis needs a real-symmetric signal",
        });
    }
    Ok(synthesize(signal, grid)?.into_iter().map(|v| v.re).collect())
}

/// c_n = (1/M) Σ_j s_j e^{−2πi n t_j} for |n| ≤ N, with M = `samples.len()`.
pub fn analyze(samples: &[Complex64], max_index: usize) -> Result<FourierSignal> {
    let raw = analyze_raw(samples, max_index)?;
    FourierSignal::with_detected_symmetry(max_index, raw)
}

/// Analysis of real samples; the result is exactly conjugate-symmetric.
pub fn analyze_real(samples: &[f64], max_index: usize) -> Result<FourierSignal> {
    let cs: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let raw = analyze_raw(&cs, max_index)?;
    Ok(FourierSignal::real_from_half(max_index, |k| raw[max_index + k as usize]))
}

fn analyze_raw(samples: &[Complex64], max_index: usize) -> Result<Vec<Complex64>> {
    let m = samples.len();
    if m < 2 * max_index + 1 {
        return Err(Error::Aliasing {
            points: m,
            max_index,
        });
    }
    let scale = 1.0 / m as f64;
    let n = max_index as i64;
    if m.is_power_of_two() {
        let mut buf = samples.to_vec();
        fft::fft_in_place(&mut buf, -1.0);
        Ok((-n..=n)
            .map(|k| buf[k.rem_euclid(m as i64) as usize] * scale)
            .collect())
    } else {
        // Swap roles: sum over grid points j with "index" j, evaluated at the
        // 2N+1 frequencies.
        let mut out = Vec::with_capacity(2 * max_index + 1);
        let w: Vec<Complex64> = (0..m)
            .map(|k| crate::math::cis(-2.0 * crate::math::PI * k as f64 / m as f64))
            .collect();
        for k in -n..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, s) in samples.iter().enumerate() {
                acc += s * w[(k * j as i64).rem_euclid(m as i64) as usize];
            }
            out.push(acc * scale);
        }
        Ok(out)
    }
}
