//! Spectral filtering of a compact operator's SVD.
//!
//! With Ax = Σ σ_n ⟨x, v_n⟩ u_n, every scheme here reconstructs
//! x ≈ Σ f(σ_n)·⟨y, u_n⟩ v_n for some filter factor f. The weighted filter
//! f = σ_n / (σ_n² + α c_n) with growing weights c_n damps high modes harder
//! than Tikhonov and stays bounded into L∞ (with ‖T^c_α‖_{Y→L∞} ≤ C′/α)
//! whenever Σ σ_n^η ‖v_n‖²_∞ < ∞.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{powf, sqrt};
use crate::series::{diagnose, SeriesVerdict};
use crate::signal::{synthesize, FourierSignal, TorusGrid};

/// One singular vector: `phase`·e^{2πi·index·t}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisVector {
    pub index: i64,
    pub phase: Complex64,
}

/// A truncated SVD whose singular vectors are phase-shifted Fourier modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdOperator {
    sigmas: Vec<f64>,
    left: Vec<BasisVector>,
    right: Vec<BasisVector>,
    v_sup_norms: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl SvdOperator {
    pub fn new(
        sigmas: Vec<f64>,
        left: Vec<BasisVector>,
        right: Vec<BasisVector>,
        v_sup_norms: Vec<f64>,
    ) -> Result<Self> {
        let op = Self::from_parts_unchecked(sigmas, left, right, v_sup_norms);
        op.validate()?;
        Ok(op)
    }

    /// Builds without checks. Use [`SvdOperator::validate`] afterwards; this
    /// exists so invariant checks can be exercised on corrupted operators.
    pub fn from_parts_unchecked(
        sigmas: Vec<f64>,
        left: Vec<BasisVector>,
        right: Vec<BasisVector>,
        v_sup_norms: Vec<f64>,
    ) -> Self {
        SvdOperator {
            sigmas,
            left,
            right,
            v_sup_norms,
        }
    }

    /// Checks lengths, singular value ordering, unit phases, distinct
    /// indices, and sup-norm metadata.
    pub fn validate(&self) -> Result<()> {
        let n = self.sigmas.len();
        for len in [self.left.len(), self.right.len(), self.v_sup_norms.len()] {
            if len != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        for (mode, &s) in self.sigmas.iter().enumerate() {
            let ordered = mode == 0 || s <= self.sigmas[mode - 1];
            if !(s > 0.0 && s.is_finite() && ordered) {
                return Err(Error::SingularValueOrder { mode });
            }
        }
        for basis in [&self.left, &self.right] {
            for (mode, b) in basis.iter().enumerate() {
                if (crate::math::cabs(b.phase) - 1.0).abs() > 1e-12 {
                    return Err(Error::BasisNotOrthonormal {
                        detail: "phase is not unimodular",
                        mode,
                    });
                }
            }
            let mut idx: Vec<(i64, usize)> = basis.iter().enumerate().map(|(m, b)| (b.index, m)).collect();
            idx.sort_unstable();
            if let Some(w) = idx.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::BasisNotOrthonormal {
                    detail: "repeated Fourier index",
                    mode: w[1].1.max(w[0].1),
                });
            }
        }
        for (mode, &v) in self.v_sup_norms.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::BasisNotOrthonormal {
                    detail: "sup norm must be positive",
                    mode,
                });
            }
        }
        Ok(())
    }

    /// Largest |⟨b_i, b_j⟩ − δ_ij| over the first `limit` vectors of one
    /// side, with inner products computed from synthesized samples.
    pub fn gram_check(&self, side: Side, limit: usize) -> Result<f64> {
        let basis = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        let basis = &basis[..limit.min(basis.len())];
        let k = basis.iter().map(|b| b.index.unsigned_abs() as usize).max().unwrap_or(0);
        let grid = TorusGrid::new((2 * k + 1).next_power_of_two().max(2))?;
        let m = grid.point_count() as f64;
        let samples: Vec<Vec<Complex64>> = basis
            .iter()
            .map(|b| {
                let s = FourierSignal::from_fn(k, |n| if n == b.index { b.phase } else { Complex64::new(0.0, 0.0) });
                synthesize(&s, &grid)
            })
            .collect::<Result<_>>()?;
        let mut worst = 0.0_f64;
        for (i, a) in samples.iter().enumerate() {
            for (j, b) in samples.iter().enumerate().skip(i) {
                let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>() / m;
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(crate::math::cabs(ip - target));
            }
        }
        Ok(worst)
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn left(&self) -> &[BasisVector] {
        &self.left
    }

    pub fn right(&self) -> &[BasisVector] {
        &self.right
    }

    pub fn v_sup_norms(&self) -> &[f64] {
        &self.v_sup_norms
    }

    /// ⟨y, u_n⟩ for every mode. Fails if y has energy outside the left basis.
    pub fn project(&self, y: &FourierSignal) -> Result<Vec<Complex64>> {
        let kl = self.left.iter().map(|b| b.index.unsigned_abs()).max().unwrap_or(0) as i64;
        let mut covered = vec![false; 2 * kl as usize + 1];
        for b in &self.left {
            covered[(b.index + kl) as usize] = true;
        }
        for n in y.indices() {
            let inside = n.abs() <= kl && covered[(n + kl) as usize];
            if !inside && y.coeff(n) != Complex64::new(0.0, 0.0) {
                return Err(Error::OutsideBasis { index: n });
            }
        }
        Ok(self.left.iter().map(|b| b.phase.conj() * y.coeff(b.index)).collect())
    }

    fn assemble(basis: &[BasisVector], coeffs: &[Complex64]) -> FourierSignal {
        let k = basis.iter().map(|b| b.index.unsigned_abs()).max().unwrap_or(0) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        for (b, c) in basis.iter().zip(coeffs) {
            out[(b.index + k as i64) as usize] += c * b.phase;
        }
        FourierSignal::with_detected_symmetry(k, out).expect("length is 2k+1")
    }

    /// Σ a_n v_n.
    pub fn synthesize_right(&self, coeffs: &[Complex64]) -> FourierSignal {
        Self::assemble(&self.right, coeffs)
    }

    /// Σ a_n u_n.
    pub fn synthesize_left(&self, coeffs: &[Complex64]) -> FourierSignal {
        Self::assemble(&self.left, coeffs)
    }
}

/// Per-mode weights c_n with floor c_0 and growth bound c_n ≤ C σ_n^{−β}.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSchedule {
    c: Vec<f64>,
    floor: f64,
    growth_exponent: f64,
    growth_constant: f64,
}

const SCHEDULE_TOL: f64 = 1e-12;

impl WeightSchedule {
    /// Checks c_n ≥ c_0 and c_n ≤ C σ_n^{−β} against `sigmas`.
    pub fn new(
        c: Vec<f64>,
        floor: f64,
        growth_exponent: f64,
        growth_constant: f64,
        sigmas: &[f64],
    ) -> Result<Self> {
        if !(floor > 0.0) {
            return Err(Error::InvalidParameter {
                name: "floor",
                reason: "must be positive",
            });
        }
        if c.len() != sigmas.len() {
            return Err(Error::LengthMismatch {
                expected: sigmas.len(),
                found: c.len(),
            });
        }
        for (mode, (&cn, &s)) in c.iter().zip(sigmas).enumerate() {
            if !(cn >= floor * (1.0 - SCHEDULE_TOL)) {
                return Err(Error::WeightSchedule {
                    bound: "c_n ≥ c_0",
                    mode,
                });
            }
            if !(cn <= growth_constant * powf(s, -growth_exponent) * (1.0 + SCHEDULE_TOL)) {
                return Err(Error::WeightSchedule {
                    bound: "c_n ≤ C σ_n^(−β)",
                    mode,
                });
            }
        }
        Ok(WeightSchedule {
            c,
            floor,
            growth_exponent,
            growth_constant,
        })
    }

    /// c_n ≡ 1, which turns the weighted filter into Tikhonov.
    pub fn constant(value: f64, len: usize) -> Result<Self> {
        Self::new(vec![value; len], value, 0.0, value, &vec![1.0; len])
    }

    pub fn weights(&self) -> &[f64] {
        &self.c
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn growth_exponent(&self) -> f64 {
        self.growth_exponent
    }

    pub fn growth_constant(&self) -> f64 {
        self.growth_constant
    }
}

/// c_n = c0 for η ≤ 2, else c_n = C σ_n^{1−η/2} (growth exponent η/2 − 1,
/// floor min c_n).
pub fn weight_schedule(op: &SvdOperator, eta: f64, c0: f64, big_c: f64) -> Result<WeightSchedule> {
    for (name, v) in [("eta", eta), ("c0", c0), ("C", big_c)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter {
                name,
                reason: "must be positive",
            });
        }
    }
    let sig = op.sigmas();
    if eta <= 2.0 {
        WeightSchedule::new(vec![c0; sig.len()], c0, 0.0, c0, sig)
    } else {
        let c: Vec<f64> = sig.iter().map(|&s| big_c * powf(s, 1.0 - eta / 2.0)).collect();
        let floor = c.iter().copied().fold(f64::INFINITY, f64::min);
        WeightSchedule::new(c, floor, eta / 2.0 - 1.0, big_c, sig)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Pseudoinverse,
    Tikhonov,
    Tsvd,
    Weighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterScheme {
    pub kind: FilterKind,
    pub alpha: f64,
    pub weights: Option<WeightSchedule>,
}

impl FilterScheme {
    pub fn pseudoinverse() -> Self {
        FilterScheme {
            kind: FilterKind::Pseudoinverse,
            alpha: 0.0,
            weights: None,
        }
    }

    pub fn tikhonov(alpha: f64) -> Result<Self> {
        Self::checked(FilterKind::Tikhonov, alpha, None)
    }

    pub fn tsvd(alpha: f64) -> Result<Self> {
        Self::checked(FilterKind::Tsvd, alpha, None)
    }

    pub fn weighted(alpha: f64, weights: WeightSchedule) -> Result<Self> {
        Self::checked(FilterKind::Weighted, alpha, Some(weights))
    }

    fn checked(kind: FilterKind, alpha: f64, weights: Option<WeightSchedule>) -> Result<Self> {
        let s = FilterScheme { kind, alpha, weights };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind != FilterKind::Pseudoinverse && !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "must be positive",
            });
        }
        match (self.kind, &self.weights) {
            (FilterKind::Weighted, None) => Err(Error::MissingWeights),
            _ => Ok(()),
        }
    }

    /// Filter factor for mode `mode` with singular value σ.
    pub fn factor(&self, mode: usize, sigma: f64) -> f64 {
        let a = self.alpha;
        match self.kind {
            FilterKind::Pseudoinverse => 1.0 / sigma,
            FilterKind::Tikhonov => sigma / (sigma * sigma + a),
            FilterKind::Tsvd if sigma * sigma >= a => 1.0 / sigma,
            FilterKind::Tsvd => 0.0,
            FilterKind::Weighted => {
                let c = self.weights.as_ref().map_or(1.0, |w| w.c[mode]);
                sigma / (sigma * sigma + a * c)
            }
        }
    }
}

/// Output of [`apply_filter`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub signal: FourierSignal,
    /// Picard diagnosis of the data, reported for the pseudoinverse only.
    pub picard: Option<SeriesVerdict>,
}

impl Reconstruction {
    /// True when the pseudoinverse was applied to data failing the Picard test.
    pub fn flagged(&self) -> bool {
        self.picard.as_ref().is_some_and(|v| !v.converging)
    }
}

/// Σ f(σ_n) ⟨y, u_n⟩ v_n for the scheme's filter factor f.
pub fn apply_filter(op: &SvdOperator, scheme: &FilterScheme, y: &FourierSignal) -> Result<Reconstruction> {
    scheme.validate()?;
    if let Some(w) = &scheme.weights {
        if w.c.len() != op.len() {
            return Err(Error::LengthMismatch {
                expected: op.len(),
                found: w.c.len(),
            });
        }
    }
    let coeffs = op.project(y)?;
    let filtered: Vec<Complex64> = coeffs
        .iter()
        .zip(op.sigmas())
        .enumerate()
        .map(|(m, (c, &s))| c * scheme.factor(m, s))
        .collect();
    let picard = (scheme.kind == FilterKind::Pseudoinverse).then(|| {
        let terms: Vec<f64> = coeffs.iter().zip(op.sigmas()).map(|(c, s)| c.norm_sqr() / (s * s)).collect();
        diagnose(&terms)
    });
    Ok(Reconstruction {
        signal: op.synthesize_right(&filtered),
        picard,
    })
}

/// Terms |⟨y,u_n⟩|² / σ_n^{2+η} in mode order.
pub fn picard_terms(op: &SvdOperator, y: &FourierSignal, eta: f64) -> Result<Vec<f64>> {
    check_nonneg("eta", eta)?;
    Ok(op
        .project(y)?
        .iter()
        .zip(op.sigmas())
        .map(|(c, &s)| c.norm_sqr() / powf(s, 2.0 + eta))
        .collect())
}

/// Truncated P_η(y) = Σ |⟨y,u_n⟩|² / σ_n^{2+η}.
pub fn picard_sum(op: &SvdOperator, y: &FourierSignal, eta: f64) -> Result<f64> {
    Ok(picard_terms(op, y, eta)?.iter().sum())
}

/// Terms |⟨y,u_n⟩| ‖v_n‖_∞ / σ_n in mode order.
pub fn uniform_terms(op: &SvdOperator, y: &FourierSignal) -> Result<Vec<f64>> {
    Ok(op
        .project(y)?
        .iter()
        .zip(op.sigmas())
        .zip(op.v_sup_norms())
        .map(|((c, &s), &v)| crate::math::cabs(*c) * v / s)
        .collect())
}

/// Truncated Σ |⟨y,u_n⟩| ‖v_n‖_∞ / σ_n, an upper bound on ‖A†y‖_∞.
pub fn uniform_sum(op: &SvdOperator, y: &FourierSignal) -> Result<f64> {
    Ok(uniform_terms(op, y)?.iter().sum())
}

/// Canonical data with ⟨y, u_m⟩ = σ_m^{(2+s)/2} / m (m = 1, 2, …), so that
/// P_s(y) = Σ 1/m² is finite and y lies in the source set V_s.
pub fn source_set_data(op: &SvdOperator, smoothness: f64) -> FourierSignal {
    let coeffs: Vec<Complex64> = op
        .sigmas()
        .iter()
        .enumerate()
        .map(|(m, &s)| Complex64::new(powf(s, (2.0 + smoothness) / 2.0) / (m + 1) as f64, 0.0))
        .collect();
    op.synthesize_left(&coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateEnvelope {
    /// max_σ σ^η/(σ²+α)² ≤ constant·α^{η/2−2}.
    Envelope { constant: f64, bound: f64 },
    /// For η ≥ 4, σ^η/(σ²+α)² is strictly increasing in σ.
    Increasing,
}

/// C_η = (η/(4−η))^{η/2} (η/(4−η) + 1)^{−2} and the envelope C_η α^{η/2−2}.
pub fn rate_envelope(eta: f64, alpha: f64) -> Result<RateEnvelope> {
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "must be positive",
        });
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "must be positive",
        });
    }
    if eta >= 4.0 {
        return Ok(RateEnvelope::Increasing);
    }
    let q = eta / (4.0 - eta);
    let constant = powf(q, eta / 2.0) / ((q + 1.0) * (q + 1.0));
    Ok(RateEnvelope::Envelope {
        constant,
        bound: constant * powf(alpha, eta / 2.0 - 2.0),
    })
}

/// α(δ) = √δ.
pub fn choose_alpha(delta: f64) -> Result<f64> {
    check_nonneg("delta", delta)?;
    Ok(sqrt(delta))
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be finite and non-negative",
        })
    }
}

/// Smoothness η of the data and noise level δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessParams {
    eta: f64,
    delta: f64,
}

impl SmoothnessParams {
    pub fn new(eta: f64, delta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: "must be positive",
            });
        }
        check_nonneg("delta", delta)?;
        Ok(SmoothnessParams { eta, delta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The a-priori choice α = √δ.
    pub fn alpha(&self) -> f64 {
        sqrt(self.delta)
    }
}

/// C′ with ‖T^c_α y‖_∞ ≤ (C′/α) ‖y‖, and the diagnosis of Σ σ_n^η ‖v_n‖²_∞.
#[derive(Debug, Clone, PartialEq)]
pub struct LinfBound {
    pub constant: f64,
    pub tail: SeriesVerdict,
}

impl LinfBound {
    /// True when the tail sum does not look convergent.
    pub fn flagged(&self) -> bool {
        !self.tail.converging
    }
}

/// For η ≤ 2: C′ = σ_1^{1−η/2} ‖(σ_n^{η/2}‖v_n‖_∞)‖_{ℓ²} / c_0.
/// For η > 2: C′ = ‖(σ_n^{η/2}‖v_n‖_∞)‖_{ℓ²} / C with C = min_n c_n σ_n^{η/2−1},
/// the largest constant satisfying c_n ≥ C σ_n^{1−η/2}.
pub fn linf_bound_constant(op: &SvdOperator, schedule: &WeightSchedule, eta: f64) -> Result<LinfBound> {
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "must be positive",
        });
    }
    if schedule.c.len() != op.len() {
        return Err(Error::LengthMismatch {
            expected: op.len(),
            found: schedule.c.len(),
        });
    }
    let terms: Vec<f64> = op
        .sigmas()
        .iter()
        .zip(op.v_sup_norms())
        .map(|(&s, &v)| powf(s, eta) * v * v)
        .collect();
    let tail = diagnose(&terms);
    let ell2 = sqrt(tail.total);
    let constant = if eta <= 2.0 {
        let s1 = op.sigmas().first().copied().unwrap_or(1.0);
        powf(s1, 1.0 - eta / 2.0) * ell2 / schedule.floor
    } else {
        let c_eff = schedule
            .c
            .iter()
            .zip(op.sigmas())
            .map(|(&c, &s)| c * powf(s, eta / 2.0 - 1.0))
            .fold(f64::INFINITY, f64::min);
        ell2 / c_eff
    };
    Ok(LinfBound { constant, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{norm, NormKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Modes on indices 0..n with random phases and random decreasing σ.
    fn random_op(rng: &mut ChaCha8Rng, n: usize) -> SvdOperator {
        let mut sig: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-3.0..0.0))).collect();
        sig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let phase = |rng: &mut ChaCha8Rng| Complex64::from_polar(1.0, rng.random_range(0.0..6.28));
        let left = (0..n).map(|i| BasisVector { index: i as i64, phase: phase(rng) }).collect();
        let right = (0..n).map(|i| BasisVector { index: i as i64, phase: phase(rng) }).collect();
        SvdOperator::new(sig, left, right, vec![1.0; n]).unwrap()
    }

    fn random_data(rng: &mut ChaCha8Rng, n: usize) -> FourierSignal {
        FourierSignal::from_fn(n - 1, |k| {
            if k < 0 {
                c(0.0)
            } else {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }
        })
    }

    fn single_mode(sigma: f64) -> SvdOperator {
        let b = BasisVector { index: 0, phase: c(1.0) };
        SvdOperator::new(vec![sigma], vec![b], vec![b], vec![1.0]).unwrap()
    }

    #[test]
    fn single_mode_tikhonov() {
        let op = single_mode(1.0);
        let y = FourierSignal::real_from_half(0, |_| c(1.0));
        let x = apply_filter(&op, &FilterScheme::tikhonov(1.0).unwrap(), &y).unwrap();
        assert_eq!(x.signal.coeff(0), c(0.5));
        assert!(x.picard.is_none());
    }

    #[test]
    fn filter_factors() {
        let w = WeightSchedule::new(vec![2.0], 2.0, 0.0, 2.0, &[0.5]).unwrap();
        let cases = [
            (FilterScheme::pseudoinverse(), 2.0),
            (FilterScheme::tikhonov(0.25).unwrap(), 1.0),
            (FilterScheme::tsvd(0.25).unwrap(), 2.0),
            (FilterScheme::tsvd(0.26).unwrap(), 0.0),
            (FilterScheme::weighted(0.25, w).unwrap(), 0.5 / 0.75),
        ];
        for (s, want) in cases {
            assert!((s.factor(0, 0.5) - want).abs() < 1e-15, "{:?}", s.kind);
        }
        let bad = FilterScheme {
            kind: FilterKind::Weighted,
            alpha: 1.0,
            weights: None,
        };
        let op = single_mode(1.0);
        assert_eq!(apply_filter(&op, &bad, &FourierSignal::zeros(0)), Err(Error::MissingWeights));
        assert!(FilterScheme::tikhonov(0.0).is_err());
    }

    #[test]
    fn weighted_with_unit_weights_is_tikhonov() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let op = random_op(&mut rng, 30);
            let y = random_data(&mut rng, 30);
            let alpha = 10f64.powf(rng.random_range(-4.0..0.0));
            let w = WeightSchedule::constant(1.0, 30).unwrap();
            let a = apply_filter(&op, &FilterScheme::weighted(alpha, w).unwrap(), &y).unwrap();
            let b = apply_filter(&op, &FilterScheme::tikhonov(alpha).unwrap(), &y).unwrap();
            assert_eq!(a.signal, b.signal);
        }
    }

    #[test]
    fn tikhonov_norm_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let op = random_op(&mut rng, 40);
            let y = random_data(&mut rng, 40);
            let alpha = 10f64.powf(rng.random_range(-4.0..0.0));
            let x = apply_filter(&op, &FilterScheme::tikhonov(alpha).unwrap(), &y).unwrap();
            let lhs = norm(&x.signal, NormKind::L2Torus).unwrap();
            let rhs = norm(&y, NormKind::L2Torus).unwrap() / alpha.sqrt();
            assert!(lhs <= rhs + 1e-10);
        }
    }

    #[test]
    fn pseudoinverse_flags_non_picard_data() {
        let n = 512;
        let b: Vec<BasisVector> = (0..n).map(|i| BasisVector { index: i as i64, phase: c(1.0) }).collect();
        let sig: Vec<f64> = (0..n).map(|i| 1.0 / (i + 1) as f64).collect();
        let op = SvdOperator::new(sig, b.clone(), b, vec![1.0; n]).unwrap();
        let rough = FourierSignal::from_fn(n - 1, |k| if k >= 0 { c(1.0 / (k + 1) as f64) } else { c(0.0) });
        let x = apply_filter(&op, &FilterScheme::pseudoinverse(), &rough).unwrap();
        assert!(x.flagged());
        assert_eq!(x.signal.coeff(7), c(1.0));
        let smooth = FourierSignal::from_fn(n - 1, |k| if k >= 0 { c(((k + 1) as f64).powi(-3)) } else { c(0.0) });
        assert!(!apply_filter(&op, &FilterScheme::pseudoinverse(), &smooth).unwrap().flagged());
    }

    #[test]
    fn operator_validation() {
        let b = |i: i64| BasisVector { index: i, phase: c(1.0) };
        let unordered = SvdOperator::new(vec![0.5, 1.0], vec![b(0), b(1)], vec![b(0), b(1)], vec![1.0; 2]);
        assert_eq!(unordered, Err(Error::SingularValueOrder { mode: 1 }));
        let repeated = SvdOperator::new(vec![1.0, 0.5], vec![b(0), b(0)], vec![b(0), b(1)], vec![1.0; 2]);
        assert!(matches!(repeated, Err(Error::BasisNotOrthonormal { .. })));
        let scaled = BasisVector { index: 2, phase: c(2.0) };
        let bad_phase = SvdOperator::new(vec![1.0], vec![scaled], vec![b(0)], vec![1.0]);
        assert!(matches!(bad_phase, Err(Error::BasisNotOrthonormal { .. })));
        let tampered = SvdOperator::from_parts_unchecked(vec![0.1, 0.2], vec![b(0), b(1)], vec![b(0), b(1)], vec![1.0; 2]);
        assert!(tampered.validate().is_err());
    }

    #[test]
    fn gram_check_on_random_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let op = random_op(&mut rng, 64);
        assert!(op.gram_check(Side::Left, 64).unwrap() < 1e-10);
        assert!(op.gram_check(Side::Right, 64).unwrap() < 1e-10);
    }

    #[test]
    fn projection_rejects_foreign_modes() {
        let op = single_mode(1.0);
        let y = FourierSignal::real_from_half(1, |k| c(k as f64));
        assert_eq!(op.project(&y), Err(Error::OutsideBasis { index: -1 }));
    }

    #[test]
    fn weight_schedule_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let op = random_op(&mut rng, 50);
        let s1 = weight_schedule(&op, 1.0, 0.7, 3.0).unwrap();
        assert!(s1.weights().iter().all(|&w| w == 0.7));
        let s3 = weight_schedule(&op, 3.0, 1.0, 2.0).unwrap();
        assert_eq!(s3.growth_exponent(), 0.5);
        for (w, &s) in s3.weights().iter().zip(op.sigmas()) {
            assert!(*w >= s3.floor());
            assert!(*w <= 2.0 * s.powf(-0.5) * (1.0 + 1e-12));
        }
        assert!(weight_schedule(&op, 0.0, 1.0, 1.0).is_err());
        assert!(WeightSchedule::new(vec![0.5], 1.0, 0.0, 1.0, &[1.0]).is_err());
        assert!(WeightSchedule::new(vec![5.0], 1.0, 1.0, 1.0, &[0.5]).is_err());
    }

    #[test]
    fn picard_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let op = random_op(&mut rng, 20);
        let u1 = op.synthesize_left(&[c(1.0)]);
        for eta in [0.0, 1.0, 2.5] {
            let want = op.sigmas()[0].powf(-2.0 - eta);
            assert!((picard_sum(&op, &u1, eta).unwrap() - want).abs() < 1e-12 * want);
        }
        let coeffs: Vec<Complex64> = op.sigmas().iter().map(|s| c(s * s)).collect();
        let y = op.synthesize_left(&coeffs);
        let direct: f64 = op.sigmas().iter().map(|s| s * s).sum();
        assert!((picard_sum(&op, &y, 0.0).unwrap() - direct).abs() < 1e-12);
        let v1 = op.v_sup_norms()[0] / op.sigmas()[0];
        assert!((uniform_sum(&op, &u1).unwrap() - v1).abs() < 1e-12 * v1);
    }

    #[test]
    fn picard_nesting_on_geometric_sigmas() {
        let n = 200;
        let b: Vec<BasisVector> = (0..n).map(|i| BasisVector { index: i as i64, phase: c(1.0) }).collect();
        let sig: Vec<f64> = (0..n).map(|i| 0.9f64.powi(i as i32)).collect();
        let op = SvdOperator::new(sig.clone(), b.clone(), b, vec![1.0; n]).unwrap();
        // ⟨y,u_n⟩ = σ_n^{(2+η)/2}·0.95^n is in V_η for η = 2.
        let eta = 2.0;
        let coeffs: Vec<Complex64> = sig.iter().enumerate().map(|(i, s)| c(s.powf((2.0 + eta) / 2.0) * 0.95f64.powi(i as i32))).collect();
        let y = op.synthesize_left(&coeffs);
        assert!(diagnose(&picard_terms(&op, &y, eta).unwrap()).converging);
        for mu in [0.0, 0.5, 1.0, 1.5] {
            let p_mu = picard_sum(&op, &y, mu).unwrap();
            assert!(diagnose(&picard_terms(&op, &y, mu).unwrap()).converging);
            assert!(p_mu <= picard_sum(&op, &y, eta).unwrap());
        }
        let partial: Vec<f64> = (1..=n).map(|k| picard_terms(&op, &y, eta).unwrap()[..k].iter().sum()).collect();
        assert!(partial.windows(2).all(|w| w[1] >= w[0]));
    }

    /// Golden-section maximization of h(σ) = σ^η/(σ²+α)² over log σ.
    fn golden_max(eta: f64, alpha: f64) -> f64 {
        let h = |x: f64| {
            let s = x.exp();
            s.powf(eta) / (s * s + alpha).powi(2)
        };
        let (mut a, mut b) = (-30.0_f64, 10.0_f64);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c1 = b - g * (b - a);
            let c2 = a + g * (b - a);
            if h(c1) < h(c2) {
                a = c1;
            } else {
                b = c2;
            }
        }
        h((a + b) / 2.0)
    }

    #[test]
    fn envelope_constant_and_bound() {
        match rate_envelope(2.0, 0.1).unwrap() {
            RateEnvelope::Envelope { constant, .. } => assert_eq!(constant, 0.25),
            other => panic!("{other:?}"),
        }
        for alpha in [1e-3, 1e-2, 1e-1] {
            let max = golden_max(2.0, alpha);
            assert!((max - 0.25 / alpha).abs() < 1e-9 * max);
            for eta in [1.0, 3.0, 3.9] {
                let RateEnvelope::Envelope { bound, .. } = rate_envelope(eta, alpha).unwrap() else {
                    panic!()
                };
                let max = golden_max(eta, alpha);
                assert!(max <= bound * (1.0 + 1e-9), "eta={eta} alpha={alpha}");
                assert!(max >= bound * (1.0 - 1e-9));
            }
        }
        assert_eq!(rate_envelope(4.0, 0.1).unwrap(), RateEnvelope::Increasing);
        let h = |s: f64| s.powi(4) / (s * s + 0.01).powi(2);
        let grid: Vec<f64> = (1..10_000).map(|i| i as f64 * 1e-3).collect();
        assert!(grid.windows(2).all(|w| h(w[1]) > h(w[0])));
        assert!(rate_envelope(0.0, 1.0).is_err());
    }

    #[test]
    fn alpha_rule() {
        assert_eq!(choose_alpha(0.25).unwrap(), 0.5);
        assert_eq!(choose_alpha(0.0).unwrap(), 0.0);
        assert!((choose_alpha(1e-4).unwrap() - 1e-2).abs() < 1e-18);
        assert!(choose_alpha(-1.0).is_err());
        let p = SmoothnessParams::new(4.0, 0.25).unwrap();
        assert_eq!(p.alpha(), 0.5);
        assert!(SmoothnessParams::new(0.0, 0.1).is_err());
    }

    #[test]
    fn linf_constant_single_mode() {
        let op = single_mode(1.0);
        let w = WeightSchedule::constant(1.0, 1).unwrap();
        let b = linf_bound_constant(&op, &w, 2.0).unwrap();
        assert_eq!(b.constant, 1.0);
    }

    #[test]
    fn domination_by_floor_tikhonov() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let op = random_op(&mut rng, 40);
            let y = random_data(&mut rng, 40);
            let alpha = 10f64.powf(rng.random_range(-4.0..0.0));
            let w = weight_schedule(&op, 3.5, 1.0, 0.8).unwrap();
            let c0 = w.floor();
            let tw = apply_filter(&op, &FilterScheme::weighted(alpha, w).unwrap(), &y).unwrap();
            let tt = apply_filter(&op, &FilterScheme::tikhonov(alpha * c0).unwrap(), &y).unwrap();
            let (a, b) = (
                norm(&tw.signal, NormKind::L2Torus).unwrap(),
                norm(&tt.signal, NormKind::L2Torus).unwrap(),
            );
            assert!(a <= b + 1e-10);
            assert!(b <= norm(&y, NormKind::L2Torus).unwrap() / (alpha * c0).sqrt() + 1e-10);
        }
    }

    /// The spectral formula minimizes ‖Ax − y‖² + α Σ c_n |⟨x,v_n⟩|².
    #[test]
    fn weighted_filter_minimizes_quadratic_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let op = random_op(&mut rng, 5);
            let y = random_data(&mut rng, 5);
            let alpha = rng.random_range(0.01..1.0);
            let c: Vec<f64> = (0..5).map(|_| rng.random_range(1.0..3.0)).collect();
            let w = WeightSchedule::new(c.clone(), 1.0, 0.0, 3.0, op.sigmas()).unwrap();
            let x = apply_filter(&op, &FilterScheme::weighted(alpha, w).unwrap(), &y).unwrap().signal;
            let yc = op.project(&y).unwrap();
            let objective = |xc: &[Complex64]| -> f64 {
                (0..5)
                    .map(|m| (op.sigmas()[m] * xc[m] - yc[m]).norm_sqr() + alpha * c[m] * xc[m].norm_sqr())
                    .sum()
            };
            let xc: Vec<Complex64> = op.right().iter().map(|b| b.phase.conj() * x.coeff(b.index)).collect();
            let best = objective(&xc);
            for _ in 0..50 {
                let pert: Vec<Complex64> = xc
                    .iter()
                    .map(|v| v + Complex64::new(rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3)))
                    .collect();
                assert!(objective(&pert) >= best);
            }
        }
    }
}
