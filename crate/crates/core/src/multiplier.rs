//! Filtered Fourier multipliers.
//!
//! A multiplier B f = 𝓕⁻¹(μ 𝓕f) with bounded symbol μ is bounded on L² but
//! generally not on L∞. Preconditioning with T_{α,β} f = k_α ∗ (h_β f), a
//! spatial window h_β followed by a mollifier k_α, gives B_{α,β} = B T_{α,β},
//! which is bounded on both and converges to B as α, β → 0.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{ceil, exp, powf, sphere_area, sqrt, PI};
use crate::radial::{RadialField, RadialGrid};
use crate::signal::FourierSignal;
use num_complex::Complex64;

/// Gaussian profiles are cut to zero beyond this radius (e^{−π·4.5²} ≈ 2e−28).
pub const GAUSSIAN_CUTOFF: f64 = 4.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterShape {
    /// max(1 − |x|, 0)
    Triangle,
    /// e^{−π|x|²}
    Gaussian,
}

impl FilterShape {
    fn base(self, r: f64) -> f64 {
        match self {
            FilterShape::Triangle => (1.0 - r).max(0.0),
            FilterShape::Gaussian if r <= GAUSSIAN_CUTOFF => exp(-PI * r * r),
            FilterShape::Gaussian => 0.0,
        }
    }

    fn support(self) -> f64 {
        match self {
            FilterShape::Triangle => 1.0,
            FilterShape::Gaussian => GAUSSIAN_CUTOFF,
        }
    }

    /// ∫_{ℝ^d} base.
    fn mass(self, d: u32) -> f64 {
        match self {
            FilterShape::Triangle => sphere_area(d) / f64::from(d * (d + 1)),
            FilterShape::Gaussian => 1.0,
        }
    }

    /// ∫_{ℝ^d} base².
    fn energy(self, d: u32) -> f64 {
        match self {
            FilterShape::Triangle => sphere_area(d) * 2.0 / f64::from(d * (d + 1) * (d + 2)),
            FilterShape::Gaussian => powf(2.0, -f64::from(d) / 2.0),
        }
    }

    /// Φ(x) = ∫₀ˣ t·base(t) dt.
    fn radial_moment(self, x: f64) -> f64 {
        match self {
            FilterShape::Triangle => {
                let x = x.min(1.0);
                x * x / 2.0 - x * x * x / 3.0
            }
            FilterShape::Gaussian => {
                let x = x.min(GAUSSIAN_CUTOFF);
                (1.0 - exp(-PI * x * x)) / (2.0 * PI)
            }
        }
    }
}

/// A scaled radial filter shape on ℝ^d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterProfile {
    pub shape: FilterShape,
    pub dimension: u32,
    pub normalization: f64,
}

impl FilterProfile {
    /// Scaled to unit mass, ∫k = 1 (the mollifier role).
    pub fn unit_mass(shape: FilterShape, dimension: u32) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(FilterProfile {
            shape,
            dimension,
            normalization: 1.0 / shape.mass(dimension),
        })
    }

    /// Scaled to h(0) = 1, i.e. ∫ĥ = 1 (the window role).
    pub fn unit_peak(shape: FilterShape, dimension: u32) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(FilterProfile {
            shape,
            dimension,
            normalization: 1.0,
        })
    }

    pub fn value(&self, r: f64) -> f64 {
        self.normalization * self.shape.base(r.abs())
    }

    pub fn support_radius(&self) -> f64 {
        self.shape.support()
    }

    /// ∫ profile, which is also its L¹ norm.
    pub fn mass(&self) -> f64 {
        self.normalization * self.shape.mass(self.dimension)
    }

    pub fn l2_norm(&self) -> f64 {
        self.normalization * sqrt(self.shape.energy(self.dimension))
    }

    pub fn peak(&self) -> f64 {
        self.normalization
    }
}

fn check_dimension(d: u32) -> Result<()> {
    if d == 0 {
        Err(Error::UnsupportedDimension { dimension: d })
    } else {
        Ok(())
    }
}

/// The families k_α(x) = α^{−d} k(x/α) and h_β(x) = h(βx).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilatedFilterPair {
    pub k_profile: FilterProfile,
    pub h_profile: FilterProfile,
    pub alpha: f64,
    pub beta: f64,
}

pub fn dilate_filters(
    k: FilterProfile,
    h: FilterProfile,
    alpha: f64,
    beta: f64,
) -> Result<DilatedFilterPair> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "dilation scale must be positive",
        });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: "dilation scale must be positive",
        });
    }
    if k.dimension != h.dimension {
        return Err(Error::InvalidParameter {
            name: "h",
            reason: "k and h must live in the same dimension",
        });
    }
    Ok(DilatedFilterPair {
        k_profile: k,
        h_profile: h,
        alpha,
        beta,
    })
}

impl DilatedFilterPair {
    /// The triangle pair used for the wave experiments: unit-mass k, unit-peak h, d = 3.
    pub fn triangle_3d(alpha: f64, beta: f64) -> Result<Self> {
        dilate_filters(
            FilterProfile::unit_mass(FilterShape::Triangle, 3)?,
            FilterProfile::unit_peak(FilterShape::Triangle, 3)?,
            alpha,
            beta,
        )
    }

    pub fn dimension(&self) -> u32 {
        self.k_profile.dimension
    }

    pub fn k_alpha(&self, r: f64) -> f64 {
        powf(self.alpha, -f64::from(self.dimension())) * self.k_profile.value(r / self.alpha)
    }

    pub fn h_beta(&self, r: f64) -> f64 {
        self.h_profile.value(self.beta * r)
    }

    pub fn k_support(&self) -> f64 {
        self.alpha * self.k_profile.support_radius()
    }

    pub fn h_support(&self) -> f64 {
        self.h_profile.support_radius() / self.beta
    }

    /// ‖k_α‖₂ = α^{−d/2} ‖k‖₂.
    pub fn k_alpha_l2(&self) -> f64 {
        powf(self.alpha, -f64::from(self.dimension()) / 2.0) * self.k_profile.l2_norm()
    }

    /// ‖h_β‖₂ = β^{−d/2} ‖h‖₂.
    pub fn h_beta_l2(&self) -> f64 {
        powf(self.beta, -f64::from(self.dimension()) / 2.0) * self.h_profile.l2_norm()
    }

    /// ‖h_β‖_∞ = h(0).
    pub fn h_beta_sup(&self) -> f64 {
        self.h_profile.peak()
    }

    /// Upper bound ‖κ_α‖_∞ ≤ ‖k_α‖₁ = ‖k‖₁.
    pub fn kappa_sup_bound(&self) -> f64 {
        self.k_profile.mass()
    }

    /// ∫₀ˣ t k_α(t) dt = norm · α^{−1} Φ(x/α) in three dimensions.
    fn k_alpha_moment(&self, x: f64) -> f64 {
        self.k_profile.normalization / self.alpha * self.k_profile.shape.radial_moment(x / self.alpha)
    }
}

/// Computes T_{α,β} f = k_α ∗ (h_β f) for a radial field in ℝ³.
///
/// Uses (k∗g)(r) = (2π/r) ∫ s g(s) [Φ(r+s) − Φ(|r−s|)] ds with
/// Φ(x) = ∫₀ˣ t k(t) dt in closed form and trapezoid quadrature in s, and
/// (k∗g)(0) = 4π ∫ s² g(s) k(s) ds at the origin.
pub fn apply_precondition(pair: &DilatedFilterPair, f: &RadialField) -> Result<RadialField> {
    if pair.dimension() != 3 {
        return Err(Error::UnsupportedDimension {
            dimension: pair.dimension(),
        });
    }
    let grid = *f.grid();
    let g: Vec<f64> = f
        .values()
        .iter()
        .zip(grid.points())
        .map(|(v, r)| v * pair.h_beta(r))
        .collect();
    let windowed = RadialField::new(grid, g)?;
    let support = windowed.support_radius();
    if windowed.values().iter().all(|&v| v == 0.0) {
        return Ok(RadialField::zeros(grid));
    }
    let required = support + pair.k_support();
    let tol = 1e-9 * grid.r_max();
    if required > grid.r_max() + tol {
        return Err(Error::GridTooSmall {
            r_max: grid.r_max(),
            required,
        });
    }
    Ok(radial_convolve(pair, &grid, windowed.values()))
}

fn radial_convolve(pair: &DilatedFilterPair, grid: &RadialGrid, g: &[f64]) -> RadialField {
    let h = grid.spacing();
    let m = grid.point_count();
    let a = pair.k_support();
    let reach = ceil(a / h) as usize + 1;
    let weight = |j: usize| if j == 0 || j + 1 == m { 0.5 * h } else { h };
    let values = (0..m)
        .map(|i| {
            let lo = i.saturating_sub(reach);
            let hi = (i + reach).min(m - 1);
            let r = grid.point(i);
            if i == 0 {
                let acc: f64 = (lo..=hi)
                    .map(|j| {
                        let s = grid.point(j);
                        weight(j) * s * s * g[j] * pair.k_alpha(s)
                    })
                    .sum();
                4.0 * PI * acc
            } else {
                let acc: f64 = (lo..=hi)
                    .map(|j| {
                        let s = grid.point(j);
                        let shell = pair.k_alpha_moment(r + s) - pair.k_alpha_moment((r - s).abs());
                        weight(j) * s * g[j] * shell
                    })
                    .sum();
                2.0 * PI / r * acc
            }
        })
        .collect();
    RadialField::new(*grid, values).expect("convolution of finite samples is finite")
}

/// A bounded Fourier symbol μ on frequencies, with its sup bound.
pub struct MultiplierSpec {
    symbol: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    sup_bound: f64,
}

impl core::fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MultiplierSpec")
            .field("sup_bound", &self.sup_bound)
            .finish_non_exhaustive()
    }
}

impl MultiplierSpec {
    pub fn new(symbol: impl Fn(f64) -> f64 + Send + Sync + 'static, sup_bound: f64) -> Result<Self> {
        if !(sup_bound >= 0.0 && sup_bound.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sup_bound",
                reason: "must be finite and non-negative",
            });
        }
        Ok(MultiplierSpec {
            symbol: Box::new(symbol),
            sup_bound,
        })
    }

    pub fn identity() -> Self {
        MultiplierSpec {
            symbol: Box::new(|_| 1.0),
            sup_bound: 1.0,
        }
    }

    /// μ(ξ) = cos(2π|ξ|t), the wave propagator at time t.
    pub fn wave(t: f64) -> Self {
        MultiplierSpec {
            symbol: Box::new(move |xi: f64| crate::math::cos(2.0 * PI * xi.abs() * t)),
            sup_bound: 1.0,
        }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        (self.symbol)(xi)
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }
}

/// Output coefficient n is μ(n)·c_n.
pub fn apply_multiplier(mu: &MultiplierSpec, f: &FourierSignal) -> FourierSignal {
    f.map(true, |n, c| c * Complex64::new(mu.eval(n as f64), 0.0))
}

/// A radial operator with a bounded symbol, such as the wave propagator.
pub trait RadialOperator {
    fn apply(&self, f: &RadialField) -> Result<RadialField>;
    /// ‖μ‖_∞ of the operator's symbol.
    fn symbol_sup(&self) -> f64;
}

/// B_{α,β} f = B(T_{α,β} f). Filters are always applied before B.
pub fn regularized_propagate(
    b: &impl RadialOperator,
    pair: &DilatedFilterPair,
    f: &RadialField,
) -> Result<RadialField> {
    b.apply(&apply_precondition(pair, f)?)
}

/// ‖μ‖_∞ ‖κ_α‖_∞ ‖h_β‖_∞, the L² → L² bound of B_{α,β}.
pub fn l2_operator_bound(b: &impl RadialOperator, pair: &DilatedFilterPair) -> f64 {
    b.symbol_sup() * pair.kappa_sup_bound() * pair.h_beta_sup()
}

/// ‖μ‖_∞ ‖k_α‖₂ ‖h_β‖₂, the L∞ → L∞ bound of B_{α,β}.
pub fn linf_operator_bound(b: &impl RadialOperator, pair: &DilatedFilterPair) -> f64 {
    b.symbol_sup() * pair.k_alpha_l2() * pair.h_beta_l2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{norm, NormKind};
    use crate::radial::trapezoid;

    fn radial_mass(f: impl Fn(f64) -> f64, r_max: f64, d: u32) -> f64 {
        let n = 200_000;
        let h = r_max / n as f64;
        let v: Vec<f64> = (0..=n)
            .map(|i| {
                let r = i as f64 * h;
                f(r) * powf(r, f64::from(d) - 1.0)
            })
            .collect();
        sphere_area(d) * trapezoid(&v, h)
    }

    #[test]
    fn unit_mass_profiles_integrate_to_one() {
        for shape in [FilterShape::Triangle, FilterShape::Gaussian] {
            for d in 1..=4 {
                let k = FilterProfile::unit_mass(shape, d).unwrap();
                let m = radial_mass(|r| k.value(r), 5.0, d);
                assert!((m - 1.0).abs() < 1e-6, "{shape:?} d={d}: {m}");
                assert!((k.mass() - 1.0).abs() < 1e-14);
                let e = radial_mass(|r| k.value(r).powi(2), 5.0, d);
                assert!((e.sqrt() - k.l2_norm()).abs() < 1e-6);
            }
        }
        let k3 = FilterProfile::unit_mass(FilterShape::Triangle, 3).unwrap();
        assert!((k3.normalization - 3.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn dilation_scaling_laws() {
        let k = FilterProfile::unit_mass(FilterShape::Triangle, 1).unwrap();
        let h = FilterProfile::unit_peak(FilterShape::Triangle, 1).unwrap();
        let one = dilate_filters(k, h, 1.0, 1.0).unwrap();
        for r in [0.0, 0.3, 0.9, 1.5] {
            assert_eq!(one.k_alpha(r), k.value(r));
            assert_eq!(one.h_beta(r), h.value(r));
        }
        let half = dilate_filters(k, h, 0.5, 1.0).unwrap();
        assert_eq!(half.k_alpha(0.0), 2.0 * k.value(0.0));
        assert!(dilate_filters(k, h, 0.0, 1.0).is_err());
        assert!(dilate_filters(k, h, 1.0, -1.0).is_err());
    }

    #[test]
    fn dilated_mass_is_preserved_in_3d() {
        for alpha in [0.2, 0.1, 0.05] {
            let p = DilatedFilterPair::triangle_3d(alpha, 1.0).unwrap();
            let m = radial_mass(|r| p.k_alpha(r), 0.3, 3);
            assert!((m - 1.0).abs() < 1e-5, "alpha={alpha}: {m}");
            let l2 = radial_mass(|r| p.k_alpha(r).powi(2), 0.3, 3).sqrt();
            assert!((l2 - p.k_alpha_l2()).abs() < 1e-4 * l2);
        }
    }

    #[test]
    fn zero_field_maps_to_zero() {
        let g = RadialGrid::new(2.0, 201).unwrap();
        let p = DilatedFilterPair::triangle_3d(0.1, 0.1).unwrap();
        let out = apply_precondition(&p, &RadialField::zeros(g)).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn small_grid_is_rejected_with_requirement() {
        let g = RadialGrid::new(5.0, 501).unwrap();
        let p = DilatedFilterPair::triangle_3d(0.1, 0.1).unwrap();
        let f = RadialField::from_fn(g, |_| 1.0).unwrap();
        match apply_precondition(&p, &f) {
            Err(Error::GridTooSmall { required, .. }) => assert!((required - 5.1).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let g2 = RadialGrid::new(1.0, 11).unwrap();
        let p2 = dilate_filters(
            FilterProfile::unit_mass(FilterShape::Triangle, 2).unwrap(),
            FilterProfile::unit_peak(FilterShape::Triangle, 2).unwrap(),
            0.1,
            0.1,
        )
        .unwrap();
        assert!(matches!(
            apply_precondition(&p2, &RadialField::zeros(g2)),
            Err(Error::UnsupportedDimension { dimension: 2 })
        ));
    }

    /// Oracle: (k∗g)(r e_z) by brute-force spherical quadrature over y = ρω.
    fn spherical_oracle(k: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, r: f64, k_support: f64) -> f64 {
        let (nr, nt) = (400, 400);
        let (dr, dt) = (k_support / nr as f64, PI / nt as f64);
        let mut acc = 0.0;
        for i in 0..nr {
            let rho = (i as f64 + 0.5) * dr;
            for j in 0..nt {
                let th = (j as f64 + 0.5) * dt;
                let dist = (r * r + rho * rho - 2.0 * r * rho * th.cos()).max(0.0).sqrt();
                acc += k(rho) * g(dist) * rho * rho * th.sin();
            }
        }
        2.0 * PI * acc * dr * dt
    }

    #[test]
    fn convolution_matches_spherical_quadrature() {
        let grid = RadialGrid::new(3.0, 3001).unwrap();
        let bump = |r: f64| (-(r * r) / 0.5).exp();
        let f = RadialField::from_fn(grid, bump).unwrap();
        for shape in [FilterShape::Triangle, FilterShape::Gaussian] {
            let pair = dilate_filters(
                FilterProfile::unit_mass(shape, 3).unwrap(),
                FilterProfile::unit_peak(FilterShape::Triangle, 3).unwrap(),
                if shape == FilterShape::Gaussian { 0.05 } else { 0.2 },
                0.4,
            )
            .unwrap();
            let out = apply_precondition(&pair, &f).unwrap();
            let g = |s: f64| bump(s) * pair.h_beta(s);
            for &i in &[0usize, 3, 100, 700, 1500, 2400] {
                let r = grid.point(i);
                let want = spherical_oracle(|x| pair.k_alpha(x), g, r, pair.k_support());
                let got = out.values()[i];
                assert!((got - want).abs() < 2e-4, "{shape:?} r={r}: {got} vs {want}");
            }
        }
    }

    /// Oracle: low-resolution 3D Cartesian midpoint sum of ∫ k_α(|y|) h_β(|y|) dy.
    #[test]
    fn constant_field_center_matches_cartesian_sum() {
        let (alpha, beta) = (0.1, 0.1);
        let pair = DilatedFilterPair::triangle_3d(alpha, beta).unwrap();
        let grid = RadialGrid::new(10.5, 10501).unwrap();
        let f = RadialField::from_fn(grid, |_| 1.0).unwrap();
        let out = apply_precondition(&pair, &f).unwrap();
        let n = 40;
        let step = 2.0 * alpha / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let p = |q: usize| -alpha + (q as f64 + 0.5) * step;
                    let r = (p(i).powi(2) + p(j).powi(2) + p(l).powi(2)).sqrt();
                    acc += pair.k_alpha(r) * pair.h_beta(r);
                }
            }
        }
        acc *= step.powi(3);
        let center = out.values()[0];
        assert!((center - acc).abs() < 0.01 * acc);
        assert!((center - 1.0).abs() < 0.05);
    }

    #[test]
    fn preconditioner_approximates_identity_in_l2() {
        let grid = RadialGrid::new(4.0, 4001).unwrap();
        let f = RadialField::from_fn(grid, |r| if r < 3.5 { (-r * r).exp() } else { 0.0 }).unwrap();
        let mut last = f64::INFINITY;
        for alpha in [0.2, 0.1, 0.05] {
            let pair = DilatedFilterPair::triangle_3d(alpha, alpha).unwrap();
            let tf = apply_precondition(&pair, &f).unwrap();
            let err = norm(&tf.sub(&f).unwrap(), NormKind::L2Radial3d).unwrap();
            assert!(err < last, "alpha={alpha}: {err} !< {last}");
            last = err;
        }
    }

    #[test]
    fn multiplier_is_coefficientwise() {
        let f = FourierSignal::real_from_half(3, |k| Complex64::new(1.0 + k as f64, -(k as f64)));
        let id = apply_multiplier(&MultiplierSpec::identity(), &f);
        assert_eq!(id, f);
        let w = apply_multiplier(&MultiplierSpec::wave(1.0), &f);
        assert!((w.coeff(1) - f.coeff(1)).norm() < 1e-15);
        let w = apply_multiplier(&MultiplierSpec::wave(0.25), &f);
        assert!((w.coeff(2) + f.coeff(2)).norm() < 1e-14);
        assert!(w.is_real_symmetric());
        assert!(MultiplierSpec::new(|_| 0.0, f64::NAN).is_err());
    }

    #[test]
    fn identity_operator_bounds() {
        struct Id;
        impl RadialOperator for Id {
            fn apply(&self, f: &RadialField) -> Result<RadialField> {
                Ok(f.clone())
            }
            fn symbol_sup(&self) -> f64 {
                1.0
            }
        }
        let grid = RadialGrid::new(12.0, 2401).unwrap();
        let f = RadialField::from_fn(grid, |r| if r < 3.0 { (5.0 * r).cos() } else { 0.0 }).unwrap();
        for (a, b) in [(0.2, 0.5), (1.0, 0.1), (0.1, 0.3)] {
            let pair = DilatedFilterPair::triangle_3d(a, b).unwrap();
            let out = regularized_propagate(&Id, &pair, &f).unwrap();
            let l2 = norm(&out, NormKind::L2Radial3d).unwrap();
            let lf = norm(&f, NormKind::L2Radial3d).unwrap();
            assert!(l2 <= l2_operator_bound(&Id, &pair) * lf * (1.0 + 1e-3));
            let sup = norm(&out, NormKind::SupRadial).unwrap();
            assert!(sup <= linf_operator_bound(&Id, &pair) * 1.0 * 1.02);
        }
    }
}
