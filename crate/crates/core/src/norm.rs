//! L² and sup norms of signals and radial fields.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{sqrt, PI};
use crate::radial::{trapezoid, RadialField};
use crate::signal::{synthesize, FourierSignal, TorusGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    /// sqrt(Σ |c_n|²), equal to the L²(𝕋) norm by Parseval.
    L2Torus,
    /// Max |value| on a grid. Fourier signals are sampled on
    /// [`TorusGrid::sup_grid_for`]; sample slices are taken as given.
    SupGrid,
    /// sqrt(4π ∫ |u(r)|² r² dr), the L²(ℝ³) norm of a radial function.
    L2Radial3d,
    /// Max |u(r_i)| over the radial grid.
    SupRadial,
}

/// Anything [`norm`] can measure.
#[derive(Debug, Clone, Copy)]
pub enum Normed<'a> {
    Fourier(&'a FourierSignal),
    Samples(&'a [f64]),
    ComplexSamples(&'a [Complex64]),
    Field(&'a RadialField),
}

impl<'a> From<&'a FourierSignal> for Normed<'a> {
    fn from(s: &'a FourierSignal) -> Self {
        Normed::Fourier(s)
    }
}

impl<'a> From<&'a [f64]> for Normed<'a> {
    fn from(s: &'a [f64]) -> Self {
        Normed::Samples(s)
    }
}

impl<'a> From<&'a [Complex64]> for Normed<'a> {
    fn from(s: &'a [Complex64]) -> Self {
        Normed::ComplexSamples(s)
    }
}

impl<'a> From<&'a RadialField> for Normed<'a> {
    fn from(f: &'a RadialField) -> Self {
        Normed::Field(f)
    }
}

pub fn norm<'a>(object: impl Into<Normed<'a>>, kind: NormKind) -> Result<f64> {
    let object = object.into();
    match (object, kind) {
        (Normed::Fourier(s), NormKind::L2Torus) => Ok(sqrt(s.energy())),
        (Normed::Fourier(s), NormKind::SupGrid) => {
            let v = synthesize(s, &TorusGrid::sup_grid_for(s.max_index()))?;
            Ok(v.iter().map(|c| crate::math::cabs(*c)).fold(0.0, f64::max))
        }
        (Normed::Samples(v), NormKind::SupGrid) => Ok(v.iter().map(|x| x.abs()).fold(0.0, f64::max)),
        (Normed::ComplexSamples(v), NormKind::SupGrid) => {
            Ok(v.iter().map(|c| crate::math::cabs(*c)).fold(0.0, f64::max))
        }
        (Normed::Field(f), NormKind::SupRadial) => {
            Ok(f.values().iter().map(|x| x.abs()).fold(0.0, f64::max))
        }
        (Normed::Field(f), NormKind::L2Radial3d) => {
            let g = f.grid();
            let w: alloc::vec::Vec<f64> = f
                .values()
                .iter()
                .zip(g.points())
                .map(|(u, r)| u * u * r * r)
                .collect();
            Ok(sqrt(4.0 * PI * trapezoid(&w, g.spacing())))
        }
        (obj, kind) => Err(Error::NormMismatch {
            kind,
            object: match obj {
                Normed::Fourier(_) => "a Fourier signal",
                Normed::Samples(_) | Normed::ComplexSamples(_) => "torus samples",
                Normed::Field(_) => "a radial field",
            },
        }),
    }
}
