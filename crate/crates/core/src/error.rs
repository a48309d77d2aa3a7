use thiserror::Error;

use crate::norm::NormKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("coefficients are not conjugate-symmetric at n = {index} (deviation {deviation:e})")]
    NotConjugateSymmetric { index: i64, deviation: f64 },

    #[error("{points} grid points alias a signal with max index {max_index}")]
    Aliasing { points: usize, max_index: usize },

    #[error("invalid `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("{kind:?} norm does not apply to {object}")]
    NormMismatch {
        kind: NormKind,
        object: &'static str,
    },

    #[error("radial grid ends at {r_max} but at least {required} is needed")]
    GridTooSmall { r_max: f64, required: f64 },

    #[error("CFL number {cfl} outside (0, {max}]")]
    CflViolation { cfl: f64, max: f64 },

    #[error("grid spacing {spacing} puts {points:.1} points across the narrowest feature, need {min}")]
    Underresolved {
        spacing: f64,
        points: f64,
        min: f64,
    },

    #[error("non-finite value at sample {index}")]
    NonFinite { index: usize },

    #[error("unsupported dimension {dimension}")]
    UnsupportedDimension { dimension: u32 },

    #[error("singular values must be positive and non-increasing (mode {mode})")]
    SingularValueOrder { mode: usize },

    #[error("basis is not orthonormal: {detail} (mode {mode})")]
    BasisNotOrthonormal { detail: &'static str, mode: usize },

    #[error("weighted filter needs a weight schedule")]
    MissingWeights,

    #[error("weight schedule violates {bound} at mode {mode}")]
    WeightSchedule { bound: &'static str, mode: usize },

    #[error("kernel coefficient at n = {index} is zero or below the singularity bound")]
    KernelCoefficient { index: i64 },

    #[error("signal uses index {index}, outside the operator's basis")]
    OutsideBasis { index: i64 },
}
