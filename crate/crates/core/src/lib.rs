//! Numerical kernels for sup-norm stable regularization.
//!
//! Two constructions live here. The first filters a Fourier multiplier in
//! space and frequency before applying it ([`multiplier`], with the radial
//! wave propagator of [`wave3d`] as the worked operator). The second weights
//! the spectral filter of a compact operator's SVD ([`regularizers`]), with
//! the singular periodic convolution of [`perconv`] as the test problem.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
mod fft;
mod math;

pub mod multiplier;
pub mod norm;
pub mod perconv;
pub mod radial;
pub mod regularizers;
pub mod series;
pub mod signal;
pub mod spline;
pub mod wave3d;

pub use error::{Error, Result};
pub use norm::{norm, NormKind, Normed};
pub use num_complex::Complex64;
pub use radial::{RadialField, RadialGrid};
pub use signal::{analyze, analyze_real, synthesize, synthesize_real, FourierSignal, TorusGrid};
