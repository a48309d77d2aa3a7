//! Small float helpers routed through `libm`, so results do not depend on
//! whether some other crate in the build enables `std` float functions.

pub(crate) use core::f64::consts::PI;

use num_complex::Complex64;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    num_traits::float::FloatCore::powi(x, n)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// |z|.
#[inline]
pub(crate) fn cabs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// e^{iθ}.
#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// Surface area of the unit sphere in ℝ^d.
pub(crate) fn sphere_area(d: u32) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI * sphere_area(d - 2) / f64::from(d - 2),
    }
}
