//! Radix-2 FFT and a direct-summation fallback.
//!
//! Sign convention: `sign = -1.0` computes Σ x_j e^{-2πi jk/M}, `+1.0` the
//! conjugate sum. Neither direction scales.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{cos, sin, PI};

/// Table of e^{sign·2πik/M} for k = 0..M.
fn roots(m: usize, sign: f64) -> Vec<Complex64> {
    (0..m)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / m as f64;
            Complex64::new(cos(th), sign * sin(th))
        })
        .collect()
}

pub(crate) fn fft_in_place(buf: &mut [Complex64], sign: f64) {
    let m = buf.len();
    debug_assert!(m.is_power_of_two());
    if m <= 1 {
        return;
    }
    let bits = m.trailing_zeros();
    for i in 0..m {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let w = roots(m, sign);
    let mut len = 2;
    while len <= m {
        let half = len / 2;
        let stride = m / len;
        for start in (0..m).step_by(len) {
            for k in 0..half {
                let t = buf[start + k + half] * w[k * stride];
                let u = buf[start + k];
                buf[start + k] = u + t;
                buf[start + k + half] = u - t;
            }
        }
        len <<= 1;
    }
}

/// Direct O(len·M) evaluation of Σ_k coeff_k e^{sign·2πi·idx_k·j/M} for j in 0..M.
pub(crate) fn direct_sum(
    indices: impl Iterator<Item = i64> + Clone,
    coeffs: &[Complex64],
    m: usize,
    sign: f64,
) -> Vec<Complex64> {
    let w = roots(m, sign);
    let mm = m as i64;
    (0..m)
        .map(|j| {
            indices
                .clone()
                .zip(coeffs)
                .map(|(n, c)| c * w[(n * j as i64).rem_euclid(mm) as usize])
                .sum()
        })
        .collect()
}
