//! Natural cubic spline on a uniform grid.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::floor;

#[derive(Debug, Clone)]
pub struct NaturalCubicSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl NaturalCubicSpline {
    /// Interpolates `y[i]` at `x0 + i·h` with zero second derivative at both ends.
    pub fn uniform(x0: f64, h: f64, y: Vec<f64>) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "y",
                reason: "spline needs at least two knots",
            });
        }
        if !(h > 0.0) {
            return Err(Error::InvalidParameter {
                name: "h",
                reason: "knot spacing must be positive",
            });
        }
        let n = y.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm for M_{i−1} + 4M_i + M_{i+1} = 6Δ²y_i/h².
            let k = n - 2;
            let mut c = vec![0.0; k];
            let mut d = vec![0.0; k];
            let s = 6.0 / (h * h);
            for i in 0..k {
                let rhs = s * (y[i + 2] - 2.0 * y[i + 1] + y[i]);
                if i == 0 {
                    c[0] = 0.25;
                    d[0] = rhs / 4.0;
                } else {
                    let den = 4.0 - c[i - 1];
                    c[i] = 1.0 / den;
                    d[i] = (rhs - d[i - 1]) / den;
                }
            }
            m[k] = d[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = d[i] - c[i] * m[i + 2];
            }
        }
        Ok(NaturalCubicSpline { x0, h, y, m })
    }

    pub fn x_end(&self) -> f64 {
        self.x0 + (self.y.len() - 1) as f64 * self.h
    }

    fn locate(&self, x: f64) -> (usize, f64, f64) {
        let last = self.y.len() - 2;
        let u = (x - self.x0) / self.h;
        let i = if u <= 0.0 {
            0
        } else {
            (floor(u) as usize).min(last)
        };
        let a = x - (self.x0 + i as f64 * self.h);
        let b = self.h - a;
        (i, a, b)
    }

    /// Value at `x`; outside the knot range the end cubic is extended.
    pub fn value(&self, x: f64) -> f64 {
        let (i, a, b) = self.locate(x);
        let h = self.h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        m0 * b * b * b / (6.0 * h)
            + m1 * a * a * a / (6.0 * h)
            + (self.y[i] / h - m0 * h / 6.0) * b
            + (self.y[i + 1] / h - m1 * h / 6.0) * a
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (i, a, b) = self.locate(x);
        let h = self.h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        -m0 * b * b / (2.0 * h) + m1 * a * a / (2.0 * h) - (self.y[i] / h - m0 * h / 6.0)
            + (self.y[i + 1] / h - m1 * h / 6.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_and_lines() {
        let y: Vec<f64> = (0..9).map(|i| 3.0 - 0.5 * i as f64).collect();
        let s = NaturalCubicSpline::uniform(1.0, 0.25, y.clone()).unwrap();
        for (i, v) in y.iter().enumerate() {
            assert!((s.value(1.0 + 0.25 * i as f64) - v).abs() < 1e-13);
        }
        assert!((s.derivative(1.3) + 2.0).abs() < 1e-12);
        assert!((s.x_end() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn fourth_order_accurate_on_smooth_odd_data() {
        // sin is odd, so the natural condition at 0 is consistent.
        let err = |n: usize| {
            let h = 2.0 / n as f64;
            let y: Vec<f64> = (0..=n).map(|i| (i as f64 * h).sin()).collect();
            let s = NaturalCubicSpline::uniform(0.0, h, y).unwrap();
            (0..200)
                .map(|j| {
                    let x = 0.1 + 1.5 * j as f64 / 200.0;
                    (s.value(x) - x.sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(100), err(200));
        assert!(e2 < 1e-8 && e1 / e2 > 12.0, "{e1} {e2}");
    }
}
