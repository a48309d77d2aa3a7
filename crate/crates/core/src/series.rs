//! Convergence diagnostics for truncated series.
//!
//! Infinite sums like the Picard sum can only be inspected through partial
//! sums. A sum is judged convergent when the last doubling of the truncation
//! barely moves it, or when the increments over successive doublings keep
//! shrinking geometrically (the signature of a power tail Σ n^{−p}, p > 1).

use alloc::vec::Vec;

/// Relative change N/2 → N below which a sum counts as settled.
pub const RELATIVE_TOL: f64 = 1e-3;
/// Largest ratio of successive dyadic increments that still counts as decay.
pub const INCREMENT_RATIO: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesVerdict {
    /// Partial sum over all terms.
    pub total: f64,
    /// Partial sums at N/8, N/4, N/2, N (fewer if N is small).
    pub dyadic: Vec<f64>,
    /// |S_N − S_{N/2}| / |S_N|.
    pub relative_change: f64,
    pub converging: bool,
}

/// Examines the partial sums of `terms` (already in summation order).
pub fn diagnose(terms: &[f64]) -> SeriesVerdict {
    let n = terms.len();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    prefix.push(0.0);
    for t in terms {
        acc += t;
        prefix.push(acc);
    }
    let total = acc;
    let mut dyadic: Vec<f64> = [8usize, 4, 2, 1]
        .iter()
        .filter(|&&d| n / d > 0)
        .map(|&d| prefix[n / d])
        .collect();
    dyadic.dedup();
    let half = prefix[n / 2];
    let relative_change = if total == 0.0 {
        0.0
    } else {
        ((total - half) / total).abs()
    };
    let increments: Vec<f64> = dyadic.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let decaying = increments.len() >= 3
        && increments
            .windows(2)
            .all(|w| w[1] <= INCREMENT_RATIO * w[0]);
    SeriesVerdict {
        total,
        relative_change,
        converging: !total.is_nan() && total.is_finite() && (relative_change <= RELATIVE_TOL || decaying),
        dyadic,
    }
}
