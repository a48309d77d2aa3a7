//! Uniform radial grids and sampled radial fields.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform samples 0 = r_0 < … < r_{M−1} = r_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    point_count: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, point_count: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "r_max",
                reason: "must be positive and finite",
            });
        }
        if point_count < 2 {
            return Err(Error::InvalidParameter {
                name: "point_count",
                reason: "need at least two points",
            });
        }
        Ok(RadialGrid { r_max, point_count })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / (self.point_count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.point_count {
            self.r_max
        } else {
            i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.point_count).map(|i| self.point(i))
    }
}

/// Finite samples u(r_i) of a radial function on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.point_count {
            return Err(Error::LengthMismatch {
                expected: grid.point_count,
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(RadialField { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        RadialField {
            grid,
            values: alloc::vec![0.0; grid.point_count],
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Largest r_i with a nonzero sample, or 0 for the zero field.
    pub fn support_radius(&self) -> f64 {
        self.values
            .iter()
            .rposition(|&v| v != 0.0)
            .map_or(0.0, |i| self.grid.point(i))
    }

    /// Pointwise difference; both fields must share a grid.
    pub fn sub(&self, other: &RadialField) -> Result<RadialField> {
        self.zip(other, |a, b| a - b)
    }

    pub fn add(&self, other: &RadialField) -> Result<RadialField> {
        self.zip(other, |a, b| a + b)
    }

    pub fn scale(&self, lambda: f64) -> RadialField {
        RadialField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * lambda).collect(),
        }
    }

    fn zip(&self, other: &RadialField, f: impl Fn(f64, f64) -> f64) -> Result<RadialField> {
        if self.grid != other.grid {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "fields live on different grids",
            });
        }
        RadialField::new(
            self.grid,
            self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
        )
    }
}

/// Composite trapezoid rule for uniformly spaced samples.
pub fn trapezoid(values: &[f64], spacing: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => spacing * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}
