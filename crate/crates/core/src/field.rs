use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::grid::{Grid, Grid1D, Grid2D};

/// A value that can be stored in a [`SampledField`].
pub trait Sample: Copy + Send + Sync + std::fmt::Debug {
    fn is_finite(&self) -> bool;
}

impl Sample for f64 {
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Sample for Complex64 {
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Finite samples, one per point of a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField<T> {
    grid: Grid,
    values: Vec<T>,
}

pub type RealField = SampledField<f64>;
pub type ComplexField = SampledField<Complex64>;

impl<T: Sample> SampledField<T> {
    pub fn new(grid: impl Into<Grid>, values: Vec<T>) -> Result<Self> {
        let grid = grid.into();
        if values.len() != grid.len() {
            return Err(domain(format!(
                "field has {} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!("sample {i} is not finite: {:?}", values[i])));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn_1d(grid: Grid1D, f: impl Fn(f64) -> T) -> Result<Self> {
        Self::new(grid, grid.coords().map(f).collect())
    }

    pub fn from_fn_2d(grid: Grid2D, f: impl Fn(f64, f64) -> T) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for x in grid.x.coords() {
            for y in grid.y.coords() {
                values.push(f(x, y));
            }
        }
        Self::new(grid, values)
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, values: Vec<T>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> Result<SampledField<U>> {
        SampledField::new(self.grid, self.values.iter().copied().map(f).collect())
    }

    pub(crate) fn ensure_same_grid<U>(&self, other: &SampledField<U>) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }
}

impl RealField {
    /// Value at the 2D point `(i, j)`; `None` for 1D fields.
    pub fn at(&self, i: usize, j: usize) -> Option<f64> {
        self.grid.as_2d().map(|g| self.values[g.index(i, j)])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl ComplexField {
    pub fn from_real(field: &RealField) -> Self {
        Self {
            grid: field.grid,
            values: field.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    /// `∫|ψ|²` by the rectangle rule.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn max_norm_sqr(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm_sqr()))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v * factor).collect(),
        }
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexField) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }
}
