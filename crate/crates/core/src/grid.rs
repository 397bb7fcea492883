//! Uniform 1D and 2D grids.
//!
//! 2D samples are stored row-major with the `y` index running fastest:
//! flat index `i * ny + j` holds the point `(x_i, y_j)`.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    origin: f64,
    spacing: f64,
    count: usize,
}

impl Grid1D {
    pub const MIN_POINTS: usize = 3;

    pub fn new(origin: f64, spacing: f64, count: usize) -> Result<Self> {
        if !origin.is_finite() {
            return Err(domain(format!("grid origin must be finite, got {origin}")));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(domain(format!("grid spacing must be positive and finite, got {spacing}")));
        }
        if count < Self::MIN_POINTS {
            return Err(domain(format!(
                "grid needs at least {} points per axis, got {count}",
                Self::MIN_POINTS
            )));
        }
        Ok(Self { origin, spacing, count })
    }

    /// `count` points from `lo` to `hi`, both endpoints included.
    pub fn spanning(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < Self::MIN_POINTS {
            return Err(domain(format!(
                "grid needs at least {} points per axis, got {count}",
                Self::MIN_POINTS
            )));
        }
        if !(hi > lo) {
            return Err(domain(format!("grid bounds must satisfy lo < hi, got [{lo}, {hi}]")));
        }
        Self::new(lo, (hi - lo) / (count - 1) as f64, count)
    }

    /// `count` points on the periodic cell `[lo, hi)`; `hi` is the image of `lo`.
    pub fn periodic(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(domain(format!("grid bounds must satisfy lo < hi, got [{lo}, {hi})")));
        }
        Self::new(lo, (hi - lo) / count as f64, count)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.spacing
    }

    /// Coordinate of the last sample.
    pub fn end(&self) -> f64 {
        self.coord(self.count - 1)
    }

    pub fn coords(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.coord(i))
    }

    /// Whether the grid's first and last samples sit on `lo` and `hi`.
    pub fn spans(&self, lo: f64, hi: f64) -> bool {
        let tol = 1e-9 * (hi - lo).abs().max(1.0);
        (self.origin - lo).abs() <= tol && (self.end() - hi).abs() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Self { x, y }
    }

    pub fn square(lo: f64, hi: f64, count: usize) -> Result<Self> {
        let axis = Grid1D::spanning(lo, hi, count)?;
        Ok(Self::new(axis, axis))
    }

    pub fn len(&self) -> usize {
        self.x.len() * self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.y.len() + j
    }

    pub fn split_index(&self, flat: usize) -> (usize, usize) {
        (flat / self.y.len(), flat % self.y.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    D1(Grid1D),
    D2(Grid2D),
}

impl From<Grid1D> for Grid {
    fn from(g: Grid1D) -> Self {
        Grid::D1(g)
    }
}

impl From<Grid2D> for Grid {
    fn from(g: Grid2D) -> Self {
        Grid::D2(g)
    }
}

/// One axis of a grid together with the flat-index stride between neighbours on it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Axis {
    pub grid: Grid1D,
    pub stride: usize,
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::D1(g) => g.len(),
            Grid::D2(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dims(&self) -> usize {
        match self {
            Grid::D1(_) => 1,
            Grid::D2(_) => 2,
        }
    }

    /// Length (1D) or area (2D) of one grid cell, the quadrature weight.
    pub fn cell_volume(&self) -> f64 {
        match self {
            Grid::D1(g) => g.spacing(),
            Grid::D2(g) => g.x.spacing() * g.y.spacing(),
        }
    }

    pub fn as_1d(&self) -> Option<&Grid1D> {
        match self {
            Grid::D1(g) => Some(g),
            Grid::D2(_) => None,
        }
    }

    pub fn as_2d(&self) -> Option<&Grid2D> {
        match self {
            Grid::D1(_) => None,
            Grid::D2(g) => Some(g),
        }
    }

    pub(crate) fn axes(&self) -> Vec<Axis> {
        match self {
            Grid::D1(g) => vec![Axis { grid: *g, stride: 1 }],
            Grid::D2(g) => vec![
                Axis { grid: g.x, stride: g.y.len() },
                Axis { grid: g.y, stride: 1 },
            ],
        }
    }

    /// Position of a flat index along each axis.
    pub(crate) fn axis_positions(&self, flat: usize) -> [usize; 2] {
        match self {
            Grid::D1(_) => [flat, 0],
            Grid::D2(g) => {
                let (i, j) = g.split_index(flat);
                [i, j]
            }
        }
    }

    pub fn is_boundary(&self, flat: usize) -> bool {
        let pos = self.axis_positions(flat);
        self.axes()
            .iter()
            .zip(pos)
            .any(|(axis, p)| p == 0 || p + 1 == axis.grid.len())
    }

    /// Grid lines along the fastest-varying axis, as ranges of flat indices.
    pub(crate) fn lines(&self) -> Vec<std::ops::Range<usize>> {
        match self {
            Grid::D1(g) => std::iter::once(0..g.len()).collect(),
            Grid::D2(g) => {
                let ny = g.y.len();
                (0..g.x.len()).map(|i| i * ny..(i + 1) * ny).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_axes() {
        assert!(Grid1D::new(0.0, 0.1, 2).is_err());
        assert!(Grid1D::new(0.0, 0.0, 10).is_err());
        assert!(Grid1D::new(f64::NAN, 0.1, 10).is_err());
        assert!(Grid1D::spanning(1.0, 1.0, 10).is_err());
    }

    #[test]
    fn spanning_hits_both_ends() {
        let g = Grid1D::spanning(0.0, 1.0, 401).unwrap();
        assert_eq!(g.coord(0), 0.0);
        assert!((g.end() - 1.0).abs() < 1e-15);
        assert!(g.spans(0.0, 1.0));
        assert!(!g.spans(0.0, 2.0));
    }

    #[test]
    fn periodic_excludes_right_end() {
        let g = Grid1D::periodic(0.0, 8.0, 8).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.end(), 7.0);
    }

    #[test]
    fn flat_index_layout() {
        let g = Grid2D::new(Grid1D::spanning(0.0, 1.0, 3).unwrap(), Grid1D::spanning(0.0, 1.0, 4).unwrap());
        assert_eq!(g.index(2, 3), 11);
        assert_eq!(g.split_index(7), (1, 3));
        let grid = Grid::from(g);
        assert!(grid.is_boundary(0));
        assert!(grid.is_boundary(7));
        assert!(!grid.is_boundary(g.index(1, 1)));
        assert_eq!(grid.lines().len(), 3);
    }
}
