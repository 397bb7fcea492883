//! Bohmian quantum potential `Q = -(ħ²/2m)·ΔR/R`.
//!
//! For the tube and circle eigenmodes `Q` is constant and equal to the
//! confinement energy. The same closed form is applied to excited modes
//! (`(nx, ny) ≠ (1, 1)`, `n ≠ 1/2`) as an extension of the two ground cases.
//! [`q_field_numeric`] evaluates the definition on sampled amplitudes with a
//! 3-point central Laplacian; samples on the grid boundary, at amplitude nodes
//! and next to a node are masked rather than extrapolated.

use crate::confined_states::{transverse_energy, HalfInteger};
use crate::error::{require_positive, Error, Result};
use crate::exec::Execution;
use crate::field::RealField;
use crate::grid::Grid;
use crate::units::UnitSystem;

/// Sampled quantum potential with a validity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct QField {
    grid: Grid,
    values: Vec<f64>,
    valid: Vec<bool>,
}

impl QField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Q at every grid point; masked points hold `0.0`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn valid_mask(&self) -> &[bool] {
        &self.valid
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.valid[index].then(|| self.values[index])
    }

    pub fn valid_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().zip(&self.valid).filter(|(_, &ok)| ok).map(|(&q, _)| q)
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&ok| ok).count()
    }
}

/// `Q = (nx² + ny²)·π²·ħ² / (2·m·a²)`, the transverse energy of the mode.
pub fn q_tube_analytic(side: f64, nx: u32, ny: u32, units: UnitSystem) -> Result<f64> {
    transverse_energy(nx, ny, side, units)
}

/// `Q = n²·ħ² / (2·m·ρ₀²)`; `ħ²/(8·m·ρ₀²)` for `n = 1/2`.
pub fn q_circle_analytic(radius: f64, n: HalfInteger, units: UnitSystem) -> Result<f64> {
    require_positive("circle radius rho0", radius)?;
    let hbar = units.hbar();
    let n = n.value();
    Ok(n * n * hbar * hbar / (2.0 * units.mass() * radius * radius))
}

/// Points where a 3-point stencil on `amplitude` is usable: off the grid
/// boundary, above `node_epsilon`, and with no node among the stencil neighbours.
pub(crate) fn stencil_mask(grid: &Grid, amplitude: impl Fn(usize) -> f64, node_epsilon: f64) -> Vec<bool> {
    let axes = grid.axes();
    (0..grid.len())
        .map(|i| {
            if grid.is_boundary(i) || amplitude(i).abs() <= node_epsilon {
                return false;
            }
            axes.iter().all(|axis| {
                amplitude(i - axis.stride).abs() > node_epsilon && amplitude(i + axis.stride).abs() > node_epsilon
            })
        })
        .collect()
}

pub fn q_field_numeric(amplitude: &RealField, units: UnitSystem, node_epsilon: f64) -> Result<QField> {
    q_field_numeric_with(amplitude, units, node_epsilon, Execution::default())
}

/// [`q_field_numeric`] with an explicit scheduling choice.
pub fn q_field_numeric_with(
    amplitude: &RealField,
    units: UnitSystem,
    node_epsilon: f64,
    exec: Execution,
) -> Result<QField> {
    require_positive("node_epsilon", node_epsilon)?;
    let grid = *amplitude.grid();
    // Grid1D already guarantees this; kept as the documented precondition.
    if grid.axes().iter().any(|a| a.grid.len() < 3) {
        return Err(crate::error::domain("Q needs at least 3 points per axis"));
    }
    let r = amplitude.values();
    let valid = stencil_mask(&grid, |i| r[i], node_epsilon);
    let axes: Vec<(usize, f64)> = grid
        .axes()
        .iter()
        .map(|a| (a.stride, 1.0 / (a.grid.spacing() * a.grid.spacing())))
        .collect();
    let hbar = units.hbar();
    let prefactor = -hbar * hbar / (2.0 * units.mass());

    let values = exec.map(grid.len(), |i| {
        if !valid[i] {
            return 0.0;
        }
        let laplacian: f64 = axes
            .iter()
            .map(|&(stride, inv_h2)| (r[i - stride] - 2.0 * r[i] + r[i + stride]) * inv_h2)
            .sum();
        prefactor * laplacian / r[i]
    });
    if let Some(i) = values.iter().position(|q| !q.is_finite()) {
        return Err(crate::error::domain(format!("Q is not finite at grid point {i}")));
    }
    Ok(QField { grid, values, valid })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniformity {
    pub mean: f64,
    pub max_deviation: f64,
    pub uniform: bool,
}

/// Mean of Q over valid points and the largest deviation from it.
pub fn q_uniformity_check(qf: &QField, tol: f64) -> Result<Uniformity> {
    let count = qf.valid_count();
    if count == 0 {
        return Err(Error::NoValidPoints);
    }
    let mean = qf.valid_values().sum::<f64>() / count as f64;
    let max_deviation = qf.valid_values().fold(0.0, |m: f64, q| m.max((q - mean).abs()));
    Ok(Uniformity { mean, max_deviation, uniform: max_deviation <= tol })
}
