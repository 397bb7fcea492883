//! Polar form `ψ = R·exp(iS/ħ)` of a sampled wavefunction.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::field::{ComplexField, RealField};
use crate::units::UnitSystem;

/// Amplitude threshold below which the phase of a sample is undefined.
pub const DEFAULT_NODE_EPSILON: f64 = 1e-10;

/// Amplitude `R ≥ 0` and action `S` of a wavefunction.
///
/// `S` is meaningful only where `R > node_epsilon`; masked samples hold `0.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarPair {
    amplitude: RealField,
    action: RealField,
    valid: Vec<bool>,
    node_epsilon: f64,
}

impl PolarPair {
    /// Builds a pair from an amplitude and action, masking wherever `R ≤ node_epsilon`.
    pub fn new(amplitude: RealField, action: RealField, node_epsilon: f64) -> Result<Self> {
        require_positive("node_epsilon", node_epsilon)?;
        amplitude.ensure_same_grid(&action)?;
        if amplitude.values().iter().any(|&r| r < 0.0) {
            return Err(crate::error::domain("amplitude must be non-negative"));
        }
        let valid: Vec<bool> = amplitude.values().iter().map(|&r| r > node_epsilon).collect();
        let masked: Vec<f64> = action
            .values()
            .iter()
            .zip(&valid)
            .map(|(&s, &ok)| if ok { s } else { 0.0 })
            .collect();
        let action = RealField::new(*amplitude.grid(), masked)?;
        Ok(Self { amplitude, action, valid, node_epsilon })
    }

    pub fn amplitude(&self) -> &RealField {
        &self.amplitude
    }

    pub fn action(&self) -> &RealField {
        &self.action
    }

    pub fn valid_mask(&self) -> &[bool] {
        &self.valid
    }

    pub fn is_valid(&self, index: usize) -> bool {
        self.valid[index]
    }

    pub fn node_epsilon(&self) -> f64 {
        self.node_epsilon
    }
}

/// Splits `ψ` into `R = |ψ|` and an unwrapped action `S = ħ·arg ψ`.
///
/// Unwrapping runs along each grid line (the fastest axis) from its first
/// unmasked sample. Every unmasked sample takes the branch of `arg ψ` nearest
/// to the last unwrapped value, which is ordinary unwrapping between
/// neighbours and the minimal-jump restart across masked gaps. The first
/// sample of a 2D line is matched to the previous line at the same position
/// when that sample is valid.
pub fn polar_decompose(psi: &ComplexField, units: UnitSystem, node_epsilon: f64) -> Result<PolarPair> {
    require_positive("node_epsilon", node_epsilon)?;
    let grid = *psi.grid();
    let values = psi.values();
    let amplitude: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let valid: Vec<bool> = amplitude.iter().map(|&r| r > node_epsilon).collect();
    if !valid.iter().any(|&v| v) {
        return Err(Error::NullField { node_epsilon });
    }

    let mut phase = vec![0.0; values.len()];
    let mut last: Option<f64> = None;
    let mut previous_line: Option<std::ops::Range<usize>> = None;
    for line in grid.lines() {
        let mut running: Option<f64> = None;
        for (offset, idx) in line.clone().enumerate() {
            if !valid[idx] {
                continue;
            }
            let raw = values[idx].arg();
            let reference = running.or_else(|| {
                previous_line
                    .as_ref()
                    .map(|prev| prev.start + offset)
                    .filter(|&above| valid[above])
                    .map(|above| phase[above])
                    .or(last)
            });
            let unwrapped = match reference {
                Some(r) => raw + TAU * ((r - raw) / TAU).round(),
                None => raw,
            };
            phase[idx] = unwrapped;
            running = Some(unwrapped);
            last = Some(unwrapped);
        }
        previous_line = Some(line);
    }

    let hbar = units.hbar();
    let action: Vec<f64> = phase.iter().map(|&p| hbar * p).collect();
    Ok(PolarPair {
        amplitude: RealField::from_parts_unchecked(grid, amplitude),
        action: RealField::from_parts_unchecked(grid, action),
        valid,
        node_epsilon,
    })
}

/// `ψ = R·exp(iS/ħ)` at unmasked points and `0` at masked ones.
pub fn recompose(pair: &PolarPair, units: UnitSystem) -> ComplexField {
    let hbar = units.hbar();
    let values = pair
        .amplitude
        .values()
        .iter()
        .zip(pair.action.values())
        .zip(&pair.valid)
        .map(|((&r, &s), &ok)| if ok { Complex64::from_polar(r, s / hbar) } else { Complex64::new(0.0, 0.0) })
        .collect();
    ComplexField::from_parts_unchecked(*pair.amplitude.grid(), values)
}
