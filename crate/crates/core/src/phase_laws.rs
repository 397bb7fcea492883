//! Closed-form actions picked up by a quanton in the tube and on the circle.
//!
//! Every result is an action `Q·Δt` (units of ħ) together with its phase in
//! radians, `action/ħ`. The transmitted wave lags: it is multiplied by
//! `exp(-i·action/ħ)`.

use std::f64::consts::PI;

use crate::confined_states::{kinematics, transverse_energy, traversal_time, CircleConfig, TubeConfig};
use crate::error::{Error, Result};
use crate::quantum_potential::q_circle_analytic;
use crate::units::UnitSystem;

pub const LAG_CONVENTION: &str = "lag: the wave is multiplied by exp(-i*action/hbar)";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    /// Accumulated action, in units of ħ.
    pub action: f64,
    /// `action / ħ`.
    pub phase_rad: f64,
    pub convention: &'static str,
}

impl PhaseResult {
    pub fn from_action(action: f64, units: UnitSystem) -> Self {
        Self {
            action,
            phase_rad: action / units.hbar(),
            convention: LAG_CONVENTION,
        }
    }
}

/// First-order tube action `E_T·m·L/p`; `π²ħ²L/(p·a²)` for the ground mode.
pub fn levy_leblond_action(cfg: &TubeConfig, units: UnitSystem) -> Result<PhaseResult> {
    let et = transverse_energy(cfg.nx(), cfg.ny(), cfg.side(), units)?;
    let dt = traversal_time(cfg.length(), cfg.momentum(), units)?;
    Ok(PhaseResult::from_action(et * dt, units))
}

/// `Q·Δt`.
pub fn q_dt_action(q: f64, dt: f64, units: UnitSystem) -> PhaseResult {
    PhaseResult::from_action(q * dt, units)
}

/// Exact mode-matching action `(p − p')·L`.
///
/// [`levy_leblond_action`] is its first-order expansion in `E_T/E` and never
/// exceeds it.
pub fn exact_tube_action(cfg: &TubeConfig, units: UnitSystem) -> Result<PhaseResult> {
    let k = kinematics(cfg, units)?;
    let p = cfg.momentum();
    let p_prime = k.reduced_momentum().ok_or_else(|| Error::BelowCutoff {
        momentum: p,
        cutoff: (2.0 * units.mass() * k.transverse_energy).sqrt(),
    })?;
    // p − p' = 2m·E_T / (p + p') avoids cancellation far above cutoff.
    let gap = 2.0 * units.mass() * k.transverse_energy / (p + p_prime);
    Ok(PhaseResult::from_action(gap * cfg.length(), units))
}

/// Action `Q·2πρ₀m/p` for one turn around the circle; `πħ²/(4ρ₀p)` for `n = 1/2`.
pub fn circle_action(cfg: &CircleConfig, units: UnitSystem) -> Result<PhaseResult> {
    let q = q_circle_analytic(cfg.radius(), cfg.mode(), units)?;
    let dt = traversal_time(cfg.circumference(), cfg.momentum(), units)?;
    Ok(PhaseResult::from_action(q * dt, units))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergBound {
    /// Circle action at `ρ₀·p = ħ`: `π·n²·ħ`, i.e. `πħ/4` for `n = 1/2`.
    pub action_bound: f64,
    /// `ρ₀·p/ħ`.
    pub saturating_product: f64,
    /// The configuration's own circle action.
    pub action: f64,
    /// `false` when `ρ₀·p < ħ`; the circle formula is then outside its range.
    pub within_validity: bool,
}

impl HeisenbergBound {
    pub fn note(&self) -> &'static str {
        if self.within_validity {
            "rho0*p >= hbar: action bounded by its value at rho0*p = hbar"
        } else {
            "sub-Heisenberg regime, formula outside validity"
        }
    }
}

/// Compares the circle action with its value at `ρ₀·p = ħ`.
///
/// The uncertainty relation `ρ₀·p ≳ ħ` caps the circle action at `πħ/4`
/// (general `n`: `π·n²·ħ`), reached when `ρ₀·p = ħ`.
pub fn heisenberg_bound(cfg: &CircleConfig, units: UnitSystem) -> Result<HeisenbergBound> {
    let hbar = units.hbar();
    let n = cfg.mode().value();
    let action = circle_action(cfg, units)?.action;
    let product = cfg.radius() * cfg.momentum() / hbar;
    Ok(HeisenbergBound {
        action_bound: PI * n * n * hbar,
        saturating_product: product,
        action,
        within_validity: product >= 1.0,
    })
}
