//! Two-path experiment: a flow split at the tangent point between a straight
//! line and a tangent circle, recombined where the circle rejoins the line.
//!
//! Both paths leave and rejoin the line at the same point, so the straight
//! path contributes no relative phase. The circle path carries the
//! quantum-potential lag `-circle_action/ħ` and, optionally, the ordinary
//! path-length phase `p·2πρ₀/ħ`. Both depend on `ρ₀` and `p` only through
//! `u = ρ₀·p`:
//!
//! ```text
//! Δφ(u) = 2π·u/ħ − π·n²·ħ/u
//! ```
//!
//! which is strictly increasing in `u`, so fringe maxima (`Δφ = 2πk`) are
//! simple and located in closed form by [`fringe_maxima`].

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use crate::confined_states::CircleConfig;
use crate::error::{domain, require_positive, Result};
use crate::exec::Execution;
use crate::phase_laws::circle_action;
use crate::units::UnitSystem;

/// Relative slack for fringe maxima that fall on a scan end.
const ROOT_SLACK: f64 = 1e-12;

/// Tolerance on `a_s² + a_c² = 1`.
const AMPLITUDE_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPathConfig {
    pub circle: CircleConfig,
    a_straight: f64,
    a_circle: f64,
    /// Add the path-length phase `p·2πρ₀/ħ` of the circle.
    pub include_dynamical: bool,
    /// Add the quantum-potential lag of the circle.
    pub include_quantum_potential: bool,
}

impl TwoPathConfig {
    /// Requires non-negative amplitudes with `a_s² + a_c² = 1`.
    pub fn new(circle: CircleConfig, a_straight: f64, a_circle: f64, include_dynamical: bool) -> Result<Self> {
        if !(a_straight.is_finite() && a_circle.is_finite() && a_straight >= 0.0 && a_circle >= 0.0) {
            return Err(domain("split amplitudes must be finite and non-negative"));
        }
        let total = a_straight * a_straight + a_circle * a_circle;
        if (total - 1.0).abs() > AMPLITUDE_SUM_TOLERANCE {
            return Err(domain(format!("split amplitudes must satisfy a_s^2 + a_c^2 = 1, got {total}")));
        }
        Ok(Self {
            circle,
            a_straight,
            a_circle,
            include_dynamical,
            include_quantum_potential: true,
        })
    }

    /// 50/50 splitter.
    pub fn balanced(circle: CircleConfig, include_dynamical: bool) -> Self {
        Self {
            circle,
            a_straight: FRAC_1_SQRT_2,
            a_circle: FRAC_1_SQRT_2,
            include_dynamical,
            include_quantum_potential: true,
        }
    }

    pub fn without_quantum_potential(mut self) -> Self {
        self.include_quantum_potential = false;
        self
    }

    pub fn a_straight(&self) -> f64 {
        self.a_straight
    }

    pub fn a_circle(&self) -> f64 {
        self.a_circle
    }

    /// `[(a_s − a_c)², (a_s + a_c)²]`.
    pub fn intensity_bounds(&self) -> (f64, f64) {
        ((self.a_straight - self.a_circle).powi(2), (self.a_straight + self.a_circle).powi(2))
    }

    fn with_circle(&self, circle: CircleConfig) -> Self {
        Self { circle, ..*self }
    }

    /// Coefficients of `Δφ(u) = slope·u − curvature/u`, with `u = ρ₀·p`.
    fn phase_coefficients(&self, units: UnitSystem) -> (f64, f64) {
        let hbar = units.hbar();
        let n = self.circle.mode().value();
        let slope = if self.include_dynamical { TAU / hbar } else { 0.0 };
        let curvature = if self.include_quantum_potential { PI * n * n * hbar } else { 0.0 };
        (slope, curvature)
    }
}

/// Phase of the circle path relative to the straight path, in radians.
pub fn path_phase_difference(cfg: &TwoPathConfig, units: UnitSystem) -> Result<f64> {
    let hbar = units.hbar();
    let dynamical = if cfg.include_dynamical {
        cfg.circle.momentum() * cfg.circle.circumference() / hbar
    } else {
        0.0
    };
    let geometric = if cfg.include_quantum_potential {
        circle_action(&cfg.circle, units)?.action / hbar
    } else {
        0.0
    };
    Ok(dynamical - geometric)
}

/// `|a_s + a_c·exp(iΔφ)|²`.
pub fn intensity(cfg: &TwoPathConfig, units: UnitSystem) -> Result<f64> {
    let dphi = path_phase_difference(cfg, units)?;
    Ok(intensity_at(cfg, dphi))
}

fn intensity_at(cfg: &TwoPathConfig, dphi: f64) -> f64 {
    let (a, b) = (cfg.a_straight, cfg.a_circle);
    let (lo, hi) = cfg.intensity_bounds();
    (a * a + b * b + 2.0 * a * b * dphi.cos()).clamp(lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParameter {
    Momentum,
    Radius,
}

impl ScanParameter {
    pub fn name(&self) -> &'static str {
        match self {
            ScanParameter::Momentum => "p",
            ScanParameter::Radius => "rho0",
        }
    }
}

impl std::str::FromStr for ScanParameter {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(ScanParameter::Momentum),
            "rho0" => Ok(ScanParameter::Radius),
            other => Err(domain(format!("unknown scan parameter {other:?}; expected p or rho0"))),
        }
    }
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl ScanRange {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        require_positive("scan lower bound", lo)?;
        if !(hi.is_finite() && hi > lo) {
            return Err(domain(format!("scan range needs hi > lo, got [{lo}, {hi}]")));
        }
        if count < 2 {
            return Err(domain("scan needs at least 2 points"));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.hi } else { self.lo + i as f64 * step })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub parameter: ScanParameter,
    pub values: Vec<f64>,
    pub phase_differences: Vec<f64>,
    pub intensities: Vec<f64>,
    /// Parameter values inside the range where `Δφ ≡ 0 (mod 2π)`, ascending.
    pub maxima: Vec<f64>,
}

fn config_at(cfg: &TwoPathConfig, parameter: ScanParameter, value: f64) -> Result<TwoPathConfig> {
    let circle = match parameter {
        ScanParameter::Momentum => cfg.circle.with_momentum(value)?,
        ScanParameter::Radius => cfg.circle.with_radius(value)?,
    };
    Ok(cfg.with_circle(circle))
}

pub fn fringe_scan(
    cfg: &TwoPathConfig,
    parameter: ScanParameter,
    range: ScanRange,
    units: UnitSystem,
) -> Result<FringeScan> {
    fringe_scan_with(cfg, parameter, range, units, Execution::default())
}

/// Intensity and phase difference at each swept value, plus the fringe maxima.
pub fn fringe_scan_with(
    cfg: &TwoPathConfig,
    parameter: ScanParameter,
    range: ScanRange,
    units: UnitSystem,
    exec: Execution,
) -> Result<FringeScan> {
    let values = range.values();
    let phase_differences = exec
        .map(values.len(), |i| {
            config_at(cfg, parameter, values[i]).and_then(|c| path_phase_difference(&c, units))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let intensities = phase_differences.iter().map(|&d| intensity_at(cfg, d)).collect();
    let maxima = fringe_maxima(cfg, parameter, range, units)?;
    Ok(FringeScan { parameter, values, phase_differences, intensities, maxima })
}

/// Parameter values in `[lo, hi]` where `Δφ = 2πk`, solved in closed form.
///
/// With only the path-length phase `u = kħ`; with only the quantum-potential
/// lag `u = −n²ħ/(2k)` for `k < 0`; with both, the positive root of
/// `slope·u² − 2πk·u − curvature = 0`. With neither, `Δφ ≡ 0` and there are no
/// isolated maxima, so the list is empty.
pub fn fringe_maxima(
    cfg: &TwoPathConfig,
    parameter: ScanParameter,
    range: ScanRange,
    units: UnitSystem,
) -> Result<Vec<f64>> {
    let (slope, curvature) = cfg.phase_coefficients(units);
    if slope == 0.0 && curvature == 0.0 {
        return Ok(Vec::new());
    }
    let other = match parameter {
        ScanParameter::Momentum => cfg.circle.radius(),
        ScanParameter::Radius => cfg.circle.momentum(),
    };
    let phase = |u: f64| slope * u - curvature / u;
    let (u_lo, u_hi) = (range.lo * other, range.hi * other);
    // Roots on the range ends must survive rounding in the phase.
    let slack = ROOT_SLACK * (range.hi - range.lo);
    let k_first = (phase(u_lo) / TAU - ROOT_SLACK).ceil() as i64;
    let k_last = (phase(u_hi) / TAU + ROOT_SLACK).floor() as i64;

    let mut maxima = Vec::new();
    for k in k_first..=k_last {
        let target = TAU * k as f64;
        let u = if slope == 0.0 {
            -curvature / target
        } else {
            let disc = (target * target + 4.0 * slope * curvature).sqrt();
            if target >= 0.0 {
                (target + disc) / (2.0 * slope)
            } else {
                // Same root, written without cancellation.
                2.0 * curvature / (disc - target)
            }
        };
        let value = u / other;
        if value >= range.lo - slack && value <= range.hi + slack {
            maxima.push(value.clamp(range.lo, range.hi));
        }
    }
    Ok(maxima)
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: UnitSystem = UnitSystem::natural();

    fn cfg(rho: f64, p: f64, dynamical: bool) -> TwoPathConfig {
        TwoPathConfig::balanced(CircleConfig::half_mode(rho, p).unwrap(), dynamical)
    }

    #[test]
    fn phase_difference_examples() {
        let on = path_phase_difference(&cfg(1.0, 10.0, true), U).unwrap();
        assert!((on - (20.0 * PI - PI / 40.0)).abs() < 1e-12);
        assert!((on - 62.7533).abs() < 1e-4);
        let off = path_phase_difference(&cfg(1.0, 10.0, false), U).unwrap();
        assert!((off + PI / 40.0).abs() < 1e-15);
        let far = path_phase_difference(&cfg(1e12, 10.0, false), U).unwrap();
        assert!(far.abs() < 1e-12);
    }

    #[test]
    fn intensity_examples() {
        let c = cfg(1.0, 10.0, true);
        assert!((intensity_at(&c, 0.0) - 2.0).abs() < 1e-15);
        assert!(intensity_at(&c, PI).abs() < 1e-15);
        let i = intensity(&c, U).unwrap();
        assert!((i - (1.0 + (PI / 40.0).cos())).abs() < 1e-12);
        assert!((i - 1.996917).abs() < 1e-6);
    }

    #[test]
    fn amplitude_validation() {
        let circle = CircleConfig::half_mode(1.0, 1.0).unwrap();
        assert!(TwoPathConfig::new(circle, 0.6, 0.8, true).is_ok());
        assert!(TwoPathConfig::new(circle, 1.0, 0.0, true).is_ok());
        assert!(TwoPathConfig::new(circle, 0.5, 0.5, true).is_err());
        assert!(TwoPathConfig::new(circle, -0.6, 0.8, true).is_err());
    }

    #[test]
    fn single_path_has_no_fringes() {
        let c = TwoPathConfig::new(CircleConfig::half_mode(1.0, 10.0).unwrap(), 1.0, 0.0, true).unwrap();
        let scan = fringe_scan(&c, ScanParameter::Radius, ScanRange::new(0.5, 1.5, 101).unwrap(), U).unwrap();
        assert!(scan.intensities.iter().all(|&i| i == 1.0));
    }

    #[test]
    fn both_terms_off_gives_flat_intensity() {
        let c = cfg(1.0, 10.0, false).without_quantum_potential();
        let scan = fringe_scan(&c, ScanParameter::Momentum, ScanRange::new(1.0, 100.0, 50).unwrap(), U).unwrap();
        assert!(scan.intensities.iter().all(|&i| (i - 2.0).abs() < 1e-15));
        assert!(scan.maxima.is_empty());
    }

    #[test]
    fn geometric_only_sweep_is_monotone() {
        let c = cfg(1.0, 10.0, false);
        let scan = fringe_scan(&c, ScanParameter::Momentum, ScanRange::new(1.0, 10.0, 200).unwrap(), U).unwrap();
        assert!(scan.phase_differences.windows(2).all(|w| w[1] > w[0]));
        assert!(scan.phase_differences.iter().all(|d| d.abs() < TAU));
        assert!(scan.maxima.is_empty());
        // Quantum-potential-only maxima exist once |Δφ| reaches 2π: u = n²ħ/(2|k|).
        let deep = fringe_maxima(&c, ScanParameter::Momentum, ScanRange::new(0.01, 1.0, 2).unwrap(), U).unwrap();
        assert_eq!(deep.len(), 12);
        assert!((deep[11] - 0.125).abs() < 1e-15);
        assert!((deep[0] - 1.0 / 96.0).abs() < 1e-15);
    }

    #[test]
    fn maxima_spacing_and_bounds() {
        let c = cfg(1.0, 10.0, true);
        let range = ScanRange::new(0.9, 1.1, 201).unwrap();
        let scan = fringe_scan(&c, ScanParameter::Radius, range, U).unwrap();
        assert_eq!(scan.maxima.len(), 2);
        assert!(((scan.maxima[1] - scan.maxima[0]) - 0.1).abs() < 1e-3);
        let (lo, hi) = c.intensity_bounds();
        assert!(scan.intensities.iter().all(|&i| i >= lo && i <= hi));
        for &m in &scan.maxima {
            let d = path_phase_difference(&c.with_circle(c.circle.with_radius(m).unwrap()), U).unwrap();
            assert!((d - TAU * (d / TAU).round()).abs() < 1e-12);
        }
    }

    #[test]
    fn maxima_on_range_ends_are_kept() {
        let c = cfg(1.0, 10.0, true).without_quantum_potential();
        let range = ScanRange::new(0.9, 1.1, 3).unwrap();
        let maxima = fringe_maxima(&c, ScanParameter::Radius, range, U).unwrap();
        assert_eq!(maxima.len(), 3, "{maxima:?}");
        assert!((maxima[0] - 0.9).abs() < 1e-15 && (maxima[2] - 1.1).abs() < 1e-15);
    }

    #[test]
    fn sequential_and_parallel_scans_agree() {
        let c = cfg(1.0, 10.0, true);
        let r = ScanRange::new(0.5, 2.0, 1000).unwrap();
        let a = fringe_scan_with(&c, ScanParameter::Radius, r, U, Execution::Sequential).unwrap();
        let b = fringe_scan_with(&c, ScanParameter::Radius, r, U, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn range_validation() {
        assert!(ScanRange::new(0.0, 1.0, 10).is_err());
        assert!(ScanRange::new(1.0, 1.0, 10).is_err());
        assert!(ScanRange::new(1.0, 2.0, 1).is_err());
        assert!("q".parse::<ScanParameter>().is_err());
        let v = ScanRange::new(0.9, 1.1, 3).unwrap().values();
        assert_eq!(v[2], 1.1);
    }
}
