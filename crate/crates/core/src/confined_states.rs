//! Stationary states of the two constrained systems: a square tube and a circle.
//!
//! Inside a tube of side `a` the transverse factor is
//! `sin(nx·π·x/a)·sin(ny·π·y/a)` with zero-point energy
//! `E_T = (nx² + ny²)·π²·ħ² / (2·m·a²)`, and the quanton keeps its energy
//! `E = p²/2m` while trading longitudinal momentum: `p'² / 2m + E_T = E`.
//! On a circle of radius `ρ₀` the mode is `sin(n·s/ρ₀)` in the arc length `s`,
//! with a node at the tangent point `s = 0`; half-integer `n` is allowed.

use std::f64::consts::{PI, TAU};

use crate::error::{domain, require_positive, Result};
use crate::field::RealField;
use crate::grid::{Grid1D, Grid2D};
use crate::units::UnitSystem;

/// A positive integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfInteger {
    twice: u32,
}

impl HalfInteger {
    pub const ONE_HALF: HalfInteger = HalfInteger { twice: 1 };

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(domain("mode number must be positive"));
        }
        Ok(Self { twice })
    }

    /// Accepts any `n` for which `2n` is a positive integer.
    pub fn new(n: f64) -> Result<Self> {
        let twice = 2.0 * n;
        if !(twice.is_finite() && twice >= 1.0 && (twice - twice.round()).abs() <= 1e-12 && twice <= u32::MAX as f64) {
            return Err(domain(format!("mode number {n} is not a positive integer or half-integer")));
        }
        Ok(Self { twice: twice.round() as u32 })
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeConfig {
    side: f64,
    length: f64,
    nx: u32,
    ny: u32,
    momentum: f64,
}

impl TubeConfig {
    /// `side` is `a`, `length` is `L`, `momentum` the incident `p`.
    pub fn new(side: f64, length: f64, nx: u32, ny: u32, momentum: f64) -> Result<Self> {
        require_positive("tube side a", side)?;
        if !(length.is_finite() && length >= 0.0) {
            return Err(domain(format!("tube length L must be non-negative and finite, got {length}")));
        }
        if nx == 0 || ny == 0 {
            return Err(domain("transverse quantum numbers must be at least 1"));
        }
        require_positive("incident momentum p", momentum)?;
        Ok(Self { side, length, nx, ny, momentum })
    }

    /// Ground transverse mode `nx = ny = 1`.
    pub fn ground(side: f64, length: f64, momentum: f64) -> Result<Self> {
        Self::new(side, length, 1, 1, momentum)
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn nx(&self) -> u32 {
        self.nx
    }

    pub fn ny(&self) -> u32 {
        self.ny
    }

    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    pub fn with_momentum(&self, momentum: f64) -> Result<Self> {
        Self::new(self.side, self.length, self.nx, self.ny, momentum)
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(self.side, length, self.nx, self.ny, self.momentum)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleConfig {
    radius: f64,
    mode: HalfInteger,
    momentum: f64,
}

impl CircleConfig {
    pub fn new(radius: f64, mode: HalfInteger, momentum: f64) -> Result<Self> {
        require_positive("circle radius rho0", radius)?;
        require_positive("momentum p", momentum)?;
        Ok(Self { radius, mode, momentum })
    }

    /// The `n = 1/2` mode with a single node at the tangent point.
    pub fn half_mode(radius: f64, momentum: f64) -> Result<Self> {
        Self::new(radius, HalfInteger::ONE_HALF, momentum)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn mode(&self) -> HalfInteger {
        self.mode
    }

    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    pub fn circumference(&self) -> f64 {
        TAU * self.radius
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(radius, self.mode, self.momentum)
    }

    pub fn with_momentum(&self, momentum: f64) -> Result<Self> {
        Self::new(self.radius, self.mode, momentum)
    }
}

/// Longitudinal motion inside the tube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Longitudinal {
    Propagating { momentum: f64 },
    /// The incident energy lies below the transverse zero-point energy.
    Evanescent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub total_energy: f64,
    pub transverse_energy: f64,
    pub longitudinal: Longitudinal,
}

impl Kinematics {
    pub fn reduced_momentum(&self) -> Option<f64> {
        match self.longitudinal {
            Longitudinal::Propagating { momentum } => Some(momentum),
            Longitudinal::Evanescent => None,
        }
    }

    pub fn is_propagating(&self) -> bool {
        matches!(self.longitudinal, Longitudinal::Propagating { .. })
    }
}

/// `E_T = (nx² + ny²)·π²·ħ² / (2·m·a²)`.
pub fn transverse_energy(nx: u32, ny: u32, side: f64, units: UnitSystem) -> Result<f64> {
    require_positive("tube side a", side)?;
    if nx == 0 || ny == 0 {
        return Err(domain("transverse quantum numbers must be at least 1"));
    }
    let n2 = (nx as f64).powi(2) + (ny as f64).powi(2);
    let hbar = units.hbar();
    Ok(n2 * PI * PI * hbar * hbar / (2.0 * units.mass() * side * side))
}

/// Momentum below which the transverse mode cannot propagate, `√(2·m·E_T)`.
pub fn cutoff_momentum(cfg: &TubeConfig, units: UnitSystem) -> Result<f64> {
    let et = transverse_energy(cfg.nx, cfg.ny, cfg.side, units)?;
    Ok((2.0 * units.mass() * et).sqrt())
}

/// `p' = √(p² − 2·m·E_T)` for a tube traversed at fixed energy.
///
/// Incidence exactly at the cutoff (within rounding) gives `p' = 0`.
pub fn kinematics(cfg: &TubeConfig, units: UnitSystem) -> Result<Kinematics> {
    let m = units.mass();
    let p = cfg.momentum;
    let et = transverse_energy(cfg.nx, cfg.ny, cfg.side, units)?;
    let p2 = p * p;
    let excess = p2 - 2.0 * m * et;
    let longitudinal = if excess >= -4.0 * f64::EPSILON * p2 {
        Longitudinal::Propagating { momentum: excess.max(0.0).sqrt() }
    } else {
        Longitudinal::Evanescent
    };
    Ok(Kinematics {
        total_energy: p2 / (2.0 * m),
        transverse_energy: et,
        longitudinal,
    })
}

/// Transverse factor `sin(nx·π·x/a)·sin(ny·π·y/a)`, unit peak amplitude for the ground mode.
pub fn tube_mode_field(cfg: &TubeConfig, grid: Grid2D) -> Result<RealField> {
    let a = cfg.side;
    if !(grid.x.spans(0.0, a) && grid.y.spans(0.0, a)) {
        return Err(domain(format!("grid must span the cross-section [0, {a}]^2")));
    }
    let kx = cfg.nx as f64 * PI / a;
    let ky = cfg.ny as f64 * PI / a;
    let x_last = grid.x.len() - 1;
    let y_last = grid.y.len() - 1;
    // Walls are sampled exactly so the boundary is an exact node.
    let sx: Vec<f64> = (0..grid.x.len())
        .map(|i| if i == 0 || i == x_last { 0.0 } else { (kx * grid.x.coord(i)).sin() })
        .collect();
    let sy: Vec<f64> = (0..grid.y.len())
        .map(|j| if j == 0 || j == y_last { 0.0 } else { (ky * grid.y.coord(j)).sin() })
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for &fx in &sx {
        values.extend(sy.iter().map(|&fy| fx * fy));
    }
    RealField::new(grid, values)
}

/// `sin(n·s/ρ₀)` over the arc length `s ∈ [0, 2π·ρ₀]`.
pub fn circle_mode_field(cfg: &CircleConfig, grid: Grid1D) -> Result<RealField> {
    if !grid.spans(0.0, cfg.circumference()) {
        return Err(domain(format!(
            "grid must span the arc length [0, {}]",
            cfg.circumference()
        )));
    }
    let k = cfg.mode.value() / cfg.radius;
    let last = grid.len() - 1;
    // sin(n·2π) = sin(π·2n) vanishes for every admissible n, so both ends are exact nodes.
    let values = (0..grid.len())
        .map(|i| if i == 0 || i == last { 0.0 } else { (k * grid.coord(i)).sin() })
        .collect();
    RealField::new(grid, values)
}

/// Time `m·length/p` to cover `length` at momentum `p`.
pub fn traversal_time(length: f64, momentum: f64, units: UnitSystem) -> Result<f64> {
    require_positive("momentum p", momentum)?;
    if !(length.is_finite() && length >= 0.0) {
        return Err(domain(format!("length must be non-negative and finite, got {length}")));
    }
    Ok(units.mass() * length / momentum)
}
