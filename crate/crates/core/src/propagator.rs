//! Split-step spectral propagation on a periodic 1D grid, and a pure-phase
//! model of a wavepacket crossing the tube.
//!
//! One Strang step is
//! `exp(-iV·dt/2ħ) · F⁻¹ exp(-iħk²·dt/2m) F · exp(-iV·dt/2ħ)`.
//! Both factors are diagonal for a constant potential and a grid-commensurate
//! plane wave, so such runs are exact up to rounding.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::confined_states::{cutoff_momentum, kinematics, transverse_energy, TubeConfig};
use crate::error::{domain, require_positive, Error, Result};
use crate::field::{ComplexField, RealField};
use crate::grid::Grid1D;
use crate::parallel_transport::WaveSeries;
use crate::units::UnitSystem;

/// Largest phase `|dt|·max|V|/ħ` a single step may apply.
pub const MAX_POTENTIAL_PHASE_PER_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub enum Potential<'a> {
    Constant(f64),
    Sampled(&'a RealField),
}

impl Potential<'_> {
    fn max_abs(&self) -> f64 {
        match self {
            Potential::Constant(v) => v.abs(),
            Potential::Sampled(f) => f.max_abs(),
        }
    }
}

/// Saved frames of a split-step run.
#[derive(Debug, Clone)]
pub struct PropagationRun {
    pub times: Vec<f64>,
    pub frames: Vec<ComplexField>,
    pub dt: f64,
    pub steps: usize,
    pub initial_norm: f64,
    /// Largest `| ‖ψ(t)‖² − ‖ψ(0)‖² |` over all steps, relative to `‖ψ(0)‖²`.
    pub max_norm_drift: f64,
}

impl PropagationRun {
    pub fn final_frame(&self) -> &ComplexField {
        self.frames.last().expect("a run always holds its initial frame")
    }

    pub fn series(&self) -> Result<WaveSeries> {
        WaveSeries::new(self.times.clone(), self.frames.clone())
    }
}

/// FFT plans and the kinetic factor for one grid and time step.
struct SpectralStepper {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kinetic: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

/// Angular wavenumbers of the FFT bins, in FFT order.
fn wavenumbers(grid: &Grid1D) -> Vec<f64> {
    let n = grid.len();
    let dk = TAU / (n as f64 * grid.spacing());
    (0..n)
        .map(|j| if j < n / 2 { j as f64 * dk } else { (j as f64 - n as f64) * dk })
        .collect()
}

fn require_power_of_two(grid: &Grid1D) -> Result<()> {
    if grid.len().is_power_of_two() {
        Ok(())
    } else {
        Err(domain(format!("spectral grid needs a power-of-two point count, got {}", grid.len())))
    }
}

impl SpectralStepper {
    fn new(grid: &Grid1D, dt: f64, units: UnitSystem) -> Self {
        let n = grid.len();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scale = 1.0 / n as f64;
        let c = units.hbar() * dt / (2.0 * units.mass());
        let kinetic = wavenumbers(grid)
            .into_iter()
            .map(|k| Complex64::from_polar(scale, -c * k * k))
            .collect();
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Self {
            forward,
            inverse,
            kinetic,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    /// Applies the kinetic propagator (including the 1/N normalization) in place.
    fn kinetic_step(&mut self, psi: &mut [Complex64]) {
        self.forward.process_with_scratch(psi, &mut self.scratch);
        psi.iter_mut().zip(&self.kinetic).for_each(|(v, k)| *v *= k);
        self.inverse.process_with_scratch(psi, &mut self.scratch);
    }
}

pub fn split_step_evolve(
    psi0: &ComplexField,
    potential: Potential<'_>,
    dt: f64,
    steps: usize,
    units: UnitSystem,
) -> Result<PropagationRun> {
    split_step_evolve_sampled(psi0, potential, dt, steps, 1, units)
}

/// Evolves `psi0` by `steps` Strang steps of length `dt`, saving the initial
/// frame, every `save_every`-th frame and the final one.
///
/// Negative `dt` runs backwards in time.
pub fn split_step_evolve_sampled(
    psi0: &ComplexField,
    potential: Potential<'_>,
    dt: f64,
    steps: usize,
    save_every: usize,
    units: UnitSystem,
) -> Result<PropagationRun> {
    let grid = *psi0
        .grid()
        .as_1d()
        .ok_or_else(|| domain("split-step propagation needs a 1D grid"))?;
    require_power_of_two(&grid)?;
    if !(dt.is_finite() && dt != 0.0) {
        return Err(domain(format!("time step must be finite and nonzero, got {dt}")));
    }
    if steps == 0 || save_every == 0 {
        return Err(domain("steps and save_every must be at least 1"));
    }
    if let Potential::Sampled(v) = potential {
        psi0.ensure_same_grid(v)?;
    }
    let ratio = dt.abs() * potential.max_abs() / units.hbar();
    if ratio >= MAX_POTENTIAL_PHASE_PER_STEP {
        return Err(Error::UnstableStep { ratio, limit: MAX_POTENTIAL_PHASE_PER_STEP });
    }

    let half = -0.5 * dt / units.hbar();
    let half_kick: Vec<Complex64> = match potential {
        Potential::Constant(v) => vec![Complex64::from_polar(1.0, half * v)],
        Potential::Sampled(f) => f.values().iter().map(|&v| Complex64::from_polar(1.0, half * v)).collect(),
    };
    let kick = |psi: &mut [Complex64]| {
        if let [c] = half_kick.as_slice() {
            psi.iter_mut().for_each(|v| *v *= c);
        } else {
            psi.iter_mut().zip(&half_kick).for_each(|(v, c)| *v *= c);
        }
    };

    let mut stepper = SpectralStepper::new(&grid, dt, units);
    let mut psi = psi0.values().to_vec();
    let norm = |psi: &[Complex64]| psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.spacing();
    let initial_norm = norm(&psi);
    let mut max_norm_drift = 0.0f64;
    let mut times = vec![0.0];
    let mut frames = vec![psi0.clone()];

    for step in 1..=steps {
        kick(&mut psi);
        stepper.kinetic_step(&mut psi);
        kick(&mut psi);
        max_norm_drift = max_norm_drift.max((norm(&psi) - initial_norm).abs() / initial_norm);
        if step % save_every == 0 || step == steps {
            times.push(step as f64 * dt);
            frames.push(ComplexField::new(grid, psi.clone())?);
        }
    }

    Ok(PropagationRun { times, frames, dt, steps, initial_norm, max_norm_drift })
}

/// Expectation value `⟨x⟩` of a normalizable 1D field.
pub fn mean_position(psi: &ComplexField) -> Result<f64> {
    let grid = psi.grid().as_1d().ok_or_else(|| domain("mean position needs a 1D grid"))?;
    let (num, den) = psi
        .values()
        .iter()
        .zip(grid.coords())
        .fold((0.0, 0.0), |(n, d), (v, x)| (n + x * v.norm_sqr(), d + v.norm_sqr()));
    if den == 0.0 {
        return Err(Error::NullField { node_epsilon: 0.0 });
    }
    Ok(num / den)
}

/// A normalized Gaussian packet on a periodic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavepacket {
    center_x: f64,
    center_p: f64,
    sigma_p: f64,
    grid: Grid1D,
}

impl Wavepacket {
    /// Largest accepted `σ_p / p₀`.
    pub const MAX_RELATIVE_WIDTH: f64 = 0.2;
    /// Minimum grid points per shortest resolved wavelength.
    pub const MIN_POINTS_PER_WAVELENGTH: f64 = 8.0;

    pub fn new(center_x: f64, center_p: f64, sigma_p: f64, grid: Grid1D, units: UnitSystem) -> Result<Self> {
        if !center_x.is_finite() {
            return Err(domain("packet center must be finite"));
        }
        require_positive("packet momentum", center_p)?;
        require_positive("momentum width sigma_p", sigma_p)?;
        require_power_of_two(&grid)?;
        if sigma_p / center_p > Self::MAX_RELATIVE_WIDTH {
            return Err(domain(format!(
                "packet too broad: sigma_p/p = {} exceeds {}",
                sigma_p / center_p,
                Self::MAX_RELATIVE_WIDTH
            )));
        }
        let wavelength = TAU * units.hbar() / (center_p + 4.0 * sigma_p);
        if grid.spacing() * Self::MIN_POINTS_PER_WAVELENGTH > wavelength {
            return Err(domain(format!(
                "grid spacing {} does not resolve wavelength {wavelength} with {} points",
                grid.spacing(),
                Self::MIN_POINTS_PER_WAVELENGTH
            )));
        }
        Ok(Self { center_x, center_p, sigma_p, grid })
    }

    pub fn center_x(&self) -> f64 {
        self.center_x
    }

    pub fn center_p(&self) -> f64 {
        self.center_p
    }

    pub fn sigma_p(&self) -> f64 {
        self.sigma_p
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    /// Position width `σ_x = ħ / (2σ_p)`.
    pub fn sigma_x(&self, units: UnitSystem) -> f64 {
        units.hbar() / (2.0 * self.sigma_p)
    }

    /// `(2πσ_x²)^(-1/4) · exp(-(x−x₀)²/4σ_x² + i·p₀·(x−x₀)/ħ)`.
    ///
    /// The carrier phase is zero at the packet center.
    pub fn field(&self, units: UnitSystem) -> Result<ComplexField> {
        let sx = self.sigma_x(units);
        let norm = (2.0 * PI * sx * sx).powf(-0.25);
        let k0 = self.center_p / units.hbar();
        ComplexField::from_fn_1d(self.grid, |x| {
            let d = x - self.center_x;
            Complex64::from_polar(norm * (-d * d / (4.0 * sx * sx)).exp(), k0 * d)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransmissionModel {
    /// `θ(p) = E_T·m·L / (p·ħ)`.
    FirstOrder,
    /// `θ(p) = (p − p'(p))·L / ħ`.
    Exact,
}

/// Phase lag `θ(p)` of one momentum component crossing the tube.
pub fn component_lag(cfg: &TubeConfig, momentum: f64, model: TransmissionModel, units: UnitSystem) -> Result<f64> {
    let cfg = cfg.with_momentum(momentum)?;
    match model {
        TransmissionModel::FirstOrder => {
            let et = transverse_energy(cfg.nx(), cfg.ny(), cfg.side(), units)?;
            Ok(et * units.mass() * cfg.length() / (momentum * units.hbar()))
        }
        TransmissionModel::Exact => {
            let k = kinematics(&cfg, units)?;
            let p_prime = k.reduced_momentum().ok_or(Error::BelowCutoff {
                momentum,
                cutoff: (2.0 * units.mass() * k.transverse_energy).sqrt(),
            })?;
            let gap = 2.0 * units.mass() * k.transverse_energy / (momentum + p_prime);
            Ok(gap * cfg.length() / units.hbar())
        }
    }
}

/// Multiplies each momentum component `p > cutoff` of the packet by `exp(-iθ(p))`.
///
/// The tube is a pure phase element with unit transmission. Components at or
/// below the cutoff are left untouched; the packet itself must sit at least
/// `4σ_p` above it. A zero-length tube returns the input unchanged.
pub fn tube_transmit_packet(
    packet: &Wavepacket,
    cfg: &TubeConfig,
    units: UnitSystem,
    model: TransmissionModel,
) -> Result<ComplexField> {
    let cutoff = cutoff_momentum(cfg, units)?;
    let lowest = packet.center_p - 4.0 * packet.sigma_p;
    if lowest <= cutoff {
        return Err(Error::EvanescentComponents { lowest, cutoff });
    }
    let input = packet.field(units)?;
    if cfg.length() == 0.0 {
        return Ok(input);
    }
    let grid = packet.grid;
    let n = grid.len();
    let mut planner = FftPlanner::new();
    let mut spectrum = input.into_values();
    planner.plan_fft_forward(n).process(&mut spectrum);
    let hbar = units.hbar();
    for (c, k) in spectrum.iter_mut().zip(wavenumbers(&grid)) {
        let p = hbar * k;
        if p > cutoff {
            let theta = component_lag(cfg, p, model, units)?;
            *c *= Complex64::from_polar(1.0 / n as f64, -theta);
        } else {
            *c /= n as f64;
        }
    }
    planner.plan_fft_inverse(n).process(&mut spectrum);
    ComplexField::new(grid, spectrum)
}

/// Modulus of every FFT bin of a 1D field, in FFT order.
pub fn momentum_spectrum(psi: &ComplexField) -> Result<Vec<f64>> {
    let grid = psi.grid().as_1d().ok_or_else(|| domain("spectrum needs a 1D grid"))?;
    let mut values = psi.values().to_vec();
    FftPlanner::new().plan_fft_forward(grid.len()).process(&mut values);
    Ok(values.iter().map(|v| v.norm()).collect())
}

/// Smallest accepted normalized overlap in [`extract_phase_shift`].
pub const MIN_OVERLAP: f64 = 1e-6;

/// `arg⟨reference|shifted⟩` in `(−π, π]`.
pub fn extract_phase_shift(reference: &ComplexField, shifted: &ComplexField) -> Result<f64> {
    reference.ensure_same_grid(shifted)?;
    let overlap: Complex64 = reference
        .values()
        .iter()
        .zip(shifted.values())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let scale = (reference.values().iter().map(|v| v.norm_sqr()).sum::<f64>()
        * shifted.values().iter().map(|v| v.norm_sqr()).sum::<f64>())
    .sqrt();
    let normalized = if scale > 0.0 { overlap.norm() / scale } else { 0.0 };
    if !(normalized > MIN_OVERLAP) {
        return Err(Error::FieldsOrthogonal { overlap: normalized });
    }
    let phase = overlap.arg();
    Ok(if phase <= -PI { PI } else { phase })
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let wrapped = phase - TAU * (phase / TAU).round();
    if wrapped <= -PI {
        wrapped + TAU
    } else {
        wrapped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: UnitSystem = UnitSystem::natural();

    fn periodic(n: usize, length: f64) -> Grid1D {
        Grid1D::periodic(-length / 2.0, length / 2.0, n).unwrap()
    }

    #[test]
    fn free_plane_wave_picks_up_exact_phase() {
        let g = periodic(256, 20.0);
        let k = TAU / 20.0 * 5.0;
        let psi0 = ComplexField::from_fn_1d(g, |x| Complex64::from_polar(1.0, k * x)).unwrap();
        let run = split_step_evolve(&psi0, Potential::Constant(0.0), 0.1, 10, U).unwrap();
        let expect = psi0.scale(Complex64::from_polar(1.0, -k * k * 1.0 / 2.0));
        assert!(run.final_frame().max_abs_diff(&expect).unwrap() < 1e-12);
        assert_eq!(run.frames.len(), 11);
        assert!((run.times[10] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_potential_factors_out() {
        let g = periodic(512, 40.0);
        let packet = Wavepacket::new(0.0, 2.0, 0.3, g, U).unwrap();
        let psi0 = packet.field(U).unwrap();
        let free = split_step_evolve_sampled(&psi0, Potential::Constant(0.0), 1e-2, 100, 100, U).unwrap();
        let q = PI * PI;
        let pot = split_step_evolve_sampled(&psi0, Potential::Constant(q), 1e-2, 100, 100, U).unwrap();
        let expect = free.final_frame().scale(Complex64::from_polar(1.0, -q));
        assert!(pot.final_frame().max_abs_diff(&expect).unwrap() < 1e-12);
        let shift = extract_phase_shift(free.final_frame(), pot.final_frame()).unwrap();
        assert!((shift - wrap_phase(-q)).abs() < 1e-12);
        // −π² ≡ −3.5864 (mod 2π)
        assert!(wrap_phase(shift + 3.5864).abs() < 1e-4, "{shift}");
    }

    #[test]
    fn packet_moves_at_group_velocity() {
        let g = periodic(2048, 200.0);
        let packet = Wavepacket::new(-20.0, 3.0, 0.25, g, U).unwrap();
        let psi0 = packet.field(U).unwrap();
        assert!((psi0.norm_sqr() - 1.0).abs() < 1e-12);
        let run = split_step_evolve_sampled(&psi0, Potential::Constant(0.0), 1e-3, 100, 100, U).unwrap();
        let moved = mean_position(run.final_frame()).unwrap() - mean_position(&psi0).unwrap();
        assert!((moved - 3.0 * 0.1).abs() < 1e-6, "{moved}");
        assert!(run.max_norm_drift < 1e-12);
    }

    #[test]
    fn backward_run_recovers_initial_state() {
        let g = periodic(256, 40.0);
        let v = RealField::from_fn_1d(g, |x| 0.5 * (0.3 * x).cos()).unwrap();
        let psi0 = Wavepacket::new(0.0, 1.0, 0.2, g, U).unwrap().field(U).unwrap();
        let fwd = split_step_evolve_sampled(&psi0, Potential::Sampled(&v), 1e-2, 200, 200, U).unwrap();
        let back = split_step_evolve_sampled(fwd.final_frame(), Potential::Sampled(&v), -1e-2, 200, 200, U).unwrap();
        assert!(back.final_frame().max_abs_diff(&psi0).unwrap() < 1e-8);
    }

    #[test]
    fn rejects_bad_setups() {
        let g = Grid1D::periodic(0.0, 10.0, 100).unwrap();
        let psi = ComplexField::from_fn_1d(g, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(split_step_evolve(&psi, Potential::Constant(0.0), 0.1, 1, U), Err(Error::Domain(_))));
        let g = periodic(64, 10.0);
        let psi = ComplexField::from_fn_1d(g, |_| Complex64::new(1.0, 0.0)).unwrap();
        let err = split_step_evolve(&psi, Potential::Constant(10.0), 0.1, 1, U).unwrap_err();
        assert!(matches!(err, Error::UnstableStep { .. }));
        assert!(split_step_evolve(&psi, Potential::Constant(0.0), 0.0, 1, U).is_err());
        assert!(Wavepacket::new(0.0, 1.0, 0.5, g, U).is_err());
        assert!(Wavepacket::new(0.0, 100.0, 1.0, g, U).is_err());
    }

    #[test]
    fn phase_extraction_cases() {
        let g = periodic(64, 10.0);
        let f = Wavepacket::new(0.0, 1.0, 0.2, g, U).unwrap().field(U).unwrap();
        let shifted = f.scale(Complex64::from_polar(1.0, 0.3));
        assert!((extract_phase_shift(&f, &shifted).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(extract_phase_shift(&f, &f).unwrap(), 0.0);
        let flipped = f.scale(Complex64::new(-1.0, 0.0));
        assert!((extract_phase_shift(&f, &flipped).unwrap() - PI).abs() < 1e-12);
        let zero = f.scale(Complex64::new(0.0, 0.0));
        assert!(matches!(extract_phase_shift(&f, &zero), Err(Error::FieldsOrthogonal { .. })));
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(-9.874466) - (-9.874466 + 2.0 * TAU)).abs() < 1e-12);
    }
}
