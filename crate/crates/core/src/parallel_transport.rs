//! Transport laws as residuals on wavefunction time series.
//!
//! Two laws are checked pointwise, in density form:
//!
//! * Simon (Berry) transport: `Im(ψ*·ψ̇) = 0`.
//! * Quantum-potential transport: `Im(ψ*·ψ̇) = -(1/ħ)·Q·|ψ|²`.
//!
//! Each report also carries the grid integral of the residual per frame,
//! which is the inner-product reading `Im⟨ψ|ψ̇⟩` of the same law. The
//! polar-form consequence of the second law, `∂S/∂t = -Q`, is checked by
//! [`action_rate_check`].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::field::{ComplexField, RealField};
use crate::grid::Grid;
use crate::polar::{polar_decompose, DEFAULT_NODE_EPSILON};
use crate::quantum_potential::{stencil_mask, QField};
use crate::units::UnitSystem;

/// Relative spread of time steps accepted as uniform.
const UNIFORM_DT_TOLERANCE: f64 = 1e-9;

/// Frames `ψ(t_k)` sharing one grid, at strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSeries {
    times: Vec<f64>,
    frames: Vec<ComplexField>,
}

impl WaveSeries {
    pub fn new(times: Vec<f64>, frames: Vec<ComplexField>) -> Result<Self> {
        if frames.len() < 3 {
            return Err(domain(format!("a wave series needs at least 3 frames, got {}", frames.len())));
        }
        if times.len() != frames.len() {
            return Err(domain(format!("{} times for {} frames", times.len(), frames.len())));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("frame times must be finite and strictly increasing"));
        }
        for frame in &frames[1..] {
            frames[0].ensure_same_grid(frame)?;
        }
        Ok(Self { times, frames })
    }

    /// Samples `f(t)` at `t_k = t0 + k·dt` for `k = 0..count`.
    pub fn sample(t0: f64, dt: f64, count: usize, f: impl Fn(f64) -> Result<ComplexField>) -> Result<Self> {
        let times: Vec<f64> = (0..count).map(|k| t0 + k as f64 * dt).collect();
        let frames = times.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(times, frames)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn frames(&self) -> &[ComplexField] {
        &self.frames
    }

    pub fn grid(&self) -> &Grid {
        self.frames[0].grid()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// The common time step, or a domain error if the steps are not uniform.
    pub fn dt(&self) -> Result<f64> {
        let dt = (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64;
        for (k, w) in self.times.windows(2).enumerate() {
            if ((w[1] - w[0]) - dt).abs() > UNIFORM_DT_TOLERANCE * dt.abs().max(w[1].abs()) {
                return Err(domain(format!("non-uniform time step at frame {k}")));
            }
        }
        Ok(dt)
    }

    /// Scales every frame by a real constant.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            times: self.times.clone(),
            frames: self.frames.iter().map(|f| f.scale(Complex64::new(c, 0.0))).collect(),
        }
    }
}

/// Central difference `(ψ_{k+1} − ψ_{k−1}) / 2dt` at the interior frames.
///
/// The result keeps the interior times; it may hold fewer than three frames.
pub fn time_derivative(series: &WaveSeries) -> Result<WaveSeries> {
    let dt = series.dt()?;
    let inv = 1.0 / (2.0 * dt);
    let frames = series
        .frames
        .windows(3)
        .map(|w| {
            let values = w[0]
                .values()
                .iter()
                .zip(w[2].values())
                .map(|(a, b)| (b - a) * inv)
                .collect();
            ComplexField::from_parts_unchecked(*w[0].grid(), values)
        })
        .collect();
    Ok(WaveSeries {
        times: series.times[1..series.times.len() - 1].to_vec(),
        frames,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportLaw {
    /// `Im⟨ψ|ψ̇⟩ = 0`.
    Simon,
    /// `Im⟨ψ|ψ̇⟩ = -(1/ħ)·Q·|ψ|²`.
    QuantumPotential,
}

/// Residual of a transport law at each interior frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportReport {
    pub law: TransportLaw,
    /// Times of the interior frames.
    pub times: Vec<f64>,
    /// Pointwise residual per interior frame; masked points hold `0.0`.
    pub residuals: Vec<RealField>,
    /// Points that enter the aggregates.
    pub valid: Vec<bool>,
    /// Largest `|r|` over valid points and frames.
    pub max_residual: f64,
    /// `sqrt(mean over frames of ∫ r²)` over valid points.
    pub l2_residual: f64,
    /// `∫ r` per frame, the inner-product form of the law.
    pub integrated: Vec<f64>,
}

/// Quantum potential for [`qp_transport_residual`].
#[derive(Debug, Clone, Copy)]
pub enum QSource<'a> {
    Constant(f64),
    Field(&'a QField),
}

pub fn simon_residual(series: &WaveSeries) -> Result<TransportReport> {
    simon_residual_with(series, Execution::default())
}

pub fn simon_residual_with(series: &WaveSeries, exec: Execution) -> Result<TransportReport> {
    let valid = vec![true; series.grid().len()];
    residual_report(series, TransportLaw::Simon, valid, |_| 0.0, exec)
}

pub fn qp_transport_residual(series: &WaveSeries, q: QSource<'_>, units: UnitSystem) -> Result<TransportReport> {
    qp_transport_residual_with(series, q, units, Execution::default())
}

/// `r = Im(ψ*·ψ̇) + (1/ħ)·Q·|ψ|²`.
///
/// With a sampled Q the residual is evaluated where Q is valid. The support of
/// `ψ` is the set of points where a stencil on `|ψ|` would be usable in every
/// frame (the same rule that masks Q); Q must be valid on all of it.
pub fn qp_transport_residual_with(
    series: &WaveSeries,
    q: QSource<'_>,
    units: UnitSystem,
    exec: Execution,
) -> Result<TransportReport> {
    let inv_hbar = 1.0 / units.hbar();
    match q {
        QSource::Constant(q) => {
            if !q.is_finite() {
                return Err(domain("Q must be finite"));
            }
            let valid = vec![true; series.grid().len()];
            residual_report(series, TransportLaw::QuantumPotential, valid, |_| q * inv_hbar, exec)
        }
        QSource::Field(qf) => {
            if qf.grid() != series.grid() {
                return Err(Error::GridMismatch("Q field and series use different grids".into()));
            }
            let grid = *series.grid();
            let mut support = vec![true; grid.len()];
            for frame in series.frames() {
                let v = frame.values();
                let mask = stencil_mask(&grid, |i| v[i].norm(), DEFAULT_NODE_EPSILON);
                support.iter_mut().zip(mask).for_each(|(s, m)| *s &= m);
            }
            if let Some(index) = (0..grid.len()).find(|&i| support[i] && !qf.valid_mask()[i]) {
                return Err(Error::QUndefinedOnSupport { index });
            }
            let values = qf.values();
            residual_report(
                series,
                TransportLaw::QuantumPotential,
                qf.valid_mask().to_vec(),
                |i| values[i] * inv_hbar,
                exec,
            )
        }
    }
}

/// Shared residual pass: `r_i = Im(ψ*ψ̇)_i + rate(i)·|ψ_i|²`.
fn residual_report(
    series: &WaveSeries,
    law: TransportLaw,
    valid: Vec<bool>,
    rate: impl Fn(usize) -> f64 + Sync + Send,
    exec: Execution,
) -> Result<TransportReport> {
    let derivative = time_derivative(series)?;
    let grid = *series.grid();
    let cell = grid.cell_volume();
    let interior = &series.frames[1..series.frames.len() - 1];

    let per_frame = exec.map(interior.len(), |k| {
        let psi = interior[k].values();
        let dpsi = derivative.frames[k].values();
        let mut r = vec![0.0; psi.len()];
        let (mut max, mut sum_sq, mut sum) = (0.0f64, 0.0, 0.0);
        for i in 0..psi.len() {
            if !valid[i] {
                continue;
            }
            let value = (psi[i].conj() * dpsi[i]).im + rate(i) * psi[i].norm_sqr();
            r[i] = value;
            max = max.max(value.abs());
            sum_sq += value * value;
            sum += value;
        }
        (RealField::from_parts_unchecked(grid, r), max, sum_sq * cell, sum * cell)
    });

    let frames = per_frame.len() as f64;
    let max_residual = per_frame.iter().fold(0.0f64, |m, f| m.max(f.1));
    let l2_residual = (per_frame.iter().map(|f| f.2).sum::<f64>() / frames).sqrt();
    let integrated = per_frame.iter().map(|f| f.3).collect();
    let residuals = per_frame.into_iter().map(|f| f.0).collect();
    Ok(TransportReport {
        law,
        times: derivative.times,
        residuals,
        valid,
        max_residual,
        l2_residual,
        integrated,
    })
}

/// Largest `|∂S/∂t + Q|` over points that are unmasked in consecutive frames.
///
/// `S` comes from [`polar_decompose`] per frame. Per point, each frame-to-frame
/// change of `S` is reduced to the branch nearest zero; a reduced step of
/// `πħ/2` or more means the series cannot resolve the phase rotation and is
/// reported as undersampled.
pub fn action_rate_check(series: &WaveSeries, q: f64, units: UnitSystem, node_epsilon: f64) -> Result<f64> {
    let dt = series.dt()?;
    let hbar = units.hbar();
    let period = TAU * hbar;
    let limit = 0.5 * PI * hbar;
    let pairs = series
        .frames
        .iter()
        .map(|f| polar_decompose(f, units, node_epsilon))
        .collect::<Result<Vec<_>>>()?;

    let n = series.grid().len();
    // steps[k][i] = S_{k+1} − S_k reduced to (−πħ, πħ], None where either frame is masked.
    let mut steps: Vec<Vec<Option<f64>>> = Vec::with_capacity(pairs.len() - 1);
    for (k, w) in pairs.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let mut row = vec![None; n];
        for (i, slot) in row.iter_mut().enumerate() {
            if !(a.is_valid(i) && b.is_valid(i)) {
                continue;
            }
            let raw = b.action().values()[i] - a.action().values()[i];
            let step = raw - period * (raw / period).round();
            if step.abs() >= limit {
                return Err(Error::UndersampledInTime { frame: k + 1, index: i, step });
            }
            *slot = Some(step);
        }
        steps.push(row);
    }

    let mut max_deviation: Option<f64> = None;
    for w in steps.windows(2) {
        for (&a, &b) in w[0].iter().zip(&w[1]) {
            if let (Some(s0), Some(s1)) = (a, b) {
                let rate = (s0 + s1) / (2.0 * dt);
                let dev = (rate + q).abs();
                max_deviation = Some(max_deviation.map_or(dev, |m| m.max(dev)));
            }
        }
    }
    max_deviation.ok_or(Error::NoValidPoints)
}
