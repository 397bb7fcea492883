//! Geometric phases sourced by the Bohmian quantum potential of confined quantons.
//!
//! A quanton squeezed into a square tube, or bound to a circle, carries a
//! constant quantum potential `Q = -(ħ²/2m)·ΔR/R`. Its wavefunction obeys the
//! transport law `Im⟨ψ|ψ̇⟩ = -(1/ħ)·Q·|ψ|²`, and after spending a time `Δt`
//! in the constraint it has picked up the phase factor `exp(-i·Q·Δt/ħ)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`units`], [`grid`], [`field`], [`polar`]: unit conventions, uniform grids,
//!   sampled fields and the polar decomposition `ψ = R·exp(iS/ħ)`.
//! * [`confined_states`]: tube and circle eigenmodes and the mode-matching kinematics.
//! * [`quantum_potential`]: closed-form and finite-difference `Q`.
//! * [`parallel_transport`]: residuals of the two transport laws on time series.
//! * [`phase_laws`]: tube, exact mode-matching and circle actions.
//! * [`propagator`]: a split-step spectral propagator and a wavepacket tube model.
//! * [`interferometer`]: the straight-line plus tangent-circle two-path experiment.
//!
//! Data-parallel loops (Q fields, residual frames, fringe sweeps) run on rayon
//! when the `parallel` feature is enabled (the default) and fall back to plain
//! iterators otherwise; see [`exec::Execution`].

// Range checks are written `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod confined_states;
pub mod error;
pub mod exec;
pub mod field;
pub mod grid;
pub mod interferometer;
pub mod parallel_transport;
pub mod phase_laws;
pub mod polar;
pub mod propagator;
pub mod quantum_potential;
pub mod units;

pub use confined_states::{CircleConfig, HalfInteger, Kinematics, Longitudinal, TubeConfig};
pub use error::{Error, Result};
pub use exec::Execution;
pub use field::{ComplexField, RealField, SampledField};
pub use grid::{Grid, Grid1D, Grid2D};
pub use polar::{polar_decompose, recompose, PolarPair, DEFAULT_NODE_EPSILON};
pub use units::UnitSystem;

pub use num_complex::Complex64;
