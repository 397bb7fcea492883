//! Convergence orders against closed-form references.

use std::f64::consts::PI;

use quanton::parallel_transport::{action_rate_check, qp_transport_residual, QSource, WaveSeries};
use quanton::propagator::{split_step_evolve_sampled, Potential, Wavepacket};
use quanton::quantum_potential::q_field_numeric;
use quanton::{Complex64, ComplexField, Grid1D, RealField, UnitSystem, DEFAULT_NODE_EPSILON};

const U: UnitSystem = UnitSystem::natural();

fn ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

#[test]
fn q_of_sine_is_second_order() {
    let errors: Vec<f64> = [26, 51, 101, 201]
        .iter()
        .map(|&n| {
            let g = Grid1D::spanning(0.0, 1.0, n).unwrap();
            let r = RealField::from_fn_1d(g, |x| (PI * x).sin()).unwrap();
            let q = q_field_numeric(&r, U, DEFAULT_NODE_EPSILON).unwrap();
            q.valid_values().fold(0.0, |m: f64, v| m.max((v - PI * PI / 2.0).abs()))
        })
        .collect();
    for r in ratios(&errors) {
        assert!((3.5..=4.5).contains(&r), "{errors:?}");
    }
}

#[test]
fn transport_residual_is_second_order_in_dt() {
    let grid = Grid1D::spanning(0.0, 1.0, 51).unwrap();
    let q = 3.0;
    let residual = |dt: f64| {
        let s = WaveSeries::sample(0.0, dt, 8, |t| {
            ComplexField::from_fn_1d(grid, |x| Complex64::from_polar(1.0 + x * (1.0 - x), -q * t))
        })
        .unwrap();
        qp_transport_residual(&s, QSource::Constant(q), U).unwrap().max_residual
    };
    let errors: Vec<f64> = [1e-2, 5e-3, 2.5e-3, 1.25e-3].iter().map(|&dt| residual(dt)).collect();
    for r in ratios(&errors) {
        assert!((3.5..=4.5).contains(&r), "{errors:?}");
    }
}

#[test]
fn both_formulations_vanish_together() {
    let grid = Grid1D::spanning(0.0, 1.0, 51).unwrap();
    let q = 2.0;
    for (rate, expect_zero) in [(q, true), (1.3 * q, false)] {
        let s = WaveSeries::sample(0.0, 1e-4, 8, |t| {
            ComplexField::from_fn_1d(grid, |x| Complex64::from_polar(1.0 + x, -rate * t))
        })
        .unwrap();
        let l2 = qp_transport_residual(&s, QSource::Constant(q), U).unwrap().l2_residual;
        let dev = action_rate_check(&s, q, U, DEFAULT_NODE_EPSILON).unwrap();
        assert_eq!(l2 < 1e-6, expect_zero, "l2 {l2}");
        assert_eq!(dev < 1e-6, expect_zero, "dev {dev}");
    }
}

#[test]
fn split_step_is_second_order_in_dt() {
    let grid = Grid1D::periodic(-20.0, 20.0, 512).unwrap();
    let psi0 = Wavepacket::new(-2.0, 1.5, 0.3, grid, U).unwrap().field(U).unwrap();
    let v = RealField::from_fn_1d(grid, |x| 2.0 * (-x * x / 4.0).exp()).unwrap();
    let run = |steps: usize| {
        let dt = 1.0 / steps as f64;
        split_step_evolve_sampled(&psi0, Potential::Sampled(&v), dt, steps, steps, U)
            .unwrap()
            .final_frame()
            .clone()
    };
    let reference = run(4096);
    let errors: Vec<f64> = [32, 64, 128, 256].iter().map(|&n| run(n).max_abs_diff(&reference).unwrap()).collect();
    for r in ratios(&errors) {
        assert!((3.5..=4.5).contains(&r), "{errors:?}");
    }
}
