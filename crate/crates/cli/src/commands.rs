//! Subcommand registry and dispatch onto the library.

use std::f64::consts::TAU;

use quanton::confined_states::{cutoff_momentum, kinematics, tube_mode_field, circle_mode_field, traversal_time};
use quanton::interferometer::{fringe_scan, intensity, path_phase_difference, ScanParameter, ScanRange, TwoPathConfig};
use quanton::parallel_transport::{action_rate_check, qp_transport_residual, simon_residual, QSource, WaveSeries};
use quanton::phase_laws::{circle_action, exact_tube_action, heisenberg_bound, levy_leblond_action, LAG_CONVENTION};
use quanton::propagator::{extract_phase_shift, mean_position, split_step_evolve_sampled, wrap_phase, Potential, Wavepacket};
use quanton::quantum_potential::{q_circle_analytic, q_field_numeric, q_tube_analytic, q_uniformity_check};
use quanton::{CircleConfig, Complex64, ComplexField, Grid1D, Grid2D, HalfInteger, TubeConfig, UnitSystem};

use crate::error::{invalid, CliError, CliResult};
use crate::output::{Field, Record};
use crate::params::{Kind, ParamSpec, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    TubePhase,
    CirclePhase,
    QField,
    TransportCheck,
    Propagate,
    Interfere,
    Sweep,
}

const SQRT_HALF: &str = "0.7071067811865476";

const TUBE_PHASE: &[ParamSpec] = &[
    ParamSpec::new("p", Kind::Positive, None, "incident momentum"),
    ParamSpec::new("a", Kind::Positive, Some("1"), "tube side"),
    ParamSpec::new("L", Kind::NonNegative, Some("1"), "tube length"),
    ParamSpec::new("nx", Kind::Count { min: 1 }, Some("1"), "transverse mode index along x"),
    ParamSpec::new("ny", Kind::Count { min: 1 }, Some("1"), "transverse mode index along y"),
];

const CIRCLE_PHASE: &[ParamSpec] = &[
    ParamSpec::new("rho0", Kind::Positive, None, "circle radius"),
    ParamSpec::new("p", Kind::Positive, None, "momentum along the circle"),
    ParamSpec::new("n", Kind::HalfInteger, Some("0.5"), "angular mode number"),
];

const QFIELD: &[ParamSpec] = &[
    ParamSpec::new("geometry", Kind::Choice(&["tube", "circle"]), Some("tube"), "mode to sample"),
    ParamSpec::new("a", Kind::Positive, Some("1"), "tube side"),
    ParamSpec::new("nx", Kind::Count { min: 1 }, Some("1"), "tube mode index along x"),
    ParamSpec::new("ny", Kind::Count { min: 1 }, Some("1"), "tube mode index along y"),
    ParamSpec::new("rho0", Kind::Positive, Some("1"), "circle radius"),
    ParamSpec::new("n", Kind::HalfInteger, Some("0.5"), "circle mode number"),
    ParamSpec::new("points", Kind::Count { min: 3 }, Some("401"), "grid points per axis"),
    ParamSpec::new("tol", Kind::Positive, Some("1e-2"), "uniformity tolerance"),
    ParamSpec::new("node-epsilon", Kind::Positive, Some("1e-10"), "amplitude below which Q is masked"),
];

const TRANSPORT_CHECK: &[ParamSpec] = &[
    ParamSpec::new("a", Kind::Positive, Some("1"), "tube side"),
    ParamSpec::new("points", Kind::Count { min: 3 }, Some("101"), "grid points per axis"),
    ParamSpec::new("frames", Kind::Count { min: 3 }, Some("64"), "number of time frames"),
    ParamSpec::new("dt", Kind::Positive, Some("1e-4"), "frame spacing"),
    ParamSpec::new(
        "q-source",
        Kind::Choice(&["analytic", "numeric"]),
        Some("analytic"),
        "closed-form Q or Q sampled from the amplitude",
    ),
    ParamSpec::new("node-epsilon", Kind::Positive, Some("1e-10"), "amplitude below which points are masked"),
];

const PROPAGATE: &[ParamSpec] = &[
    ParamSpec::new("x-min", Kind::Real, Some("-40"), "left end of the periodic box"),
    ParamSpec::new("x-max", Kind::Real, Some("40"), "right end of the periodic box"),
    ParamSpec::new("points", Kind::PowerOfTwo, Some("2048"), "grid points"),
    ParamSpec::new("center-x", Kind::Real, Some("-10"), "initial packet center"),
    ParamSpec::new("center-p", Kind::Positive, Some("2"), "packet momentum"),
    ParamSpec::new("sigma-p", Kind::Positive, Some("0.2"), "momentum width"),
    ParamSpec::new("v", Kind::Real, Some("0"), "constant potential"),
    ParamSpec::new("dt", Kind::Positive, Some("1e-3"), "time step"),
    ParamSpec::new("steps", Kind::Count { min: 1 }, Some("1000"), "number of steps"),
];

const INTERFERE: &[ParamSpec] = &[
    ParamSpec::new("rho0", Kind::Positive, Some("1"), "circle radius"),
    ParamSpec::new("p", Kind::Positive, None, "momentum"),
    ParamSpec::new("n", Kind::HalfInteger, Some("0.5"), "circle mode number"),
    ParamSpec::new("a-straight", Kind::NonNegative, Some(SQRT_HALF), "straight-path amplitude"),
    ParamSpec::new("a-circle", Kind::NonNegative, Some(SQRT_HALF), "circle-path amplitude"),
    ParamSpec::new("include-dynamical", Kind::Flag, Some("true"), "add the path-length phase"),
    ParamSpec::new("include-quantum-potential", Kind::Flag, Some("true"), "add the quantum-potential lag"),
];

const SWEEP: &[ParamSpec] = &[
    ParamSpec::new("parameter", Kind::Choice(&["rho0", "p"]), Some("rho0"), "swept quantity"),
    ParamSpec::new("lo", Kind::Positive, None, "first swept value"),
    ParamSpec::new("hi", Kind::Positive, None, "last swept value"),
    ParamSpec::new("count", Kind::Count { min: 2 }, Some("201"), "number of sweep points"),
    ParamSpec::new("rho0", Kind::Positive, Some("1"), "circle radius when not swept"),
    ParamSpec::new("p", Kind::Positive, Some("10"), "momentum when not swept"),
    ParamSpec::new("n", Kind::HalfInteger, Some("0.5"), "circle mode number"),
    ParamSpec::new("a-straight", Kind::NonNegative, Some(SQRT_HALF), "straight-path amplitude"),
    ParamSpec::new("a-circle", Kind::NonNegative, Some(SQRT_HALF), "circle-path amplitude"),
    ParamSpec::new("include-dynamical", Kind::Flag, Some("true"), "add the path-length phase"),
    ParamSpec::new("include-quantum-potential", Kind::Flag, Some("true"), "add the quantum-potential lag"),
];

pub const SWEEP_HEADER: [&str; 4] = ["parameter", "value", "phase_rad", "intensity"];

impl CommandKind {
    pub const ALL: [CommandKind; 7] = [
        CommandKind::TubePhase,
        CommandKind::CirclePhase,
        CommandKind::QField,
        CommandKind::TransportCheck,
        CommandKind::Propagate,
        CommandKind::Interfere,
        CommandKind::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::TubePhase => "tube-phase",
            CommandKind::CirclePhase => "circle-phase",
            CommandKind::QField => "qfield",
            CommandKind::TransportCheck => "transport-check",
            CommandKind::Propagate => "propagate",
            CommandKind::Interfere => "interfere",
            CommandKind::Sweep => "sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn about(self) -> &'static str {
        match self {
            CommandKind::TubePhase => "First-order and exact phase lag of a square tube",
            CommandKind::CirclePhase => "Quantum-potential action for one turn around a circle",
            CommandKind::QField => "Sample a mode, compute Q numerically and test its uniformity",
            CommandKind::TransportCheck => "Residuals of both transport laws on a stationary tube mode",
            CommandKind::Propagate => "Split-step packet run under a constant potential, checked against a free run",
            CommandKind::Interfere => "Phase difference and intensity of the two-path interferometer",
            CommandKind::Sweep => "Fringe scan over radius or momentum",
        }
    }

    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            CommandKind::TubePhase => TUBE_PHASE,
            CommandKind::CirclePhase => CIRCLE_PHASE,
            CommandKind::QField => QFIELD,
            CommandKind::TransportCheck => TRANSPORT_CHECK,
            CommandKind::Propagate => PROPAGATE,
            CommandKind::Interfere => INTERFERE,
            CommandKind::Sweep => SWEEP,
        }
    }

    pub fn is_scan(self) -> bool {
        self == CommandKind::Sweep
    }
}

/// Result of one command: a single record, or a scan table plus a summary.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Record(Record),
    Table { summary: Record, rows: Vec<Record> },
}

pub fn execute(kind: CommandKind, p: &Params, units: UnitSystem) -> CliResult<Output> {
    let out = match kind {
        CommandKind::TubePhase => Output::Record(tube_phase(p, units)?),
        CommandKind::CirclePhase => Output::Record(circle_phase(p, units)?),
        CommandKind::QField => Output::Record(qfield(p, units)?),
        CommandKind::TransportCheck => Output::Record(transport_check(p, units)?),
        CommandKind::Propagate => Output::Record(propagate(p, units)?),
        CommandKind::Interfere => Output::Record(interfere(p, units)?),
        CommandKind::Sweep => sweep(p, units)?,
    };
    match &out {
        Output::Record(r) => ensure_finite(r)?,
        Output::Table { summary, rows } => {
            ensure_finite(summary)?;
            rows.iter().try_for_each(ensure_finite)?;
        }
    }
    Ok(out)
}

fn ensure_finite(record: &Record) -> CliResult<()> {
    for (key, field) in record.fields() {
        let ok = match field {
            Field::Num(v) => v.is_finite(),
            Field::Nums(vs) => vs.iter().all(|v| v.is_finite()),
            Field::Obj(r) => {
                ensure_finite(r)?;
                true
            }
            _ => true,
        };
        if !ok {
            return Err(CliError::NonFinite(key.clone()));
        }
    }
    Ok(())
}

fn count_u32(p: &Params, key: &str) -> CliResult<u32> {
    u32::try_from(p.count(key)).map_err(|_| invalid(key, "too large"))
}

fn count_usize(p: &Params, key: &str) -> CliResult<usize> {
    usize::try_from(p.count(key)).map_err(|_| invalid(key, "too large"))
}

fn tube_phase(p: &Params, units: UnitSystem) -> CliResult<Record> {
    let cfg = TubeConfig::new(p.real("a"), p.real("L"), count_u32(p, "nx")?, count_u32(p, "ny")?, p.real("p"))?;
    let k = kinematics(&cfg, units)?;
    let exact = exact_tube_action(&cfg, units)?;
    let first = levy_leblond_action(&cfg, units)?;
    let momentum = cfg.momentum();
    let reduced = k.reduced_momentum().expect("exact action succeeded, so the mode propagates");
    Ok(Record::new()
        .with("transverse_energy", k.transverse_energy)
        .with("cutoff_momentum", cutoff_momentum(&cfg, units)?)
        .with("reduced_momentum", reduced)
        .with("traversal_time", traversal_time(cfg.length(), momentum, units)?)
        .with("first_order_action", first.action)
        .with("first_order_phase_rad", first.phase_rad)
        .with("exact_action", exact.action)
        .with("exact_phase_rad", exact.phase_rad)
        // (exact − first)/first reduces to (p − p')/(p + p'), defined for L = 0 too.
        .with("relative_gap", (momentum - reduced) / (momentum + reduced))
        .with("convention", LAG_CONVENTION))
}

fn half_integer(p: &Params, key: &str) -> CliResult<HalfInteger> {
    HalfInteger::new(p.real(key)).map_err(|e| invalid(key, e))
}

fn circle_phase(p: &Params, units: UnitSystem) -> CliResult<Record> {
    let cfg = CircleConfig::new(p.real("rho0"), half_integer(p, "n")?, p.real("p"))?;
    let action = circle_action(&cfg, units)?;
    let bound = heisenberg_bound(&cfg, units)?;
    Ok(Record::new()
        .with("q", q_circle_analytic(cfg.radius(), cfg.mode(), units)?)
        .with("traversal_time", traversal_time(cfg.circumference(), cfg.momentum(), units)?)
        .with("action", action.action)
        .with("phase_rad", action.phase_rad)
        .with("heisenberg_action_bound", bound.action_bound)
        .with("saturating_product", bound.saturating_product)
        .with("within_validity", bound.within_validity)
        .with("note", bound.note())
        .with("convention", LAG_CONVENTION))
}

fn qfield(p: &Params, units: UnitSystem) -> CliResult<Record> {
    let points = count_usize(p, "points")?;
    let geometry = p.text("geometry");
    let (amplitude, analytic) = if geometry == "tube" {
        let a = p.real("a");
        let (nx, ny) = (count_u32(p, "nx")?, count_u32(p, "ny")?);
        // Momentum and length do not enter the transverse profile.
        let cfg = TubeConfig::new(a, 0.0, nx, ny, 1.0)?;
        let field = tube_mode_field(&cfg, Grid2D::square(0.0, a, points)?)?;
        (field, q_tube_analytic(a, nx, ny, units)?)
    } else {
        let cfg = CircleConfig::new(p.real("rho0"), half_integer(p, "n")?, 1.0)?;
        let field = circle_mode_field(&cfg, Grid1D::spanning(0.0, cfg.circumference(), points)?)?;
        (field, q_circle_analytic(cfg.radius(), cfg.mode(), units)?)
    };
    let qf = q_field_numeric(&amplitude, units, p.real("node-epsilon"))?;
    let u = q_uniformity_check(&qf, p.real("tol"))?;
    Ok(Record::new()
        .with("geometry", geometry)
        .with("analytic_q", analytic)
        .with("mean_q", u.mean)
        .with("mean_error", u.mean - analytic)
        .with("max_deviation", u.max_deviation)
        .with("uniform", u.uniform)
        .with("valid_points", qf.valid_count())
        .with("total_points", amplitude.len()))
}

fn transport_check(p: &Params, units: UnitSystem) -> CliResult<Record> {
    let a = p.real("a");
    let eps = p.real("node-epsilon");
    let cfg = TubeConfig::new(a, 0.0, 1, 1, 1.0)?;
    let amplitude = tube_mode_field(&cfg, Grid2D::square(0.0, a, count_usize(p, "points")?)?)?;
    let q = q_tube_analytic(a, 1, 1, units)?;
    let base = ComplexField::from_real(&amplitude);
    let hbar = units.hbar();
    let series = WaveSeries::sample(0.0, p.real("dt"), count_usize(p, "frames")?, |t| {
        Ok(base.scale(Complex64::from_polar(1.0, -q * t / hbar)))
    })?;
    let density = base.max_norm_sqr();

    let simon = simon_residual(&series)?;
    let qp = if p.text("q-source") == "numeric" {
        let qf = q_field_numeric(&amplitude, units, eps)?;
        qp_transport_residual(&series, QSource::Field(&qf), units)?
    } else {
        qp_transport_residual(&series, QSource::Constant(q), units)?
    };
    let rate = action_rate_check(&series, q, units, eps)?;
    Ok(Record::new()
        .with("q", q)
        .with("max_density", density)
        .with("simon_max_residual", simon.max_residual)
        .with("simon_relative", simon.max_residual / (q / hbar * density))
        .with("qp_max_residual", qp.max_residual)
        .with("qp_relative", qp.max_residual / density)
        .with("qp_l2_residual", qp.l2_residual)
        .with("action_rate_max_deviation", rate))
}

fn propagate(p: &Params, units: UnitSystem) -> CliResult<Record> {
    let (lo, hi) = (p.real("x-min"), p.real("x-max"));
    if hi <= lo {
        return Err(invalid("x-max", format!("must exceed x-min ({lo}), got {hi}")));
    }
    let grid = Grid1D::periodic(lo, hi, count_usize(p, "points")?)?;
    let packet = Wavepacket::new(p.real("center-x"), p.real("center-p"), p.real("sigma-p"), grid, units)?;
    let psi0 = packet.field(units)?;
    let (v, dt) = (p.real("v"), p.real("dt"));
    let steps = count_usize(p, "steps")?;

    let free = split_step_evolve_sampled(&psi0, Potential::Constant(0.0), dt, steps, steps, units)?;
    let run = split_step_evolve_sampled(&psi0, Potential::Constant(v), dt, steps, steps, units)?;
    let time = steps as f64 * dt;
    let expected_phase = wrap_phase(-v * time / units.hbar());
    let oracle = free.final_frame().scale(Complex64::from_polar(1.0, -v * time / units.hbar()));
    Ok(Record::new()
        .with("time", time)
        .with("initial_norm", run.initial_norm)
        .with("max_norm_drift", run.max_norm_drift)
        .with("mean_position_initial", mean_position(&psi0)?)
        .with("mean_position_final", mean_position(run.final_frame())?)
        .with(
            "mean_position_free_particle",
            packet.center_x() + packet.center_p() * time / units.mass(),
        )
        .with("potential_phase_rad", extract_phase_shift(free.final_frame(), run.final_frame())?)
        .with("expected_potential_phase_rad", expected_phase)
        .with("max_deviation_from_free_run", run.final_frame().max_abs_diff(&oracle)?))
}

fn two_path(p: &Params, radius: f64, momentum: f64) -> CliResult<TwoPathConfig> {
    let (a_s, a_c) = (p.real("a-straight"), p.real("a-circle"));
    let total = a_s * a_s + a_c * a_c;
    if (total - 1.0).abs() > 1e-12 {
        return Err(invalid("a-circle", format!("a-straight^2 + a-circle^2 must be 1, got {total}")));
    }
    let circle = CircleConfig::new(radius, half_integer(p, "n")?, momentum)?;
    let mut cfg = TwoPathConfig::new(circle, a_s, a_c, p.flag("include-dynamical"))?;
    cfg.include_quantum_potential = p.flag("include-quantum-potential");
    Ok(cfg)
}

fn interfere(p: &Params, units: UnitSystem) -> CliResult<Record> {
    let cfg = two_path(p, p.real("rho0"), p.real("p"))?;
    let (lo, hi) = cfg.intensity_bounds();
    let dynamical = if cfg.include_dynamical {
        TAU * cfg.circle.radius() * cfg.circle.momentum() / units.hbar()
    } else {
        0.0
    };
    let lag = if cfg.include_quantum_potential {
        circle_action(&cfg.circle, units)?.phase_rad
    } else {
        0.0
    };
    Ok(Record::new()
        .with("dynamical_phase_rad", dynamical)
        .with("quantum_potential_phase_rad", lag)
        .with("phase_difference_rad", path_phase_difference(&cfg, units)?)
        .with("intensity", intensity(&cfg, units)?)
        .with("intensity_min", lo)
        .with("intensity_max", hi))
}

fn sweep(p: &Params, units: UnitSystem) -> CliResult<Output> {
    let parameter: ScanParameter = p.text("parameter").parse().map_err(|e| invalid("parameter", e))?;
    let (lo, hi) = (p.real("lo"), p.real("hi"));
    if hi <= lo {
        return Err(invalid("hi", format!("must exceed lo ({lo}), got {hi}")));
    }
    let range = ScanRange::new(lo, hi, count_usize(p, "count")?)?;
    let cfg = two_path(p, p.real("rho0"), p.real("p"))?;
    let scan = fringe_scan(&cfg, parameter, range, units)?;
    let rows = scan
        .values
        .iter()
        .zip(&scan.phase_differences)
        .zip(&scan.intensities)
        .map(|((&v, &phase), &i)| {
            Record::new()
                .with("parameter", parameter.name())
                .with("value", v)
                .with("phase_rad", phase)
                .with("intensity", i)
        })
        .collect();
    let summary = Record::new()
        .with("parameter", parameter.name())
        .with("count", scan.values.len())
        .with("maxima", scan.maxima);
    Ok(Output::Table { summary, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registries_have_unique_keys_and_valid_defaults() {
        for kind in CommandKind::ALL {
            let specs = kind.params();
            for (i, s) in specs.iter().enumerate() {
                assert!(specs[i + 1..].iter().all(|t| t.key != s.key), "{} repeats {}", kind.name(), s.key);
                if let Some(d) = s.default {
                    crate::params::parse_text(s, d).unwrap();
                }
            }
            assert_eq!(CommandKind::from_name(kind.name()), Some(kind));
        }
    }

    #[test]
    fn default_amplitudes_are_balanced() {
        let a: f64 = SQRT_HALF.parse().unwrap();
        assert!((2.0 * a * a - 1.0).abs() <= 1e-12);
    }
}
