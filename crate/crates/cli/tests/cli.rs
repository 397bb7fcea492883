use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_quanton");

fn quanton(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("QUANTON_OUT").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v["result"][key].as_f64().unwrap_or_else(|| panic!("missing {key}"))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn tube_phase_record() {
    let v = json(&quanton(&["tube-phase", "--p", "100", "--a", "1", "--L", "100", "--nx", "1", "--ny", "1"]));
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((num(&v, "first_order_action") - pi2).abs() < 1e-12);
    let oracle = (100.0 - (1e4 - 2.0 * pi2).sqrt()) * 100.0;
    assert!((num(&v, "exact_action") - oracle).abs() < 1e-10);
    assert!((num(&v, "relative_gap") - (oracle - pi2) / pi2).abs() < 1e-12);
    assert_eq!(v["config"]["parameters"]["L"].as_f64(), Some(100.0));
    assert_eq!(v["config"]["units"]["hbar"].as_f64(), Some(1.0));
}

#[test]
fn circle_phase_record() {
    let v = json(&quanton(&["circle-phase", "--rho0", "1", "--p", "10"]));
    assert!((num(&v, "action") - 0.078_539_816_339_744_83).abs() < 1e-15);
    assert_eq!(num(&v, "q"), 0.125);
    assert!((num(&v, "traversal_time") - 0.628_318_530_717_958_6).abs() < 1e-15);
    assert_eq!(v["result"]["within_validity"], Value::Bool(true));
}

#[test]
fn evanescent_tube_exits_one() {
    let out = quanton(&["tube-phase", "--p", "1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("below cutoff"));
    assert!(out.stdout.is_empty());
}

#[test]
fn validation_errors_exit_two_and_name_the_key() {
    let cases: &[(&[&str], &str)] = &[
        (&["tube-phase", "--p", "100", "--a", "-1"], "'a'"),
        (&["tube-phase", "--p", "abc"], "'p'"),
        (&["tube-phase"], "'p'"),
        (&["circle-phase", "--rho0", "1", "--p", "1", "--n", "0.3"], "'n'"),
        (&["propagate", "--points", "1000"], "'points'"),
        (&["propagate", "--x-min", "5", "--x-max", "1"], "'x-max'"),
        (&["interfere", "--p", "1", "--a-circle", "0.5"], "'a-circle'"),
        (&["sweep", "--lo", "2", "--hi", "1"], "'hi'"),
        (&["tube-phase", "--p", "100", "--format", "xml"], "'format'"),
        (&["tube-phase", "--p", "100", "--hbar", "0"], "'hbar'"),
        (&["run"], "'config'"),
    ];
    for (args, key) in cases {
        let out = quanton(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(stderr(&out).contains(key), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(quanton(&["tube-phase", "--p", "100", "--typo", "1"]).status.code(), Some(2));
    assert_eq!(quanton(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn help_and_version_exit_zero() {
    let out = quanton(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("tube-phase"));
    let out = quanton(&["tube-phase", "--help"]);
    assert!(!String::from_utf8_lossy(&out.stdout).contains("--center-p"));
    assert!(out.status.success());
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn config_file_strictness_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{"command": "tube-phase", "parameters": {"p": 200, "L": 50}, "units": {"mass": 2}}"#,
    );
    let v = json(&quanton(&["run", "--config", &good]));
    assert_eq!(v["config"]["parameters"]["p"].as_f64(), Some(200.0));
    assert_eq!(v["config"]["units"]["mass"].as_f64(), Some(2.0));

    let v = json(&quanton(&["tube-phase", "--config", &good, "--p", "300"]));
    assert_eq!(v["config"]["parameters"]["p"].as_f64(), Some(300.0));
    assert_eq!(v["config"]["parameters"]["L"].as_f64(), Some(50.0));

    let typo = write(dir.path(), "typo.json", r#"{"command": "tube-phase", "parameters": {"p": 1, "lenght": 3}}"#);
    let out = quanton(&["run", "--config", &typo]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("'lenght'"));

    let bad = write(dir.path(), "bad.json", "{\"command\": ");
    let out = quanton(&["run", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed"));

    let wrong_type = write(dir.path(), "wt.json", r#"{"command": "tube-phase", "parameters": {"p": "100"}}"#);
    assert_eq!(quanton(&["run", "--config", &wrong_type]).status.code(), Some(2));

    let missing = dir.path().join("absent.json");
    assert_eq!(quanton(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(2));

    let other = write(dir.path(), "other.json", r#"{"command": "sweep"}"#);
    assert_eq!(quanton(&["tube-phase", "--p", "100", "--config", &other]).status.code(), Some(2));
}

#[test]
fn embedded_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = quanton(&["interfere", "--p", "7.3", "--rho0", "0.4", "--include-dynamical", "false", "--hbar", "0.5"]);
    let v = json(&first);
    let cfg = write(dir.path(), "replay.json", &v["config"].to_string());
    let second = quanton(&["run", "--config", &cfg]);
    assert!(second.status.success(), "{}", stderr(&second));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_files_and_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested").join("tube.json");
    let out = quanton(&["tube-phase", "--p", "100", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.ends_with("}\n"));

    let out = Command::new(BIN)
        .args(["sweep", "--lo", "1", "--hi", "2", "--count", "3", "--out", "scan.csv"])
        .env("QUANTON_OUT", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    let lines: Vec<&str> = csv.split('\n').collect();
    assert_eq!(lines[0], "parameter,value,phase_rad,intensity");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[4], "");
    assert!(lines[1].starts_with("rho0,1.0000000000000000e0,"));
    assert!(!csv.contains('\r'));
}

#[test]
fn sweep_json_lists_maxima() {
    let v = json(&quanton(&["sweep", "--lo", "0.9", "--hi", "1.1", "--count", "11", "--format", "json"]));
    let maxima = v["result"]["maxima"].as_array().unwrap();
    assert_eq!(maxima.len(), 2);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 11);
}

#[test]
fn remaining_commands_run() {
    let v = json(&quanton(&["qfield", "--points", "101"]));
    assert_eq!(v["result"]["uniform"], Value::Bool(true));
    let v = json(&quanton(&["qfield", "--geometry", "circle", "--points", "513"]));
    assert!((num(&v, "mean_q") - 0.125).abs() < 1e-4);
    let v = json(&quanton(&["transport-check", "--points", "21", "--frames", "8", "--q-source", "numeric"]));
    assert!((num(&v, "simon_relative") - 1.0).abs() < 1e-2);
    let v = json(&quanton(&["propagate", "--points", "512", "--steps", "200", "--v", "3"]));
    assert!(num(&v, "max_deviation_from_free_run") < 1e-10);
    let wrapped = (-3.0f64 * 0.2 + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
    assert!((num(&v, "potential_phase_rad") - wrapped).abs() < 1e-9);
    let out = quanton(&["circle-phase", "--rho0", "1", "--p", "10", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\nq,1.2500000000000000e-1\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn number_format_round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let text = quanton_cli::output::format_number(v);
        prop_assert_eq!(text.parse::<f64>().unwrap(), v);
    }

    #[test]
    fn config_echo_matches_flags(p in 5.0f64..1e3, l in 0.0f64..1e3) {
        let (p, l) = (p.to_string(), l.to_string());
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = quanton_cli::main_with(["quanton", "tube-phase", "--p", &p, "--L", &l], None, &mut out, &mut err);
        prop_assert_eq!(code, 0);
        let v: Value = serde_json::from_slice(&out).unwrap();
        prop_assert_eq!(v["config"]["parameters"]["p"].as_f64().unwrap(), p.parse::<f64>().unwrap());
        prop_assert_eq!(v["config"]["parameters"]["L"].as_f64().unwrap(), l.parse::<f64>().unwrap());
    }
}
