//! Typed parameter registry shared by flags and config files.

use serde_json::Value as Json;

use crate::error::{invalid, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// Finite real number.
    Real,
    /// Finite and `> 0`.
    Positive,
    /// Finite and `>= 0`.
    NonNegative,
    /// Integer `>= min`.
    Count { min: u64 },
    /// Integer power of two `>= 8`.
    PowerOfTwo,
    /// Positive multiple of 1/2.
    HalfInteger,
    Flag,
    Choice(&'static [&'static str]),
}

impl Kind {
    pub fn describe(&self) -> String {
        match self {
            Kind::Real => "real number".into(),
            Kind::Positive => "positive real".into(),
            Kind::NonNegative => "non-negative real".into(),
            Kind::Count { min } => format!("integer >= {min}"),
            Kind::PowerOfTwo => "power of two >= 8".into(),
            Kind::HalfInteger => "positive multiple of 1/2".into(),
            Kind::Flag => "true or false".into(),
            Kind::Choice(options) => format!("one of {}", options.join("|")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: Kind,
    /// Default in flag syntax; `None` marks a required parameter.
    pub default: Option<&'static str>,
    pub help: &'static str,
}

impl ParamSpec {
    pub const fn new(key: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> Self {
        Self { key, kind, default, help }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Count(u64),
    Flag(bool),
    Text(String),
}

fn check_real(spec: &ParamSpec, v: f64) -> CliResult<Value> {
    if !v.is_finite() {
        return Err(invalid(spec.key, format!("expected {}, got {v}", spec.kind.describe())));
    }
    let ok = match spec.kind {
        Kind::Positive => v > 0.0,
        Kind::NonNegative => v >= 0.0,
        Kind::HalfInteger => v > 0.0 && (2.0 * v).fract() == 0.0,
        _ => true,
    };
    if ok {
        Ok(Value::Real(v))
    } else {
        Err(invalid(spec.key, format!("expected {}, got {v}", spec.kind.describe())))
    }
}

fn check_count(spec: &ParamSpec, v: u64) -> CliResult<Value> {
    let ok = match spec.kind {
        Kind::Count { min } => v >= min,
        Kind::PowerOfTwo => v >= 8 && v.is_power_of_two(),
        _ => unreachable!("check_count on a non-integer kind"),
    };
    if ok {
        Ok(Value::Count(v))
    } else {
        Err(invalid(spec.key, format!("expected {}, got {v}", spec.kind.describe())))
    }
}

/// Parses a flag or default value.
pub fn parse_text(spec: &ParamSpec, text: &str) -> CliResult<Value> {
    let bad = || invalid(spec.key, format!("expected {}, got '{text}'", spec.kind.describe()));
    match spec.kind {
        Kind::Real | Kind::Positive | Kind::NonNegative | Kind::HalfInteger => {
            check_real(spec, text.trim().parse().map_err(|_| bad())?)
        }
        Kind::Count { .. } | Kind::PowerOfTwo => check_count(spec, text.trim().parse().map_err(|_| bad())?),
        Kind::Flag => match text.trim() {
            "true" => Ok(Value::Flag(true)),
            "false" => Ok(Value::Flag(false)),
            _ => Err(bad()),
        },
        Kind::Choice(options) => options
            .iter()
            .find(|o| **o == text)
            .map(|o| Value::Text((*o).to_string()))
            .ok_or_else(bad),
    }
}

/// Parses a config-file value; numbers must be JSON numbers, flags JSON booleans.
pub fn parse_json(spec: &ParamSpec, value: &Json) -> CliResult<Value> {
    let bad = || invalid(spec.key, format!("expected {}, got {value}", spec.kind.describe()));
    match spec.kind {
        Kind::Real | Kind::Positive | Kind::NonNegative | Kind::HalfInteger => {
            check_real(spec, value.as_f64().ok_or_else(bad)?)
        }
        Kind::Count { .. } | Kind::PowerOfTwo => check_count(spec, value.as_u64().ok_or_else(bad)?),
        Kind::Flag => value.as_bool().map(Value::Flag).ok_or_else(bad),
        Kind::Choice(_) => parse_text(spec, value.as_str().ok_or_else(bad)?),
    }
}

/// Fully resolved parameters, in registry order.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    entries: Vec<(&'static str, Value)>,
}

impl Params {
    pub fn new(entries: Vec<(&'static str, Value)>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[(&'static str, Value)] {
        &self.entries
    }

    fn get(&self, key: &str) -> &Value {
        self.entries
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v)
            .unwrap_or_else(|| panic!("parameter '{key}' is not registered for this command"))
    }

    pub fn real(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Real(v) => *v,
            other => panic!("parameter '{key}' is not real: {other:?}"),
        }
    }

    pub fn count(&self, key: &str) -> u64 {
        match self.get(key) {
            Value::Count(v) => *v,
            other => panic!("parameter '{key}' is not an integer: {other:?}"),
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        match self.get(key) {
            Value::Flag(v) => *v,
            other => panic!("parameter '{key}' is not a flag: {other:?}"),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Text(v) => v,
            other => panic!("parameter '{key}' is not text: {other:?}"),
        }
    }
}
