//! Config files and flag/file/default resolution.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value as Json};

use quanton::UnitSystem;

use crate::commands::CommandKind;
use crate::error::{invalid, CliError, CliResult};
use crate::output::Record;
use crate::params::{parse_json, parse_text, Kind, ParamSpec, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(text: &str) -> CliResult<Self> {
        match text {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(invalid("format", format!("expected json or csv, got '{other}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }

    fn default_for(kind: CommandKind) -> Self {
        if kind.is_scan() {
            Format::Csv
        } else {
            Format::Json
        }
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub parameters: Params,
    pub units: UnitSystem,
    pub format: Format,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// The config as embedded in JSON outputs. The output path is left out so
    /// that the record is independent of where it was written.
    pub fn to_record(&self) -> Record {
        let mut params = Record::new();
        for (key, value) in self.parameters.entries() {
            params.push(key, value);
        }
        Record::new()
            .with("command", self.command.name())
            .with("parameters", params)
            .with(
                "units",
                Record::new().with("hbar", self.units.hbar()).with("mass", self.units.mass()),
            )
            .with("output", Record::new().with("format", self.format.name()))
    }
}

/// Contents of a config file, checked for shape but not yet typed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub command: Option<String>,
    pub parameters: Map<String, Json>,
    pub hbar: Option<Json>,
    pub mass: Option<Json>,
    pub path: Option<String>,
    pub format: Option<String>,
}

fn object<'a>(value: &'a Json, key: &str) -> CliResult<&'a Map<String, Json>> {
    value.as_object().ok_or_else(|| invalid(key, "expected a JSON object"))
}

fn string(value: &Json, key: &str) -> CliResult<String> {
    value.as_str().map(str::to_string).ok_or_else(|| invalid(key, "expected a string"))
}

fn reject_unknown(map: &Map<String, Json>, allowed: &[&str], prefix: &str) -> CliResult<()> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(invalid(&format!("{prefix}{k}"), "unknown key")),
        None => Ok(()),
    }
}

impl FileConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let root: Json =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("malformed config file: {e}")))?;
        let root = object(&root, "config")?;
        reject_unknown(root, &["command", "parameters", "units", "output"], "")?;
        let mut cfg = FileConfig::default();
        if let Some(v) = root.get("command") {
            cfg.command = Some(string(v, "command")?);
        }
        if let Some(v) = root.get("parameters") {
            cfg.parameters = object(v, "parameters")?.clone();
        }
        if let Some(v) = root.get("units") {
            let units = object(v, "units")?;
            reject_unknown(units, &["hbar", "mass"], "units.")?;
            cfg.hbar = units.get("hbar").cloned();
            cfg.mass = units.get("mass").cloned();
        }
        if let Some(v) = root.get("output") {
            let output = object(v, "output")?;
            reject_unknown(output, &["path", "format"], "output.")?;
            if let Some(p) = output.get("path") {
                cfg.path = Some(string(p, "output.path")?);
            }
            if let Some(f) = output.get("format") {
                cfg.format = Some(string(f, "output.format")?);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Values given on the command line, all as raw text.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlagValues {
    pub parameters: BTreeMap<String, String>,
    pub hbar: Option<String>,
    pub mass: Option<String>,
    pub out: Option<String>,
    pub format: Option<String>,
}

const UNIT_SPEC: [ParamSpec; 2] = [
    ParamSpec::new("hbar", Kind::Positive, Some("1"), "reduced Planck constant"),
    ParamSpec::new("mass", Kind::Positive, Some("1"), "particle mass"),
];

fn resolve_one(spec: &ParamSpec, flag: Option<&String>, file: Option<&Json>) -> CliResult<crate::params::Value> {
    match (flag, file, spec.default) {
        (Some(text), _, _) => parse_text(spec, text),
        (None, Some(json), _) => parse_json(spec, json),
        (None, None, Some(default)) => parse_text(spec, default),
        (None, None, None) => Err(invalid(spec.key, "required parameter is missing")),
    }
}

/// Merges flags over the config file over defaults. `command` is the
/// subcommand given on the command line, if any.
pub fn resolve(command: Option<CommandKind>, flags: &FlagValues, file: Option<&FileConfig>) -> CliResult<RunConfig> {
    let file_command = match file.and_then(|f| f.command.as_deref()) {
        Some(name) => Some(
            CommandKind::from_name(name).ok_or_else(|| invalid("command", format!("unknown command '{name}'")))?,
        ),
        None => None,
    };
    let command = match (command, file_command) {
        (Some(c), Some(f)) if c != f => {
            return Err(invalid(
                "command",
                format!("config file is for '{}', not '{}'", f.name(), c.name()),
            ))
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(invalid("command", "no command given on the command line or in the config")),
    };

    let specs = command.params();
    if let Some(key) = flags.parameters.keys().find(|k| !specs.iter().any(|s| s.key == k.as_str())) {
        return Err(invalid(key, format!("unknown parameter for {}", command.name())));
    }
    if let Some(f) = file {
        if let Some(key) = f.parameters.keys().find(|k| !specs.iter().any(|s| s.key == k.as_str())) {
            return Err(invalid(key, format!("unknown parameter for {}", command.name())));
        }
    }
    let entries = specs
        .iter()
        .map(|s| Ok((s.key, resolve_one(s, flags.parameters.get(s.key), file.and_then(|f| f.parameters.get(s.key)))?)))
        .collect::<CliResult<Vec<_>>>()?;

    let hbar = resolve_one(&UNIT_SPEC[0], flags.hbar.as_ref(), file.and_then(|f| f.hbar.as_ref()))?;
    let mass = resolve_one(&UNIT_SPEC[1], flags.mass.as_ref(), file.and_then(|f| f.mass.as_ref()))?;
    let (crate::params::Value::Real(hbar), crate::params::Value::Real(mass)) = (hbar, mass) else {
        unreachable!("unit specs are real-valued");
    };
    let units = UnitSystem::new(hbar, mass).map_err(|e| invalid("hbar", e))?;

    let format = match flags.format.as_deref().or(file.and_then(|f| f.format.as_deref())) {
        Some(text) => Format::parse(text)?,
        None => Format::default_for(command),
    };
    let output = flags
        .out
        .as_deref()
        .or(file.and_then(|f| f.path.as_deref()))
        .filter(|p| *p != "-")
        .map(PathBuf::from);

    Ok(RunConfig { command, parameters: Params::new(entries), units, format, output })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Value;

    fn flags(pairs: &[(&str, &str)]) -> FlagValues {
        FlagValues {
            parameters: pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            ..Default::default()
        }
    }

    #[test]
    fn precedence_is_flags_then_file_then_defaults() {
        let file = FileConfig::parse(r#"{"command":"tube-phase","parameters":{"p":50,"L":2},"units":{"hbar":2}}"#).unwrap();
        let cfg = resolve(None, &flags(&[("p", "100")]), Some(&file)).unwrap();
        assert_eq!(cfg.command, CommandKind::TubePhase);
        assert_eq!(cfg.parameters.real("p"), 100.0);
        assert_eq!(cfg.parameters.real("L"), 2.0);
        assert_eq!(cfg.parameters.real("a"), 1.0);
        assert_eq!(cfg.parameters.entries()[3], ("nx", Value::Count(1)));
        assert_eq!(cfg.units.hbar(), 2.0);
        assert_eq!(cfg.units.mass(), 1.0);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.output, None);
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = resolve(Some(CommandKind::TubePhase), &flags(&[("p", "1"), ("q", "2")]), None).unwrap_err();
        assert!(err.to_string().contains("'q'"));
        let file = FileConfig::parse(r#"{"parameters":{"pp":1}}"#).unwrap();
        let err = resolve(Some(CommandKind::TubePhase), &flags(&[]), Some(&file)).unwrap_err();
        assert!(err.to_string().contains("'pp'"));
        let err = FileConfig::parse(r#"{"units":{"hbar":1,"c":1}}"#).unwrap_err();
        assert!(err.to_string().contains("'units.c'"));
        let err = FileConfig::parse(r#"{"comand":"x"}"#).unwrap_err();
        assert!(err.to_string().contains("'comand'"));
    }

    #[test]
    fn missing_and_malformed() {
        let err = resolve(Some(CommandKind::CirclePhase), &flags(&[("p", "1")]), None).unwrap_err();
        assert!(err.to_string().contains("'rho0'"));
        assert_eq!(err.exit_code(), 2);
        assert!(FileConfig::parse("{not json").is_err());
        assert!(FileConfig::parse("[1,2]").is_err());
        let file = FileConfig::parse(r#"{"command":"sweep"}"#).unwrap();
        assert!(resolve(Some(CommandKind::TubePhase), &flags(&[("p", "1")]), Some(&file)).is_err());
    }

    #[test]
    fn scans_default_to_csv_and_dash_means_stdout() {
        let f = FlagValues { out: Some("-".into()), ..flags(&[("lo", "1"), ("hi", "2")]) };
        let cfg = resolve(Some(CommandKind::Sweep), &f, None).unwrap();
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.output, None);
    }
}
