//! Command-line front end for `quanton`.
//!
//! Every subcommand is described by a parameter registry
//! ([`commands::CommandKind::params`]) that drives both the clap flags and the
//! strict validation of config files. Results are rendered deterministically
//! and written atomically.
//!
//! Exit codes: 0 success, 1 numerical or physical failure, 2 invalid input.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod params;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgMatches, Command};

pub use commands::CommandKind;
pub use config::{FileConfig, FlagValues, Format, RunConfig};
pub use error::{CliError, CliResult};

use commands::{Output, SWEEP_HEADER};
use output::{record_to_csv, rows_to_csv, to_json, Field, Record};

/// Environment variable that relocates relative output paths.
pub const OUTPUT_DIR_VAR: &str = "QUANTON_OUT";

/// Runs the command and renders its output in the configured format.
pub fn run(config: &RunConfig) -> CliResult<String> {
    let out = commands::execute(config.command, &config.parameters, config.units)?;
    Ok(render(config, &out))
}

pub fn render(config: &RunConfig, out: &Output) -> String {
    match (config.format, out) {
        (Format::Csv, Output::Record(r)) => record_to_csv(r),
        (Format::Csv, Output::Table { rows, .. }) => rows_to_csv(&SWEEP_HEADER, rows),
        (Format::Json, Output::Record(r)) => to_json(&document(config, r.clone())),
        (Format::Json, Output::Table { summary, rows }) => {
            let mut result = summary.clone();
            result.push("rows", Field::Rows(rows.clone()));
            to_json(&document(config, result))
        }
    }
}

fn document(config: &RunConfig, result: Record) -> Record {
    Record::new()
        .with("command", config.command.name())
        .with("config", config.to_record())
        .with("result", result)
}

fn value_name(kind: params::Kind) -> &'static str {
    use params::Kind::*;
    match kind {
        Real | Positive | NonNegative | HalfInteger => "REAL",
        Count { .. } | PowerOfTwo => "INT",
        Flag => "BOOL",
        Choice(_) => "NAME",
    }
}

/// The clap command tree, generated from the parameter registries.
pub fn cli() -> Command {
    let global = |name: &'static str, help: &'static str| {
        Arg::new(name).long(name).global(true).value_name("VALUE").help(help)
    };
    let mut root = Command::new("quanton")
        .about("Quantum-potential phases of confined quantons")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg(global("hbar", "reduced Planck constant [default 1]").allow_negative_numbers(true))
        .arg(global("mass", "particle mass [default 1]").allow_negative_numbers(true))
        .arg(global("config", "JSON run configuration; flags override its values").value_name("FILE"))
        .arg(global("out", "output file, '-' for stdout; relative paths go under $QUANTON_OUT").value_name("PATH"))
        .arg(global("format", "json or csv [default: csv for sweep, json otherwise]").value_name("FORMAT"));
    for kind in CommandKind::ALL {
        let mut sub = Command::new(kind.name()).about(kind.about()).allow_negative_numbers(true);
        for spec in kind.params() {
            let help = match spec.default {
                Some(d) => format!("{} ({}) [default {d}]", spec.help, spec.kind.describe()),
                None => format!("{} ({}) [required]", spec.help, spec.kind.describe()),
            };
            sub = sub.arg(
                Arg::new(spec.key)
                    .long(spec.key)
                    .value_name(value_name(spec.kind))
                    .allow_hyphen_values(true)
                    .help(help),
            );
        }
        root = root.subcommand(sub);
    }
    root.subcommand(Command::new("run").about("Run the command named in --config"))
}

fn flag_values(kind: Option<CommandKind>, root: &ArgMatches, sub: &ArgMatches) -> FlagValues {
    let get = |name: &str| {
        sub.get_one::<String>(name)
            .or_else(|| root.get_one::<String>(name))
            .cloned()
    };
    let parameters = kind
        .map(|k| {
            k.params()
                .iter()
                .filter_map(|s| sub.get_one::<String>(s.key).map(|v| (s.key.to_string(), v.clone())))
                .collect()
        })
        .unwrap_or_default();
    FlagValues { parameters, hbar: get("hbar"), mass: get("mass"), out: get("out"), format: get("format") }
}

/// Parses arguments into a validated run.
pub fn parse_args(matches: &ArgMatches) -> CliResult<RunConfig> {
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let kind = if name == "run" { None } else { CommandKind::from_name(name) };
    let flags = flag_values(kind, matches, sub);
    let config_path = sub
        .get_one::<String>("config")
        .or_else(|| matches.get_one::<String>("config"));
    let file = config_path.map(|p| FileConfig::load(Path::new(p))).transpose()?;
    if name == "run" && file.is_none() {
        return Err(error::invalid("config", "'run' needs --config FILE"));
    }
    config::resolve(kind, &flags, file.as_ref())
}

/// Full entry point; returns the process exit code.
pub fn main_with(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    output_dir: Option<PathBuf>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = parse_args(&matches).and_then(|config| {
        let text = run(&config)?;
        match &config.output {
            Some(path) => output::write_atomic(&output::resolve_output_path(path, output_dir.as_deref()), &text),
            None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}"))),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
