//! Command-line front end: argument handling, dispatch and output.

pub mod commands;
pub mod config;
pub mod table;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::{Cli, Command};
pub use table::{render, Format, Table};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Invalid flags or parameters; exit status 2.
    Usage(String),
    /// A numerical step failed; exit status 1.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<hjwell::Error> for CliError {
    fn from(e: hjwell::Error) -> Self {
        match e {
            hjwell::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

/// A finished command: its records, plus a failure summary when the records
/// themselves report failures (sweep rows, verify checks).
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub failure: Option<String>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Report { table, failure: None }
    }
}

/// Splices flags from `--config` in after the subcommand name (after the
/// inner command name for `sweep`), so explicit flags that follow win.
pub fn expand_config(mut args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config::take_config_path(&mut args).map_err(CliError::Usage)? else {
        return Ok(args);
    };
    let flags = config::read_config(std::path::Path::new(&path)).map_err(CliError::Usage)?;
    let sub = args.iter().skip(1).position(|a| !a.starts_with('-')).map(|i| i + 1);
    let at = match sub {
        Some(i) if args[i] == "sweep" => match args.iter().position(|a| a == "--") {
            Some(j) if j + 1 < args.len() => j + 2,
            _ => return Err(CliError::Usage("sweep needs `-- <command> [flags]` to apply a config".into())),
        },
        Some(i) => i + 1,
        None => return Err(CliError::Usage("--config needs a subcommand".into())),
    };
    args.splice(at..at, flags);
    Ok(args)
}

/// Parses `args` (including the program name) into a command line.
pub fn parse(args: &[String]) -> Result<Cli, clap::Error> {
    Cli::try_parse_from(args)
}

/// Parses and runs `args`, returning the rendered output.
pub fn execute(args: Vec<String>) -> Result<(Report, String, Option<std::path::PathBuf>), CliError> {
    let args = expand_config(args)?;
    let cli = parse(&args).map_err(|e| CliError::Usage(e.to_string()))?;
    let precision = table::precision().map_err(CliError::Usage)?;
    let (format, output) = cli.command.output();
    let report = commands::run(&cli.command)?;
    Ok((report.clone(), render(&report.table, format, precision), output))
}

/// Full program: writes records to stdout (or `--output`) and diagnostics to
/// `err`; returns the exit status.
pub fn main_with(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    // Help and version requests print through clap with status 0.
    if let Ok(a) = expand_config(args.clone()) {
        if let Err(e) = parse(&a) {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
        }
    }
    match execute(args) {
        Ok((report, text, path)) => {
            let written = match &path {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            match report.failure {
                Some(f) => {
                    let _ = writeln!(err, "error: {f}");
                    1
                }
                None => 0,
            }
        }
        Err(e) => {
            let msg = e.message().trim_end();
            let _ = if msg.starts_with("error:") { writeln!(err, "{msg}") } else { writeln!(err, "error: {msg}") };
            e.exit_code()
        }
    }
}
