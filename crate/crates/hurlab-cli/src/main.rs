//! `hurlab`: runs experiments from flags or config files and writes
//! versioned JSON or CSV reports.
//!
//! Exit codes: 0 success, 1 failed acceptance checks or unwritable output,
//! 2 capacity exceeded, 3 invalid input or configuration, 4 internal
//! invariant violated.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

mod commands;
mod config;
mod report;

use config::{Cli, Command, Experiment, RunOptions};
use report::{Report, Table};

#[derive(Debug)]
pub enum CliError {
    Lib(hurlab::Error),
    Config(String),
    Io(String),
    ChecksFailed(Vec<u8>),
}

impl From<hurlab::Error> for CliError {
    fn from(e: hurlab::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(hurlab::Error::Capacity(_)) => 2,
            CliError::Lib(hurlab::Error::Validation(_) | hurlab::Error::Domain(_)) | CliError::Config(_) => 3,
            CliError::Lib(hurlab::Error::Internal(_)) => 4,
            CliError::Io(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::ChecksFailed(ids) => write!(f, "acceptance criteria failed: {ids:?}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hurlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify(v) => hurlab::par::with_workers(cli.run.workers, || verify(&v.suite, v.quick)),
        Command::Run { config } => {
            let (file_opts, exp) = config::load(&config)?;
            experiment(&merge(file_opts, cli.run), &exp)
        }
        Command::Experiment(exp) => experiment(&cli.run, &exp),
    }
}

/// Flags given on the command line override the `[run]` section.
fn merge(file: RunOptions, flags: RunOptions) -> RunOptions {
    RunOptions {
        workers: flags.workers.or(file.workers),
        out: flags.out.or(file.out),
        format: flags.format.or(file.format),
        no_timing: flags.no_timing || file.no_timing,
    }
}

fn experiment(opts: &RunOptions, exp: &Experiment) -> Result<(), CliError> {
    if opts.workers == Some(0) {
        return Err(CliError::Config("workers must be positive".into()));
    }
    let start = Instant::now();
    let table: Table = hurlab::par::with_workers(opts.workers, || commands::run(exp))?;
    let elapsed = (!opts.no_timing).then(|| start.elapsed().as_secs_f64());
    let config = serde_json::to_value(exp).expect("configs serialize");
    let report = Report::new(exp.name(), config, table, elapsed);
    let text = report.render(opts.format())?;
    match &opts.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    eprintln!("fingerprint {}", report.fingerprint);
    Ok(())
}

fn verify(suite: &str, quick: bool) -> Result<(), CliError> {
    let checks = hurlab::verify::run(suite, quick)?;
    let failed: Vec<u8> = checks.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    for c in &checks {
        println!("{c}");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}
