//! Command-line front end: `ratio`, `sweep` and `verify`.

pub mod args;
pub mod output;
pub mod verify;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::error::Error;
use crate::experiments::{analyze_convergence, epsilon_of, run_sweep, SweepSpec};
use crate::volumes::SurfaceClass;

pub use args::{Cli, Command, Format, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: io::Error },
    #[error("verification failed at {0}")]
    CheckFailed(String),
}

/// Parses the process arguments, runs the command and maps the outcome to an
/// exit status: 0 on success, 1 on a failed computation or check, 2 on bad usage.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    match execute(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let stdout_error = |source| CliError::Write {
        path: "-".into(),
        source,
    };
    match &cli.command {
        Command::Ratio { g, n, format } => {
            let surface = SurfaceClass::new(*g, *n)?;
            let record = epsilon_of(surface.g(), surface.n(), cli.precision)?;
            let report = output::ratio_output(&record);
            if let Some(w) = &report.warning {
                writeln!(err, "{w}").map_err(stdout_error)?;
            }
            let text = match format {
                Format::Text => output::ratio_text(&report),
                Format::Csv => output::ratio_csv(&report),
                Format::Json => output::ratio_json(&report),
            };
            out.write_all(text.as_bytes()).map_err(stdout_error)?;
        }
        Command::Sweep {
            g,
            lambda,
            out: path,
            format,
            rounding,
        } => {
            let mut spec = SweepSpec::new(g.0.clone(), lambda.0.clone(), cli.precision)?;
            spec.rounding = (*rounding).into();
            let records = run_sweep(&spec)?;
            let report = analyze_convergence(&records);
            let format = format.unwrap_or(if path.ends_with(".json") {
                Format::Json
            } else {
                Format::Csv
            });
            let text = match format {
                Format::Csv => output::sweep_csv(&records),
                Format::Json => output::sweep_json(&records, &report, cli.precision),
                Format::Text => output::sweep_text(&records, &report),
            };
            if path == "-" {
                out.write_all(text.as_bytes()).map_err(stdout_error)?;
            } else {
                fs::write(path, text).map_err(|source| CliError::Write {
                    path: path.clone(),
                    source,
                })?;
            }
        }
        Command::Verify {
            suite,
            index_reading,
        } => {
            let checks = verify::run_suite(*suite, cli.precision, (*index_reading).into())?;
            for c in &checks {
                writeln!(out, "{c}").map_err(stdout_error)?;
            }
            if let Some(first) = checks.iter().find(|c| !c.passed) {
                return Err(CliError::CheckFailed(format!("{}/{}", first.suite, first.name)));
            }
            writeln!(out, "all {} checks passed", checks.len()).map_err(stdout_error)?;
        }
    }
    Ok(())
}
