//! Command-line front end: state ingestion, analysis reports and parameter
//! sweeps. Everything here works in `f64`.

pub mod args;
pub mod family;
pub mod format;
pub mod io;
pub mod report;
pub mod sweep;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Error;
use crate::states::DensityMatrix;

pub use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => EXIT_VALIDATION,
            Self::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => Self::Numerical(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Runs one subcommand, writing to `--out` or standard output.
pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze(a) => {
            let (rho, input) = a.source.load()?;
            export_if_requested(a.export.as_deref(), &rho)?;
            let opts = report::AnalyzeOptions::from_args(&a.analysis, &rho)?;
            let r = report::analyze(&rho, input, &opts)?;
            emit(a.out.as_deref(), |w| report::write_json(w, &r))
        }
        Command::Oracle(a) => {
            let (rho, input) = a.source.load()?;
            export_if_requested(a.export.as_deref(), &rho)?;
            let tol = a.tol.unwrap_or(crate::Scalar::default_tol());
            let r = report::oracle(&rho, input, tol)?;
            emit(a.out.as_deref(), |w| report::write_json(w, &r))
        }
        Command::Sweep(a) => {
            let table = sweep::run_sweep(&sweep::SweepConfig::from_args(&a)?)?;
            emit(a.out.as_deref(), |w| table.write_csv(w))
        }
    }
}

fn export_if_requested(path: Option<&Path>, rho: &DensityMatrix<f64>) -> CliResult<()> {
    if let Some(p) = path {
        let f =
            File::create(p).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
        let mut w = BufWriter::new(f);
        io::write_state(&mut w, rho)?;
        w.flush()
            .map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn emit<F>(out: Option<&Path>, body: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    let io_err = |e: std::io::Error| CliError::Validation(format!("cannot write output: {e}"));
    match out {
        Some(p) => {
            let f = File::create(p)
                .map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            body(&mut w)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush().map_err(io_err)
        }
    }
}
