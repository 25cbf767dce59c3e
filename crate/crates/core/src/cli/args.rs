use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::family::{FamilySpec, InputDescriptor};
use super::{io, CliError, CliResult};
use crate::states::DensityMatrix;

#[derive(Debug, Parser)]
#[command(
    name = "ptmoments",
    version,
    about = "Partial-transpose moment criteria for qubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments, criterion verdicts, negativities, minors and the PPT oracle as JSON.
    Analyze(AnalyzeArgs),
    /// CSV table over a one-parameter family, with bisected sign changes.
    Sweep(SweepArgs),
    /// Spectra of the state and of every single-factor partial transpose as JSON.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// bell, ghz-noise, w-noise, knoll, x-state
    #[arg(long, conflicts_with = "file")]
    pub family: Option<String>,

    /// Family parameter, `name=value`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,

    /// JSON state file: {"dims": [...], "matrix": [[re, im], ...]}.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl SourceArgs {
    pub fn load(&self) -> CliResult<(DensityMatrix<f64>, InputDescriptor)> {
        match (&self.family, &self.file) {
            (Some(name), None) => {
                let spec = FamilySpec::parse(name, &self.params)?;
                Ok((spec.state()?, spec.descriptor()))
            }
            (None, Some(path)) => {
                if !self.params.is_empty() {
                    return Err(CliError::Validation(
                        "--param only applies to --family".into(),
                    ));
                }
                let rho = io::read_state_file(path)?;
                Ok((rho, InputDescriptor::file(path)))
            }
            _ => Err(CliError::Validation(
                "give exactly one of --family or --file".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Highest moment order; defaults to 6 for two qubits, 5 for three, d otherwise.
    #[arg(long)]
    pub kmax: Option<usize>,

    /// Comma list such as p3ppt,p3oppt,p5ppt.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<String>,

    /// Violation tolerance (default 1e-10).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub analysis: AnalysisArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the input state in the JSON state format.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: String,

    /// Fixed parameters, `name=value`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,

    /// Parameter to vary; defaults to alpha, beta or gamma by family.
    #[arg(long)]
    pub vary: Option<String>,

    #[arg(long, default_value_t = 0.0)]
    pub from: f64,

    #[arg(long, default_value_t = 1.0)]
    pub to: f64,

    /// Number of grid intervals.
    #[arg(long, conflicts_with = "step")]
    pub steps: Option<usize>,

    /// Grid spacing.
    #[arg(long)]
    pub step: Option<f64>,

    #[command(flatten)]
    pub analysis: AnalysisArgs,

    #[arg(long)]
    pub out: Option<PathBuf>,
}
