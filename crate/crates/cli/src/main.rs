//! `vnqpe`: run phase-estimation simulations, evaluate cost models and sweep
//! parameters, writing CSV.
//!
//! Exit codes: 0 success, 2 configuration error, 3 infeasible δ,
//! 4 numerical failure.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Mode, Overrides, Policy};
use vnqpe_core::Error;

/// Failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleDelta { .. } => 3,
            Error::NotConverged(_)
            | Error::ConditionViolated(_)
            | Error::PostselectFailed(_)
            | Error::NotUnitary(_)
            | Error::NonHermitian(_)
            | Error::NotControlledForm(_)
            | Error::BranchCut(_)
            | Error::NormBound(_)
            | Error::BadPhaseCount(_) => 4,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::config(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::config(format!("csv: {e}"))
    }
}

#[derive(Parser)]
#[command(name = "vnqpe", version, about = "Von Neumann phase estimation laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run phase estimation and write the outcome distribution.
    Simulate(RunArgs),
    /// Evaluate cost models.
    Estimate(EstimateArgs),
    /// Repeat `simulate` over a grid of one parameter.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    hamiltonian_path: Option<PathBuf>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "eps-vn")]
    eps_vn: Option<f64>,
    #[arg(long)]
    delta_k: Option<f64>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long, env = "VNQPE_SEED")]
    seed: Option<u64>,
    /// qet | exact-oracle
    #[arg(long)]
    simulation_mode: Option<Mode>,
    /// Start from eigenvector `k` of H (ascending).
    #[arg(long, conflicts_with = "amplitudes")]
    eigenstate: Option<usize>,
    /// Start from the amplitudes in this file.
    #[arg(long)]
    amplitudes: Option<PathBuf>,
    #[arg(long)]
    output_path: Option<PathBuf>,
    /// Error of the available encoding.
    #[arg(long = "eps-be")]
    eps_be: Option<f64>,
    /// default | literal
    #[arg(long)]
    policy: Option<Policy>,
    /// Approximate iQFT band.
    #[arg(long)]
    band: Option<usize>,
}

impl RunArgs {
    fn load(&self) -> Result<config::RunConfig, CliError> {
        let o = Overrides {
            hamiltonian_path: self.hamiltonian_path.clone(),
            delta: self.delta,
            eps_vn: self.eps_vn,
            delta_k: self.delta_k,
            shots: self.shots,
            seed: self.seed,
            simulation_mode: self.simulation_mode,
            eigenstate: self.eigenstate,
            amplitudes: self.amplitudes.clone(),
            output_path: self.output_path.clone(),
            eps_be: self.eps_be,
            policy: self.policy,
            band: self.band,
        };
        config::RunConfig::load(self.config.as_deref(), o)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Thm3,
    Cor1,
    Cor2,
}

#[derive(Args)]
struct EstimateArgs {
    /// Models to evaluate; repeat or comma-separate.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    model: Vec<Model>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta_k: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "eps-be")]
    eps_be: Option<f64>,
    #[arg(long = "eps-vn")]
    eps_vn: Option<f64>,
    #[arg(long)]
    norm_h: Option<f64>,
    #[arg(long)]
    num_terms: Option<usize>,
    /// System qubits.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_anc: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Write here instead of stdout.
    #[arg(long)]
    output_path: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
pub enum Axis {
    Delta,
    #[value(name = "eps_vN", alias = "eps-vn", alias = "eps_vn")]
    EpsVn,
    T,
    R,
    #[value(name = "eps_BE", alias = "eps-be", alias = "eps_be")]
    EpsBe,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum)]
    axis: Axis,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    points: usize,
    /// Geometric instead of linear spacing.
    #[arg(long)]
    geometric: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => commands::simulate(&a.load()?),
        Command::Estimate(a) => commands::estimate(&commands::EstimateInput {
            models: a.model,
            beta: a.beta,
            delta_k: a.delta_k,
            delta: a.delta,
            eps_be: a.eps_be,
            eps_vn: a.eps_vn,
            norm_h: a.norm_h,
            num_terms: a.num_terms,
            n: a.n,
            n_anc: a.n_anc,
            alpha: a.alpha,
            output_path: a.output_path,
        }),
        Command::Sweep(a) => {
            let grid = commands::grid(a.from, a.to, a.points, a.geometric)?;
            commands::sweep(&a.run.load()?, a.axis, &grid)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vnqpe: {e}");
            ExitCode::from(e.code)
        }
    }
}
