//! `heatctl`: config-driven experiments for spectral inequalities and
//! null-control costs of heat-type semigroups.
//!
//! Exit codes: 0 on success, 2 for invalid parameters or configs, 1 for
//! numerical or I/O failures. Nothing is written unless the whole run succeeds.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Common, Method};

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn param(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<heatctl_core::Error> for CliError {
    fn from(e: heatctl_core::Error) -> Self {
        use heatctl_core::Error as E;
        match e {
            E::Parameter { .. } | E::Domain(_) => Self::param(e.to_string()),
            _ => Self::runtime(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "heatctl",
    version,
    about = "Spectral inequalities and null-control costs of heat semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Seed for randomised set placement.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON file of universal constants overriding the defaults.
    #[arg(long)]
    constants: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral-inequality constants over a list of energies.
    SpectralIneq(CommonArgs),
    /// Null controls and empirical control costs.
    Synthesize {
        #[arg(value_enum)]
        method: Method,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Closed-form cost bounds and their regime table.
    Bounds(CommonArgs),
    /// Control cost of periodic sets as their period shrinks.
    Homogenize(CommonArgs),
    /// Semigroup differences and nested controls on growing boxes.
    Exhaust(CommonArgs),
    /// Fit the free universal constants to empirical data.
    Calibrate(CommonArgs),
}

impl From<CommonArgs> for Common {
    fn from(a: CommonArgs) -> Self {
        Self {
            config: a.config,
            out: a.out,
            seed: a.seed,
            constants: a.constants,
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("HEATCTL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::param(format!("HEATCTL_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::SpectralIneq(a) => commands::spectral_ineq(&a.into()),
        Command::Synthesize { method, common } => commands::synthesize(&common.into(), method),
        Command::Bounds(a) => commands::bounds(&a.into()),
        Command::Homogenize(a) => commands::homogenize(&a.into()),
        Command::Exhaust(a) => commands::exhaust(&a.into()),
        Command::Calibrate(a) => commands::calibrate_cmd(&a.into()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heatctl: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
