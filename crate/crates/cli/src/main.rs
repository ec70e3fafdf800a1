//! `hetero-sis`: simulate, predict and verify SIS epidemics with
//! heterogeneous susceptibility and infectivity.

mod commands;
mod config;
mod error;
mod manifest;
mod plot;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::verify::Which;

#[derive(Debug, Parser)]
#[command(name = "hetero-sis", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scenario JSON document.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Base seed for the stochastic oracle; replica r uses seed + r.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Worker threads for stochastic replicas [default: all cores].
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub plot: bool,

    /// Susceptibility bins for the binned oracle.
    #[arg(long, global = true, default_value_t = 400)]
    pub k1: usize,

    /// Infectivity bins for the binned oracle.
    #[arg(long, global = true, default_value_t = 400)]
    pub k2: usize,

    /// Agents per stochastic replica.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub agents: usize,

    /// Stochastic replicas.
    #[arg(long, global = true, default_value_t = 100)]
    pub replicas: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the reduced system and write the trajectory.
    Simulate,
    /// Print the endemic final-size prediction as JSON.
    FinalSize,
    /// Run verification checks and write report.json.
    Verify {
        #[arg(value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// Tabulate M, H and the tilted variance of a distribution.
    Dist {
        /// e.g. `pareto(xi=1, alpha=2)`, `gamma(k=2, theta=0.5)`, `degenerate(c=0.5)`.
        spec: String,
        /// Comma-separated tilts [default: 0 and -10^(-3..3)].
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda: Vec<f64>,
        /// Write the table to this CSV file instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare the reduced system against an oracle.
    Compare {
        #[arg(long, value_enum, default_value_t = OracleKind::Binned)]
        oracle: OracleKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Binned,
    Stochastic,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HETERO_SIS_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool not configured: {e}");
        }
    }
    let outcome = match &cli.command {
        Command::Simulate => commands::simulate(&cli),
        Command::FinalSize => commands::final_size(&cli),
        Command::Verify { which } => commands::verify(&cli, *which),
        Command::Dist { spec, lambda, csv } => commands::dist(spec, lambda, csv.as_deref()),
        Command::Compare { oracle } => commands::compare(&cli, *oracle),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

pub fn require<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("this command needs {flag}")))
}
