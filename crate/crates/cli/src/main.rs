//! `dlcorr`: constraint analysis, dissipation matrices, correspondence checks
//! and open-system dynamics for the coupled-oscillator model.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Overrides};
use error::{exit, CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "dlcorr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Fock truncation: `N` for both modes or `N_S,N_B`.
    #[arg(long, global = true, value_name = "N")]
    fock_dim: Option<String>,

    /// Coarse-graining time.
    #[arg(long, global = true, value_name = "F")]
    tau: Option<f64>,

    /// Sweep axis and values, e.g. `tau=0.1,0.2,0.4`.
    #[arg(long, global = true, value_name = "NAME=v1,v2,...")]
    sweep: Option<String>,

    /// Fock levels dropped from the top before operator comparisons.
    #[arg(long, global = true, value_name = "K")]
    interior_exclude: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Dirac constraint chain, classification and multipliers (JSON).
    Constraints,
    /// Dissipation-matrix entries over the sweep axis (CSV).
    Gamma,
    /// Correspondence report (JSON, plus CSV when sweeping).
    Correspond,
    /// Master-equation trajectory against exact reduced dynamics (CSV).
    Evolve,
}

fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("--config is required"))?;
    let mut cfg = ExperimentConfig::load(path)?;
    cfg.apply(&Overrides {
        out: cli.out.clone(),
        fock_dim: cli.fock_dim.clone(),
        tau: cli.tau,
        sweep: cli.sweep.clone(),
        interior_exclude: cli.interior_exclude,
    })?;
    match cli.command {
        Command::Constraints => commands::constraints::run(&cfg),
        Command::Gamma => commands::gamma::run(&cfg),
        Command::Correspond => commands::correspond::run(&cfg),
        Command::Evolve => commands::evolve::run(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::from(exit::OK as u8)
        }
        Err(e) => {
            eprintln!("dlcorr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
