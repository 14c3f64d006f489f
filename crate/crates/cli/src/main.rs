use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use cablesea_cli::{simulate, synthesize, tune_velocity, Config, ControllerChoice};
use clap::{Parser, Subcommand};

/// Torque-loop tuning, synthesis and simulation for a cable-driven SEA.
#[derive(Parser)]
#[command(name = "cablesea", version)]
struct Cli {
    /// Configuration file.
    #[arg(long, global = true, default_value = "paper.cfg")]
    config: PathBuf,
    /// Output directory; overrides the config's [output] dir.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed override: disturbance uses SEED, noise SEED + 1.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Velocity plant, PI gains and the velocity step response.
    TuneVelocity,
    /// Optimal stabilizer and 2-DOF controller; writes the controller file.
    Synthesize,
    /// Runs a scenario and writes traces and metrics.
    Simulate {
        #[arg(long)]
        scenario: String,
        #[arg(long, value_enum, default_value = "both")]
        controller: ControllerChoice,
    },
}

fn run(cli: Cli) -> Result<String> {
    let mut cfg = Config::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg = cfg.with_seed(seed);
    }
    let dir = cli.out.unwrap_or_else(|| cfg.output_dir.clone());
    match cli.command {
        Command::TuneVelocity => tune_velocity(&cfg, &dir),
        Command::Synthesize => synthesize(&cfg, &dir),
        Command::Simulate { scenario, controller } => simulate(&cfg, &scenario, controller, &dir),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
