use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod emit;
mod error;

use config::{ExperimentConfig, Format};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "nilrenorm", version, about = "Exact experiments with Heisenberg nilflows and their sections")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; without it results go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    iters: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Substitution such as `a->ab;b->a`.
    #[arg(long, global = true)]
    substitution: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Matrix, eigen-data, flows and surface of a substitution.
    Analyze,
    /// Orbit dump of a map or flow.
    Orbit,
    /// Broken line of the fixed word.
    BrokenLine,
    /// First-return data and conjugacy residuals.
    Induce,
    /// Runs every invariant check.
    Verify,
    /// Weyl sums along long orbits.
    Equidistribution,
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.samples.is_some() {
        cfg.samples = cli.samples;
    }
    if cli.iters.is_some() {
        cfg.iters = cli.iters;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    if let Some(s) = &cli.substitution {
        cfg.substitution = s.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(cli)?;
    match cli.command {
        Command::Analyze => commands::analyze(&cfg),
        Command::Orbit => commands::orbit(&cfg),
        Command::BrokenLine => commands::broken_line_cmd(&cfg),
        Command::Induce => commands::induce(&cfg),
        Command::Verify => commands::verify_cmd(&cfg),
        Command::Equidistribution => commands::equidistribution_cmd(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
