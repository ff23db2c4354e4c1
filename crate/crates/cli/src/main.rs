use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use treebandit_cli::runner;
use treebandit_cli::spec::ExperimentSpec;

/// Bandit tree-search experiment runner: seeded replications with
/// machine-readable regret curves, leaf histograms, and tree dumps.
#[derive(Parser)]
#[command(name = "treebandit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the configured experiment and write result files.
    Run(CommonArgs),
    /// Re-run the experiment for each smoothness constant in `sweep_deltas`.
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment configuration (JSON).
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the replication count.
    #[arg(long)]
    reps: Option<u64>,
    /// Suppress progress output.
    #[arg(long)]
    quiet: bool,
}

impl CommonArgs {
    fn load(&self) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::from_json_file(&self.config)?;
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if let Some(reps) = self.reps {
            spec.replications = reps;
        }
        Ok(spec)
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => {
            let spec = args.load()?;
            runner::run_experiment(&spec, &args.out, args.quiet)
        }
        Command::Sweep(args) => {
            let spec = args.load()?;
            runner::delta_sweep(&spec, &args.out, args.quiet)
        }
    }
}
