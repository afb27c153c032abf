use std::path::PathBuf;

use clap::{Parser, Subcommand};

use swarmbeam_core::baselines::BaselineStrategy;
use swarmbeam_harness::config::{load_config, Override};
use swarmbeam_harness::runner::{
    resolve_out_root, run_baseline, run_evaluate, run_sweep, run_train, SweepAxis,
};
use swarmbeam_harness::HarnessError;

/// Swarm beamforming lab: train, evaluate and compare policies that steer a
/// UAV virtual antenna array against a mobile eavesdropper.
#[derive(Parser)]
#[command(name = "swarmbeam", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// Experiment config file (TOML); built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dotted config override, e.g. --set agent.denoise_steps=8. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<Override>,
    /// Output root directory (default: $SWARMBEAM_OUT_ROOT or ./runs).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run label; overrides the config's run_label.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Train one agent per configured seed; writes metrics CSV, checkpoints
    /// and a manifest.
    Train {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Roll out a trained checkpoint in deterministic mode.
    Evaluate {
        /// Path to a checkpoint written by `train`.
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, default_value_t = 10)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        label: Option<String>,
    },
    /// Roll out a non-learning deployment strategy.
    Baseline {
        /// One of: random, laa, paa, caa.
        #[arg(long)]
        strategy: String,
        #[arg(long, default_value_t = 10)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Train the base config once per axis value and emit a comparison CSV.
    Sweep {
        /// One of: seed, schedule, denoise_steps, n_uavs.
        #[arg(long)]
        axis: String,
        /// Comma-separated list of axis values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn resolve(config_args: &ConfigArgs) -> Result<swarmbeam_harness::config::ExperimentConfig, HarnessError> {
    let mut config = load_config(config_args.config.as_deref(), &config_args.overrides)?;
    if let Some(label) = &config_args.label {
        config.run_label = label.clone();
        config.validate()?;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Train { config } => {
            let resolved = resolve(&config)?;
            let out_root = resolve_out_root(config.out.clone());
            run_train(&resolved, &out_root, &config.overrides)?;
            Ok(())
        }
        Command::Evaluate {
            checkpoint,
            episodes,
            seed,
            out,
            label,
        } => {
            let out_root = resolve_out_root(out);
            run_evaluate(&checkpoint, episodes, seed, &out_root, label)?;
            Ok(())
        }
        Command::Baseline {
            strategy,
            episodes,
            seed,
            config,
        } => {
            let strategy: BaselineStrategy =
                strategy.parse().map_err(HarnessError::Config)?;
            let resolved = resolve(&config)?;
            let out_root = resolve_out_root(config.out.clone());
            run_baseline(strategy, &resolved, episodes, seed, &out_root, config.label.clone())?;
            Ok(())
        }
        Command::Sweep {
            axis,
            values,
            config,
        } => {
            let axis: SweepAxis = axis.parse().map_err(HarnessError::Config)?;
            let resolved = resolve(&config)?;
            let out_root = resolve_out_root(config.out.clone());
            run_sweep(&resolved, axis, &values, &out_root)?;
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
