//! Experiment orchestration: training runs, checkpoint evaluation, baseline
//! rollouts, and parameter sweeps, each leaving a self-describing run
//! directory behind.

use std::path::{Path, PathBuf};

use serde::Serialize;

use swarmbeam_core::baselines::{policy_for, BaselineStrategy};
use swarmbeam_core::derive_seed;
use swarmbeam_core::env::{Action, Environment, Observation, SwarmEnv};
use swarmbeam_core::gdmtd3::{train, GdmTd3, NoiseSchedule, TrainLog};

use crate::checkpoint;
use crate::config::{ExperimentConfig, Override};
use crate::metrics::{CsvMetrics, CsvSink};
use crate::HarnessError;

/// Root directory for run outputs: `--out`, else `SWARMBEAM_OUT_ROOT`, else
/// `./runs`.
pub fn resolve_out_root(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("SWARMBEAM_OUT_ROOT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"))
}

fn ensure_dir(path: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(path)
        .map_err(|e| HarnessError::Runtime(format!("cannot create {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| HarnessError::Runtime(format!("serialization failed: {e}")))?;
    std::fs::write(path, json)
        .map_err(|e| HarnessError::Runtime(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    run_label: &'a str,
    config_hash: &'a str,
    seeds: &'a [u64],
    overrides: Vec<String>,
    outputs: Vec<String>,
    package_version: &'a str,
    wall_ms_actual: u128,
    summaries: Vec<SeedSummary>,
}

/// Final-window aggregates of one seed's training run.
#[derive(Clone, Debug, Serialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub episodes: usize,
    pub final_window: usize,
    pub reward_mean: f64,
    pub secrecy_mean_bpshz: f64,
    pub energy_mean_j: f64,
    pub critic_updates: u64,
    pub actor_updates: u64,
}

fn final_window(episodes: usize) -> usize {
    (episodes / 10).max(1)
}

fn summarize_log(seed: u64, log: &TrainLog) -> SeedSummary {
    let n = log.episodes.len();
    let window = final_window(n);
    let tail = &log.episodes[n - window.min(n)..];
    let count = tail.len().max(1) as f64;
    SeedSummary {
        seed,
        episodes: n,
        final_window: tail.len(),
        reward_mean: tail.iter().map(|e| e.total_reward).sum::<f64>() / count,
        secrecy_mean_bpshz: tail.iter().map(|e| e.mean_secrecy_bpshz).sum::<f64>() / count,
        energy_mean_j: tail.iter().map(|e| e.mean_energy_j).sum::<f64>() / count,
        critic_updates: log.critic_updates,
        actor_updates: log.actor_updates,
    }
}

pub struct TrainArtifacts {
    pub run_dir: PathBuf,
    pub summaries: Vec<SeedSummary>,
}

/// Trains one agent per seed, streaming per-step metrics to CSV and saving a
/// checkpoint per seed, then writes the resolved config and a manifest.
pub fn run_train(
    config: &ExperimentConfig,
    out_root: &Path,
    overrides: &[Override],
) -> Result<TrainArtifacts, HarnessError> {
    let started = std::time::Instant::now();
    let run_dir = out_root.join(&config.run_label);
    ensure_dir(&run_dir)?;
    let hash = config.hash()?;
    std::fs::write(run_dir.join("config.toml"), config.to_canonical_toml()?)
        .map_err(|e| HarnessError::Runtime(format!("cannot write config copy: {e}")))?;

    let mut outputs = vec!["config.toml".to_string(), "manifest.json".to_string()];
    let mut summaries = Vec::new();
    for &seed in &config.seeds {
        let csv_name = format!("train_seed{seed}.csv");
        let ckpt_name = format!("checkpoint_seed{seed}.json");
        let mut env = SwarmEnv::new(config.env.clone())?;
        let metrics = CsvMetrics::create(&run_dir.join(&csv_name), config.env.slot_seconds)?;
        let mut sink = CsvSink::new(metrics);
        let out = train(&mut env, &config.agent, seed, &mut sink)?;
        sink.finish()?;
        checkpoint::save(&run_dir.join(&ckpt_name), config, seed, &out.agent)?;
        let summary = summarize_log(seed, &out.log);
        println!(
            "train seed {seed}: {} episodes, final-{} reward {:.4}, secrecy {:.4} bps/Hz, energy {:.1} J",
            summary.episodes,
            summary.final_window,
            summary.reward_mean,
            summary.secrecy_mean_bpshz,
            summary.energy_mean_j
        );
        summaries.push(summary);
        outputs.push(csv_name);
        outputs.push(ckpt_name);
    }

    write_json(
        &run_dir.join("manifest.json"),
        &Manifest {
            command: "train",
            run_label: &config.run_label,
            config_hash: &hash,
            seeds: &config.seeds,
            overrides: overrides.iter().map(|o| o.raw.clone()).collect(),
            outputs,
            package_version: env!("CARGO_PKG_VERSION"),
            wall_ms_actual: started.elapsed().as_millis(),
            summaries: summaries.clone(),
        },
    )?;
    Ok(TrainArtifacts { run_dir, summaries })
}

/// Mean and sample standard deviation over per-episode means.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EvalSummary {
    pub episodes: usize,
    pub reward_mean: f64,
    pub reward_std: f64,
    pub secrecy_mean_bpshz: f64,
    pub secrecy_std_bpshz: f64,
    pub energy_mean_j: f64,
    pub energy_std_j: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Rolls out a policy function for several episodes, optionally streaming
/// each step to a CSV file. Episode e resets with the derived seed (seed, e).
pub fn rollout_episodes<F: FnMut(&Observation) -> Action>(
    env: &mut SwarmEnv,
    mut act: F,
    episodes: usize,
    seed: u64,
    mut metrics: Option<&mut CsvMetrics>,
) -> Result<EvalSummary, HarnessError> {
    if episodes == 0 {
        return Err(HarnessError::Config("evaluation needs at least one episode".into()));
    }
    let mut rewards = Vec::with_capacity(episodes);
    let mut secrecy = Vec::with_capacity(episodes);
    let mut energy = Vec::with_capacity(episodes);
    for episode in 0..episodes {
        let mut observation = env.reset(derive_seed(seed, episode as u64))?;
        let mut step = 0usize;
        let mut total_reward = 0.0;
        let mut total_secrecy = 0.0;
        let mut total_energy = 0.0;
        loop {
            let action = act(&observation);
            let outcome = env.step(&action)?;
            if let Some(m) = metrics.as_deref_mut() {
                m.write_row(&swarmbeam_core::gdmtd3::StepRow {
                    episode,
                    step,
                    reward: outcome.reward,
                    secrecy_rate_bpshz: outcome.info.secrecy_rate_bpshz,
                    energy_j: outcome.info.energy_j,
                    violations: outcome.info.violations,
                })?;
            }
            step += 1;
            total_reward += outcome.reward;
            total_secrecy += outcome.info.secrecy_rate_bpshz;
            total_energy += outcome.info.energy_j;
            observation = outcome.observation;
            if outcome.terminal {
                break;
            }
        }
        let steps = step.max(1) as f64;
        rewards.push(total_reward);
        secrecy.push(total_secrecy / steps);
        energy.push(total_energy / steps);
    }
    let (reward_mean, reward_std) = mean_std(&rewards);
    let (secrecy_mean_bpshz, secrecy_std_bpshz) = mean_std(&secrecy);
    let (energy_mean_j, energy_std_j) = mean_std(&energy);
    Ok(EvalSummary {
        episodes,
        reward_mean,
        reward_std,
        secrecy_mean_bpshz,
        secrecy_std_bpshz,
        energy_mean_j,
        energy_std_j,
    })
}

fn print_summary(label: &str, s: &EvalSummary) {
    println!(
        "{label}: {} episodes, secrecy {:.4} +/- {:.4} bps/Hz per step, energy {:.1} +/- {:.1} J per step, reward {:.4} +/- {:.4}",
        s.episodes, s.secrecy_mean_bpshz, s.secrecy_std_bpshz, s.energy_mean_j, s.energy_std_j, s.reward_mean, s.reward_std
    );
}

/// Deterministic-mode rollouts of a trained checkpoint.
pub fn run_evaluate(
    checkpoint_path: &Path,
    episodes: usize,
    seed: u64,
    out_root: &Path,
    label: Option<String>,
) -> Result<EvalSummary, HarnessError> {
    let loaded = checkpoint::load(checkpoint_path)?;
    let agent = GdmTd3::restore(loaded.agent, derive_seed(seed, 0xE7A1))?;
    let mut env = SwarmEnv::new(loaded.config.env.clone())?;

    let label = label.unwrap_or_else(|| format!("evaluate-{}", loaded.config.run_label));
    let run_dir = out_root.join(&label);
    ensure_dir(&run_dir)?;
    let csv_path = run_dir.join(format!("eval_seed{seed}.csv"));
    let mut metrics = CsvMetrics::create(&csv_path, loaded.config.env.slot_seconds)?;

    let summary = rollout_episodes(
        &mut env,
        |obs| agent.deterministic_action(obs),
        episodes,
        seed,
        Some(&mut metrics),
    )?;
    metrics.finish()?;
    write_json(&run_dir.join(format!("eval_seed{seed}_summary.json")), &summary)?;
    print_summary("evaluate", &summary);
    Ok(summary)
}

/// Rolls out one of the non-learning deployment strategies.
pub fn run_baseline(
    strategy: BaselineStrategy,
    config: &ExperimentConfig,
    episodes: usize,
    seed: u64,
    out_root: &Path,
    label: Option<String>,
) -> Result<EvalSummary, HarnessError> {
    let mut env = SwarmEnv::new(config.env.clone())?;
    let mut policy = policy_for(strategy, &config.env, derive_seed(seed, 0xBA5E))?;

    let label = label.unwrap_or_else(|| format!("baseline-{strategy}"));
    let run_dir = out_root.join(&label);
    ensure_dir(&run_dir)?;
    let csv_path = run_dir.join(format!("baseline_{strategy}_seed{seed}.csv"));
    let mut metrics = CsvMetrics::create(&csv_path, config.env.slot_seconds)?;

    let env_cfg = config.env.clone();
    let summary = rollout_episodes(
        &mut env,
        |obs| policy.act(obs, &env_cfg),
        episodes,
        seed,
        Some(&mut metrics),
    )?;
    metrics.finish()?;
    write_json(
        &run_dir.join(format!("baseline_{strategy}_seed{seed}_summary.json")),
        &summary,
    )?;
    print_summary(&format!("baseline {strategy}"), &summary);
    Ok(summary)
}

/// Swept experiment axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Seed,
    Schedule,
    DenoiseSteps,
    NUavs,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "seed" => Ok(Self::Seed),
            "schedule" => Ok(Self::Schedule),
            "denoise_steps" => Ok(Self::DenoiseSteps),
            "n_uavs" => Ok(Self::NUavs),
            other => Err(format!(
                "unknown sweep axis '{other}'; expected seed, schedule, denoise_steps or n_uavs"
            )),
        }
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Seed => "seed",
            Self::Schedule => "schedule",
            Self::DenoiseSteps => "denoise_steps",
            Self::NUavs => "n_uavs",
        })
    }
}

/// Applies one sweep value to a copy of the base config.
fn configure_sweep_value(
    base: &ExperimentConfig,
    axis: SweepAxis,
    value: &str,
) -> Result<ExperimentConfig, HarnessError> {
    let mut config = base.clone();
    let bad = |what: &str| HarnessError::Config(format!("sweep value '{value}' is not a valid {what}"));
    match axis {
        SweepAxis::Seed => {
            config.seeds = vec![value.parse().map_err(|_| bad("seed"))?];
        }
        SweepAxis::Schedule => {
            config.agent.noise_schedule =
                value.parse::<NoiseSchedule>().map_err(HarnessError::Config)?;
        }
        SweepAxis::DenoiseSteps => {
            config.agent.denoise_steps = value.parse().map_err(|_| bad("step count"))?;
        }
        SweepAxis::NUavs => {
            config.env.n_uavs = value.parse().map_err(|_| bad("UAV count"))?;
        }
    }
    config.run_label = format!("{axis}={value}");
    config.validate()?;
    Ok(config)
}

/// Runs the base config once per axis value and emits a comparison CSV of
/// final-window metrics, one labelled row per value (seed-averaged).
pub fn run_sweep(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &[String],
    out_root: &Path,
) -> Result<PathBuf, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Config("sweep needs at least one value".into()));
    }
    let sweep_dir = out_root.join(&base.run_label);
    ensure_dir(&sweep_dir)?;
    let mut lines = vec![String::from(
        "axis,value,seeds,episodes,final_window,reward_mean,reward_std,secrecy_mean_bpshz,energy_mean_j",
    )];
    for value in values {
        let config = configure_sweep_value(base, axis, value)?;
        let artifacts = run_train(&config, &sweep_dir, &[])?;
        let rewards: Vec<f64> = artifacts.summaries.iter().map(|s| s.reward_mean).collect();
        let (reward_mean, reward_std) = mean_std(&rewards);
        let secrecy: Vec<f64> = artifacts
            .summaries
            .iter()
            .map(|s| s.secrecy_mean_bpshz)
            .collect();
        let energy: Vec<f64> = artifacts.summaries.iter().map(|s| s.energy_mean_j).collect();
        lines.push(format!(
            "{axis},{value},{},{},{},{},{},{},{}",
            config.seeds.len(),
            artifacts.summaries[0].episodes,
            artifacts.summaries[0].final_window,
            reward_mean,
            reward_std,
            mean_std(&secrecy).0,
            mean_std(&energy).0,
        ));
    }
    let csv_path = sweep_dir.join(format!("sweep_{axis}.csv"));
    std::fs::write(&csv_path, lines.join("\n") + "\n")
        .map_err(|e| HarnessError::Runtime(format!("cannot write {}: {e}", csv_path.display())))?;
    println!("sweep {axis}: {} values -> {}", values.len(), csv_path.display());
    Ok(csv_path)
}
