//! The training loop: collect experience, update critics every step after
//! warmup, update the actor and targets on the delayed schedule.

use crate::derive_seed;
use crate::env::Environment;

use super::agent::{AgentConfig, GdmTd3};
use super::replay::{ReplayBuffer, Transition};
use super::TrainError;

/// Seed stream for the agent so weight init never collides with episode
/// reseeding.
const AGENT_SEED_STREAM: u64 = 0x5EED_AC70;

/// One logged environment step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRow {
    pub episode: usize,
    pub step: usize,
    pub reward: f64,
    pub secrecy_rate_bpshz: f64,
    pub energy_j: f64,
    pub violations: usize,
}

/// Per-episode aggregates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeStats {
    pub episode: usize,
    pub steps: usize,
    pub total_reward: f64,
    pub mean_secrecy_bpshz: f64,
    pub mean_energy_j: f64,
    pub violations: usize,
}

#[derive(Clone, Debug, Default)]
pub struct TrainLog {
    pub episodes: Vec<EpisodeStats>,
    pub critic_updates: u64,
    pub actor_updates: u64,
}

impl TrainLog {
    /// Mean total reward over the trailing `window` episodes.
    pub fn final_window_mean_reward(&self, window: usize) -> f64 {
        let n = self.episodes.len();
        let take = window.min(n).max(1);
        self.episodes[n - take..]
            .iter()
            .map(|e| e.total_reward)
            .sum::<f64>()
            / take as f64
    }
}

/// Receives every step row as it happens; the harness streams these to CSV.
pub trait StepSink {
    fn record(&mut self, row: &StepRow);
}

/// Drops the rows.
impl StepSink for () {
    fn record(&mut self, _row: &StepRow) {}
}

impl StepSink for Vec<StepRow> {
    fn record(&mut self, row: &StepRow) {
        self.push(*row);
    }
}

pub struct TrainOutput {
    pub log: TrainLog,
    pub agent: GdmTd3,
}

/// Runs the full training schedule on an environment. Episode e resets the
/// environment with the derived seed (seed, e); all agent randomness comes
/// from the derived agent stream, so a (seed, config) pair fixes the run.
pub fn train<E: Environment, S: StepSink>(
    env: &mut E,
    config: &AgentConfig,
    seed: u64,
    sink: &mut S,
) -> Result<TrainOutput, TrainError> {
    let mut agent = GdmTd3::new(
        env.observation_dim(),
        env.action_dim(),
        config.clone(),
        derive_seed(seed, AGENT_SEED_STREAM),
    )?;
    let mut buffer = ReplayBuffer::new(config.buffer_capacity);
    let mut log = TrainLog::default();
    let mut global_step: usize = 0;

    for episode in 0..config.episodes {
        let mut observation = env.reset(derive_seed(seed, episode as u64))?;
        let mut stats = EpisodeStats {
            episode,
            steps: 0,
            total_reward: 0.0,
            mean_secrecy_bpshz: 0.0,
            mean_energy_j: 0.0,
            violations: 0,
        };
        loop {
            let action = if global_step < config.warmup_steps {
                agent.random_action()
            } else {
                agent.sample_action(&observation)
            };
            let outcome = env.step(&action)?;
            buffer.push(Transition {
                state: observation.clone(),
                action,
                reward: outcome.reward,
                next_state: outcome.observation.clone(),
                terminal: outcome.terminal,
            });
            global_step += 1;
            stats.steps += 1;
            stats.total_reward += outcome.reward;
            stats.mean_secrecy_bpshz += outcome.info.secrecy_rate_bpshz;
            stats.mean_energy_j += outcome.info.energy_j;
            stats.violations += outcome.info.violations;
            sink.record(&StepRow {
                episode,
                step: stats.steps - 1,
                reward: outcome.reward,
                secrecy_rate_bpshz: outcome.info.secrecy_rate_bpshz,
                energy_j: outcome.info.energy_j,
                violations: outcome.info.violations,
            });

            if global_step > config.warmup_steps {
                if let Some(batch) = buffer.sample(config.batch_size, agent.rng()) {
                    let targets = agent.target_values(&batch);
                    agent.update_critics(&batch, &targets)?;
                    log.critic_updates += 1;
                    if log.critic_updates % config.policy_delay == 0 {
                        agent.update_actor(&batch)?;
                        agent.soft_update_targets();
                        log.actor_updates += 1;
                    }
                }
            }

            observation = outcome.observation;
            if outcome.terminal {
                break;
            }
        }
        let steps = stats.steps.max(1) as f64;
        stats.mean_secrecy_bpshz /= steps;
        stats.mean_energy_j /= steps;
        log.episodes.push(stats);
    }

    Ok(TrainOutput { log, agent })
}
