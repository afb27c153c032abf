//! Non-learning deployment policies: random re-placement each slot, and the
//! three fixed formations (line, grid, circle) used as comparison baselines.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::derive_seed;
use crate::env::{
    decode_observation, episode_return, Action, EnvConfig, EnvError, Environment, Observation,
    SwarmEnv,
};

/// Inter-UAV spacing of the line and grid formations, and the circle radius, m.
pub const FORMATION_SPACING_M: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineStrategy {
    /// Fresh uniform positions and excitations every slot.
    Random,
    /// Linear antenna array.
    Laa,
    /// Planar antenna array.
    Paa,
    /// Circular antenna array.
    Caa,
}

impl std::str::FromStr for BaselineStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Self::Random),
            "laa" => Ok(Self::Laa),
            "paa" => Ok(Self::Paa),
            "caa" => Ok(Self::Caa),
            other => Err(format!(
                "unknown baseline strategy '{other}'; expected one of random, laa, paa, caa"
            )),
        }
    }
}

impl std::fmt::Display for BaselineStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Random => "random",
            Self::Laa => "laa",
            Self::Paa => "paa",
            Self::Caa => "caa",
        };
        f.write_str(name)
    }
}

/// A fixed formation: positions and excitation weights for every UAV.
#[derive(Clone, Debug, PartialEq)]
pub struct StaticLayout {
    pub positions: Vec<[f64; 3]>,
    pub excitations: Vec<f64>,
}

fn centered(mut points: Vec<[f64; 3]>, center: [f64; 3]) -> Vec<[f64; 3]> {
    let n = points.len() as f64;
    let mut mean = [0.0; 3];
    for p in &points {
        for axis in 0..3 {
            mean[axis] += p[axis] / n;
        }
    }
    for p in points.iter_mut() {
        for axis in 0..3 {
            p[axis] += center[axis] - mean[axis];
        }
    }
    points
}

fn check_fits(positions: &[[f64; 3]], cfg: &EnvConfig, label: &str) -> Result<(), EnvError> {
    for p in positions {
        for axis in 0..3 {
            if p[axis] < cfg.bounds_min[axis] || p[axis] > cfg.bounds_max[axis] {
                return Err(EnvError::Config(format!(
                    "{label} formation of {} UAVs does not fit the deployment box",
                    positions.len()
                )));
            }
        }
    }
    Ok(())
}

/// K collinear points along x, spacing 0.5 m, centroid at the region center.
pub fn linear_layout(cfg: &EnvConfig) -> Result<StaticLayout, EnvError> {
    let k = cfg.n_uavs;
    let points: Vec<[f64; 3]> = (0..k)
        .map(|i| [i as f64 * FORMATION_SPACING_M, 0.0, 0.0])
        .collect();
    let positions = centered(points, cfg.region_center());
    check_fits(&positions, cfg, "linear")?;
    Ok(StaticLayout {
        positions,
        excitations: vec![1.0; k],
    })
}

/// K points on the most-square ceil(sqrt(K))-column grid in the horizontal
/// plane, spacing 0.5 m, centroid re-centered on the region center.
pub fn planar_layout(cfg: &EnvConfig) -> Result<StaticLayout, EnvError> {
    let k = cfg.n_uavs;
    let cols = (k as f64).sqrt().ceil() as usize;
    let points: Vec<[f64; 3]> = (0..k)
        .map(|i| {
            let row = i / cols;
            let col = i % cols;
            [
                col as f64 * FORMATION_SPACING_M,
                row as f64 * FORMATION_SPACING_M,
                0.0,
            ]
        })
        .collect();
    let positions = centered(points, cfg.region_center());
    check_fits(&positions, cfg, "planar")?;
    Ok(StaticLayout {
        positions,
        excitations: vec![1.0; k],
    })
}

/// K points equally spaced on a 0.5 m-radius horizontal circle, centroid on
/// the region center. A single UAV degenerates to the center itself.
pub fn circular_layout(cfg: &EnvConfig) -> StaticLayout {
    let k = cfg.n_uavs;
    let points: Vec<[f64; 3]> = (0..k)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            [
                FORMATION_SPACING_M * angle.cos(),
                FORMATION_SPACING_M * angle.sin(),
                0.0,
            ]
        })
        .collect();
    StaticLayout {
        positions: centered(points, cfg.region_center()),
        excitations: vec![1.0; k],
    }
}

pub fn layout_for(strategy: BaselineStrategy, cfg: &EnvConfig) -> Result<Option<StaticLayout>, EnvError> {
    match strategy {
        BaselineStrategy::Random => Ok(None),
        BaselineStrategy::Laa => linear_layout(cfg).map(Some),
        BaselineStrategy::Paa => planar_layout(cfg).map(Some),
        BaselineStrategy::Caa => Ok(Some(circular_layout(cfg))),
    }
}

/// A deployment policy maps the current observation to the next action.
pub trait Policy {
    fn act(&mut self, observation: &Observation, cfg: &EnvConfig) -> Action;
}

/// Re-expresses a move toward `target` as a clipped displacement command.
fn displacement_command(current: f64, target: f64, reach: f64) -> f64 {
    ((target - current) / reach).clamp(-1.0, 1.0)
}

/// Uniform random positions and excitations every slot.
pub struct RandomPolicy {
    rng: ChaCha12Rng,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }
}

impl Policy for RandomPolicy {
    fn act(&mut self, observation: &Observation, cfg: &EnvConfig) -> Action {
        let (positions, _) = decode_observation(cfg, observation);
        let reach = cfg.v_max * cfg.slot_seconds;
        let mut values = Vec::with_capacity(cfg.action_dim());
        for position in positions.iter() {
            for axis in 0..3 {
                let target = self
                    .rng
                    .random_range(cfg.bounds_min[axis]..=cfg.bounds_max[axis]);
                values.push(displacement_command(position[axis], target, reach));
            }
            let excitation: f64 = self.rng.random_range(0.0..=1.0);
            values.push(2.0 * excitation - 1.0);
        }
        Action(values)
    }
}

/// Flies each UAV toward its fixed formation slot and holds full excitation.
pub struct StaticLayoutPolicy {
    layout: StaticLayout,
}

impl StaticLayoutPolicy {
    pub fn new(layout: StaticLayout) -> Self {
        Self { layout }
    }
}

impl Policy for StaticLayoutPolicy {
    fn act(&mut self, observation: &Observation, cfg: &EnvConfig) -> Action {
        let (positions, _) = decode_observation(cfg, observation);
        let reach = cfg.v_max * cfg.slot_seconds;
        let mut values = Vec::with_capacity(cfg.action_dim());
        for (k, (position, target)) in positions.iter().zip(&self.layout.positions).enumerate() {
            for axis in 0..3 {
                values.push(displacement_command(position[axis], target[axis], reach));
            }
            values.push(2.0 * self.layout.excitations[k] - 1.0);
        }
        Action(values)
    }
}

pub fn policy_for(strategy: BaselineStrategy, cfg: &EnvConfig, seed: u64) -> Result<Box<dyn Policy>, EnvError> {
    Ok(match layout_for(strategy, cfg)? {
        None => Box::new(RandomPolicy::new(seed)),
        Some(layout) => Box::new(StaticLayoutPolicy::new(layout)),
    })
}

/// Evaluation aggregates over episodes: mean and standard deviation of the
/// per-episode means of per-step secrecy rate and energy, plus the mean
/// episode reward.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyMetrics {
    pub episodes: usize,
    pub secrecy_mean_bpshz: f64,
    pub secrecy_std_bpshz: f64,
    pub energy_mean_j: f64,
    pub energy_std_j: f64,
    pub reward_mean: f64,
    pub reward_std: f64,
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

/// Rolls out a policy for a number of episodes and aggregates the metrics.
/// Episode e uses the derived seed (seed, e) so runs are reproducible and
/// episodes independent.
pub fn evaluate_policy<P: Policy + ?Sized>(
    env: &mut SwarmEnv,
    policy: &mut P,
    episodes: usize,
    seed: u64,
) -> Result<PolicyMetrics, EnvError> {
    assert!(episodes >= 1, "evaluation needs at least one episode");
    let cfg = env.config().clone();
    let mut secrecy = Vec::with_capacity(episodes);
    let mut energy = Vec::with_capacity(episodes);
    let mut rewards = Vec::with_capacity(episodes);
    for episode in 0..episodes {
        let mut observation = env.reset(derive_seed(seed, episode as u64))?;
        let mut outcomes = Vec::with_capacity(cfg.slots_per_episode);
        loop {
            let action = policy.act(&observation, &cfg);
            let outcome = env.step(&action)?;
            observation = outcome.observation.clone();
            let terminal = outcome.terminal;
            outcomes.push(outcome);
            if terminal {
                break;
            }
        }
        let summary = episode_return(&outcomes)?;
        secrecy.push(summary.mean_secrecy_bpshz);
        energy.push(summary.mean_energy_j);
        rewards.push(summary.total_reward);
    }
    let (secrecy_mean_bpshz, secrecy_std_bpshz) = mean_std(&secrecy);
    let (energy_mean_j, energy_std_j) = mean_std(&energy);
    let (reward_mean, reward_std) = mean_std(&rewards);
    Ok(PolicyMetrics {
        episodes,
        secrecy_mean_bpshz,
        secrecy_std_bpshz,
        energy_mean_j,
        energy_std_j,
        reward_mean,
        reward_std,
    })
}
