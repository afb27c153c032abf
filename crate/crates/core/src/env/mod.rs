//! Episodic decision process for the beamforming swarm.
//!
//! Each time slot the agent commands per-UAV displacements and excitation
//! weights; the environment moves the swarm, steers the virtual array at the
//! base station, advances the eavesdropper along its Gauss-Markov path, and
//! pays out a reward that trades secrecy rate against flight energy, minus a
//! penalty for separation violations.

pub mod mobility;
pub mod synthetic;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beamforming::{ArrayGeometry, Direction, GainField, GainQuadrature, SphereGrid};
use crate::channel::{self, ChannelParams, LinkGeometry};
use crate::energy::{self, RotorcraftParams};
use mobility::{EavesdropperState, GaussMarkovParams};

/// Attempt budget for the minimum-separation placement sampler.
const PLACEMENT_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("invalid environment configuration: {0}")]
    Config(String),
    #[error("could not place {n_uavs} UAVs at separation {d_min} m within {PLACEMENT_ATTEMPTS} attempts; the deployment box is too small")]
    Placement { n_uavs: usize, d_min: f64 },
    #[error("action has {got} entries but the environment expects {expected}")]
    ActionDimension { expected: usize, got: usize },
    #[error("episode already terminated; call reset first")]
    EpisodeFinished,
}

/// Everything that defines one environment instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvConfig {
    /// Number of UAVs (array elements).
    pub n_uavs: usize,
    /// Time slots per episode.
    pub slots_per_episode: usize,
    /// Slot duration, s.
    pub slot_seconds: f64,
    /// Deployment box, m.
    pub bounds_min: [f64; 3],
    pub bounds_max: [f64; 3],
    /// Base-station position, m.
    pub rbs_position: [f64; 3],
    /// Per-axis speed bound, m/s.
    pub v_max: f64,
    /// Minimum pairwise UAV separation, m.
    pub d_min: f64,
    /// Reward weight on the secrecy rate, per bps/Hz.
    pub secrecy_weight: f64,
    /// Reward weight on flight energy, per kJ.
    pub energy_weight: f64,
    /// Penalty per violating UAV pair and slot.
    pub violation_penalty: f64,
    /// Radiated power per element at unit excitation, W.
    pub element_power_w: f64,
    pub channel: ChannelParams,
    pub rotor: RotorcraftParams,
    pub quadrature: GainQuadrature,
    pub eavesdropper: GaussMarkovParams,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            n_uavs: 8,
            slots_per_episode: 100,
            slot_seconds: 1.0,
            bounds_min: [0.0, 0.0, 70.0],
            bounds_max: [40.0, 40.0, 120.0],
            rbs_position: [600.0, 600.0, 15.0],
            v_max: 30.0,
            d_min: 0.5,
            secrecy_weight: 1.0,
            energy_weight: 1.0,
            violation_penalty: 10.0,
            element_power_w: 0.1,
            channel: ChannelParams::default(),
            rotor: RotorcraftParams::default(),
            quadrature: GainQuadrature::default(),
            eavesdropper: GaussMarkovParams::default(),
        }
    }
}

impl EnvConfig {
    pub fn observation_dim(&self) -> usize {
        3 * self.n_uavs + 2
    }

    pub fn action_dim(&self) -> usize {
        4 * self.n_uavs
    }

    /// Center of the monitoring region at the mid altitude; static baseline
    /// formations are anchored here.
    pub fn region_center(&self) -> [f64; 3] {
        [
            0.5 * (self.bounds_min[0] + self.bounds_max[0]),
            0.5 * (self.bounds_min[1] + self.bounds_max[1]),
            0.5 * (self.bounds_min[2] + self.bounds_max[2]),
        ]
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let fail = |msg: String| Err(EnvError::Config(msg));
        if self.n_uavs == 0 {
            return fail("n_uavs must be at least 1".into());
        }
        if self.slots_per_episode == 0 {
            return fail("slots_per_episode must be at least 1".into());
        }
        if self.slot_seconds <= 0.0 {
            return fail(format!("slot_seconds must be positive, got {}", self.slot_seconds));
        }
        for axis in 0..3 {
            if self.bounds_min[axis] >= self.bounds_max[axis] {
                return fail(format!(
                    "deployment bounds are not ordered on axis {axis}: [{}, {}]",
                    self.bounds_min[axis], self.bounds_max[axis]
                ));
            }
        }
        if self.v_max <= 0.0 {
            return fail(format!("v_max must be positive, got {}", self.v_max));
        }
        if self.d_min < 0.0 {
            return fail(format!("d_min must be non-negative, got {}", self.d_min));
        }
        if self.secrecy_weight < 0.0 || self.energy_weight < 0.0 || self.violation_penalty < 0.0 {
            return fail("reward weights and penalty must be non-negative".into());
        }
        if self.element_power_w < 0.0 {
            return fail(format!("element_power_w must be non-negative, got {}", self.element_power_w));
        }
        if self.quadrature.n_theta < 2 || self.quadrature.n_phi < 2 {
            return fail("quadrature needs at least 2 nodes per axis".into());
        }
        self.channel.validate().or_else(|e| fail(e))?;
        self.rotor.validate().or_else(|e| fail(e))?;
        self.eavesdropper.validate().or_else(|e| fail(e))?;
        Ok(())
    }
}

/// Per-UAV kinematic and excitation state at one time slot.
#[derive(Clone, Debug, PartialEq)]
pub struct SwarmState {
    pub positions: Vec<[f64; 3]>,
    pub velocities: Vec<[f64; 3]>,
    pub excitations: Vec<f64>,
}

/// Flat observation vector: normalized UAV positions then the normalized
/// eavesdropper planar position, all in [-1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Observation(pub Vec<f64>);

impl Observation {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Flat action vector of length 4K: per UAV three displacement commands and
/// one excitation command, all in [-1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Action(pub Vec<f64>);

impl Action {
    /// Wraps raw values, clamping every entry into the action box.
    pub fn clamped(values: Vec<f64>) -> Self {
        Self(values.into_iter().map(|v| v.clamp(-1.0, 1.0)).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Measured quantities behind one step's reward.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct StepInfo {
    pub secrecy_rate_bpshz: f64,
    pub energy_j: f64,
    pub violations: usize,
    pub rate_rbs_bpshz: f64,
    pub rate_eav_bpshz: f64,
    pub gain_rbs: f64,
    pub gain_eav: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub observation: Observation,
    pub reward: f64,
    pub terminal: bool,
    pub info: StepInfo,
}

/// Anything the agent can train against.
pub trait Environment {
    fn observation_dim(&self) -> usize;
    fn action_dim(&self) -> usize;
    fn reset(&mut self, seed: u64) -> Result<Observation, EnvError>;
    fn step(&mut self, action: &Action) -> Result<StepOutcome, EnvError>;
}

/// Normalizes a value from `[lo, hi]` into `[-1, 1]`.
fn normalize(v: f64, lo: f64, hi: f64) -> f64 {
    2.0 * (v - lo) / (hi - lo) - 1.0
}

fn denormalize(v: f64, lo: f64, hi: f64) -> f64 {
    lo + (v + 1.0) * (hi - lo) / 2.0
}

/// Encodes positions and the eavesdropper location into the observation.
pub fn encode_observation(cfg: &EnvConfig, positions: &[[f64; 3]], eav_xy: [f64; 2]) -> Observation {
    let mut values = Vec::with_capacity(cfg.observation_dim());
    for p in positions {
        for axis in 0..3 {
            values.push(normalize(p[axis], cfg.bounds_min[axis], cfg.bounds_max[axis]));
        }
    }
    let roam = &cfg.eavesdropper;
    values.push(normalize(eav_xy[0], roam.roam_min[0], roam.roam_max[0]));
    values.push(normalize(eav_xy[1], roam.roam_min[1], roam.roam_max[1]));
    Observation(values)
}

/// Inverse of [`encode_observation`]; exact on the box up to rounding.
pub fn decode_observation(cfg: &EnvConfig, obs: &Observation) -> (Vec<[f64; 3]>, [f64; 2]) {
    assert_eq!(obs.len(), cfg.observation_dim(), "observation length mismatch");
    let v = obs.as_slice();
    let positions = (0..cfg.n_uavs)
        .map(|k| {
            let mut p = [0.0; 3];
            for axis in 0..3 {
                p[axis] = denormalize(v[3 * k + axis], cfg.bounds_min[axis], cfg.bounds_max[axis]);
            }
            p
        })
        .collect();
    let roam = &cfg.eavesdropper;
    let eav = [
        denormalize(v[3 * cfg.n_uavs], roam.roam_min[0], roam.roam_max[0]),
        denormalize(v[3 * cfg.n_uavs + 1], roam.roam_min[1], roam.roam_max[1]),
    ];
    (positions, eav)
}

/// Maps raw action commands onto target positions and excitation weights.
///
/// Displacements scale with `v_max * dt` per axis so the speed constraint
/// holds by construction; targets are clipped into the deployment box; the
/// excitation command in [-1, 1] maps affinely onto [0, 1].
pub fn decode_action(action: &Action, current: &SwarmState, cfg: &EnvConfig) -> (Vec<[f64; 3]>, Vec<f64>) {
    assert_eq!(action.len(), cfg.action_dim(), "action length mismatch");
    let a = action.as_slice();
    let reach = cfg.v_max * cfg.slot_seconds;
    let mut targets = Vec::with_capacity(cfg.n_uavs);
    let mut excitations = Vec::with_capacity(cfg.n_uavs);
    for k in 0..cfg.n_uavs {
        let base = 4 * k;
        let mut target = [0.0; 3];
        for axis in 0..3 {
            let cmd = a[base + axis].clamp(-1.0, 1.0);
            target[axis] = (current.positions[k][axis] + cmd * reach)
                .clamp(cfg.bounds_min[axis], cfg.bounds_max[axis]);
        }
        targets.push(target);
        let cmd = a[base + 3].clamp(-1.0, 1.0);
        excitations.push((cmd + 1.0) / 2.0);
    }
    (targets, excitations)
}

/// Counts UAV pairs closer than the minimum separation.
pub fn separation_violations(positions: &[[f64; 3]], d_min: f64) -> usize {
    let mut count = 0;
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let dx = positions[i][0] - positions[j][0];
            let dy = positions[i][1] - positions[j][1];
            let dz = positions[i][2] - positions[j][2];
            if (dx * dx + dy * dy + dz * dz).sqrt() < d_min {
                count += 1;
            }
        }
    }
    count
}

/// The swarm environment. One instance is single-threaded; run independent
/// instances with independent seeds for parallel evaluation.
pub struct SwarmEnv {
    cfg: EnvConfig,
    grid: SphereGrid,
    state: SwarmState,
    eavesdropper: EavesdropperState,
    slot: usize,
    rng: ChaCha12Rng,
}

impl SwarmEnv {
    pub fn new(cfg: EnvConfig) -> Result<Self, EnvError> {
        cfg.validate()?;
        let grid = cfg.quadrature.grid();
        let n = cfg.n_uavs;
        Ok(Self {
            state: SwarmState {
                positions: vec![cfg.region_center(); n],
                velocities: vec![[0.0; 3]; n],
                excitations: vec![0.5; n],
            },
            eavesdropper: EavesdropperState {
                position_xy: [
                    cfg.eavesdropper.roam_min[0],
                    cfg.eavesdropper.roam_min[1],
                ],
                speed: cfg.eavesdropper.mean_speed,
                heading: 0.0,
            },
            slot: cfg.slots_per_episode, // terminal until reset
            grid,
            rng: ChaCha12Rng::seed_from_u64(0),
            cfg,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    pub fn swarm(&self) -> &SwarmState {
        &self.state
    }

    pub fn eavesdropper(&self) -> &EavesdropperState {
        &self.eavesdropper
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    fn observe(&self) -> Observation {
        encode_observation(&self.cfg, &self.state.positions, self.eavesdropper.position_xy)
    }

    /// Draws positions one UAV at a time, rejecting draws that violate the
    /// minimum separation against the ones already placed.
    fn place_swarm(&mut self) -> Result<Vec<[f64; 3]>, EnvError> {
        let cfg = &self.cfg;
        let mut positions: Vec<[f64; 3]> = Vec::with_capacity(cfg.n_uavs);
        for _ in 0..cfg.n_uavs {
            let mut placed = false;
            for _ in 0..PLACEMENT_ATTEMPTS {
                let candidate = [
                    self.rng.random_range(cfg.bounds_min[0]..=cfg.bounds_max[0]),
                    self.rng.random_range(cfg.bounds_min[1]..=cfg.bounds_max[1]),
                    self.rng.random_range(cfg.bounds_min[2]..=cfg.bounds_max[2]),
                ];
                let clear = positions.iter().all(|p| {
                    let dx = p[0] - candidate[0];
                    let dy = p[1] - candidate[1];
                    let dz = p[2] - candidate[2];
                    (dx * dx + dy * dy + dz * dz).sqrt() >= cfg.d_min
                });
                if clear {
                    positions.push(candidate);
                    placed = true;
                    break;
                }
            }
            if !placed {
                return Err(EnvError::Placement {
                    n_uavs: cfg.n_uavs,
                    d_min: cfg.d_min,
                });
            }
        }
        Ok(positions)
    }
}

impl Environment for SwarmEnv {
    fn observation_dim(&self) -> usize {
        self.cfg.observation_dim()
    }

    fn action_dim(&self) -> usize {
        self.cfg.action_dim()
    }

    fn reset(&mut self, seed: u64) -> Result<Observation, EnvError> {
        self.rng = ChaCha12Rng::seed_from_u64(seed);
        let positions = self.place_swarm()?;
        self.state = SwarmState {
            velocities: vec![[0.0; 3]; self.cfg.n_uavs],
            excitations: vec![0.5; self.cfg.n_uavs],
            positions,
        };
        let gm = &self.cfg.eavesdropper;
        self.eavesdropper = EavesdropperState {
            position_xy: [
                self.rng.random_range(gm.roam_min[0]..=gm.roam_max[0]),
                self.rng.random_range(gm.roam_min[1]..=gm.roam_max[1]),
            ],
            speed: gm.mean_speed,
            heading: self
                .rng
                .random_range(-std::f64::consts::PI..std::f64::consts::PI),
        };
        self.slot = 0;
        Ok(self.observe())
    }

    fn step(&mut self, action: &Action) -> Result<StepOutcome, EnvError> {
        if self.slot >= self.cfg.slots_per_episode {
            return Err(EnvError::EpisodeFinished);
        }
        if action.len() != self.cfg.action_dim() {
            return Err(EnvError::ActionDimension {
                expected: self.cfg.action_dim(),
                got: action.len(),
            });
        }
        let cfg = self.cfg.clone();
        let (targets, excitations) = decode_action(action, &self.state, &cfg);

        let velocities: Vec<[f64; 3]> = targets
            .iter()
            .zip(&self.state.positions)
            .map(|(t, p)| {
                [
                    (t[0] - p[0]) / cfg.slot_seconds,
                    (t[1] - p[1]) / cfg.slot_seconds,
                    (t[2] - p[2]) / cfg.slot_seconds,
                ]
            })
            .collect();
        self.state = SwarmState {
            positions: targets,
            velocities,
            excitations,
        };

        // Beam steered at the base station; the eavesdropper sees the same
        // steered pattern from its own direction, so one sphere integral
        // serves both gains.
        let geometry = ArrayGeometry::from_swarm(
            &self.state.positions,
            &self.state.excitations,
            cfg.channel.carrier_hz,
        )
        .expect("swarm is non-empty");
        let center = geometry.center();
        let steer = Direction::between(center, cfg.rbs_position)
            .ok_or_else(|| EnvError::Config("array center coincides with the base station".into()))?;
        let eav_pos = [
            self.eavesdropper.position_xy[0],
            self.eavesdropper.position_xy[1],
            0.0,
        ];
        let eav_dir = Direction::between(center, eav_pos)
            .ok_or_else(|| EnvError::Config("array center coincides with the eavesdropper".into()))?;
        let field = GainField::new(&geometry, steer, &self.grid);
        let gain_rbs = field.gain(steer);
        let gain_eav = field.gain(eav_dir);

        let tx_power = cfg.element_power_w
            * self
                .state
                .excitations
                .iter()
                .map(|i| i * i)
                .sum::<f64>();
        let g_rbs = channel::average_channel_gain(
            &LinkGeometry::new(center, cfg.rbs_position),
            &cfg.channel,
        )
        .map_err(|e| EnvError::Config(e.to_string()))?;
        let g_eav = channel::average_channel_gain(&LinkGeometry::new(center, eav_pos), &cfg.channel)
            .map_err(|e| EnvError::Config(e.to_string()))?;
        let rate_rbs = channel::link_rate(tx_power, g_rbs, gain_rbs, &cfg.channel);
        let rate_eav = channel::link_rate(tx_power, g_eav, gain_eav, &cfg.channel);
        let secrecy = channel::secrecy_rate(rate_rbs, rate_eav);

        let energy_j = energy::swarm_energy(&self.state.velocities, cfg.slot_seconds, &cfg.rotor);
        let violations = separation_violations(&self.state.positions, cfg.d_min);

        let reward = cfg.secrecy_weight * secrecy - cfg.energy_weight * energy_j / 1000.0
            - cfg.violation_penalty * violations as f64;

        self.eavesdropper = mobility::gauss_markov_step(
            &self.eavesdropper,
            &cfg.eavesdropper,
            cfg.slot_seconds,
            &mut self.rng,
        );

        self.slot += 1;
        Ok(StepOutcome {
            observation: self.observe(),
            reward,
            terminal: self.slot >= cfg.slots_per_episode,
            info: StepInfo {
                secrecy_rate_bpshz: secrecy,
                energy_j,
                violations,
                rate_rbs_bpshz: rate_rbs,
                rate_eav_bpshz: rate_eav,
                gain_rbs,
                gain_eav,
            },
        })
    }
}

/// Episode aggregates: total reward plus per-step means.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeSummary {
    pub total_reward: f64,
    pub mean_secrecy_bpshz: f64,
    pub mean_energy_j: f64,
    pub steps: usize,
}

/// Sums and per-step means over one episode's outcomes.
pub fn episode_return(outcomes: &[StepOutcome]) -> Result<EpisodeSummary, EnvError> {
    if outcomes.is_empty() {
        return Err(EnvError::Config("episode_return needs at least one outcome".into()));
    }
    let n = outcomes.len() as f64;
    Ok(EpisodeSummary {
        total_reward: outcomes.iter().map(|o| o.reward).sum(),
        mean_secrecy_bpshz: outcomes.iter().map(|o| o.info.secrecy_rate_bpshz).sum::<f64>() / n,
        mean_energy_j: outcomes.iter().map(|o| o.info.energy_j).sum::<f64>() / n,
        steps: outcomes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_cfg() -> EnvConfig {
        EnvConfig {
            n_uavs: 4,
            slots_per_episode: 5,
            quadrature: GainQuadrature::new(31, 60),
            ..EnvConfig::default()
        }
    }

    #[test]
    fn reset_is_deterministic_and_respects_separation() {
        let cfg = EnvConfig {
            quadrature: GainQuadrature::new(31, 60),
            ..EnvConfig::default()
        };
        let mut env_a = SwarmEnv::new(cfg.clone()).unwrap();
        let mut env_b = SwarmEnv::new(cfg).unwrap();
        let obs_a = env_a.reset(123).unwrap();
        let obs_b = env_b.reset(123).unwrap();
        assert_eq!(obs_a, obs_b);
        assert_eq!(obs_a.len(), 3 * 8 + 2);
        assert_eq!(separation_violations(&env_a.swarm().positions, 0.5), 0);
    }

    #[test]
    fn reset_fails_when_box_cannot_hold_the_swarm() {
        let cfg = EnvConfig {
            n_uavs: 30,
            bounds_min: [0.0, 0.0, 70.0],
            bounds_max: [1.0, 1.0, 71.0],
            d_min: 1.5,
            quadrature: GainQuadrature::new(31, 60),
            ..EnvConfig::default()
        };
        let mut env = SwarmEnv::new(cfg).unwrap();
        match env.reset(5) {
            Err(EnvError::Placement { n_uavs: 30, .. }) => {}
            other => panic!("expected placement failure, got {other:?}"),
        }
    }

    #[test]
    fn zero_action_holds_position_and_half_excitation() {
        let cfg = small_cfg();
        let state = SwarmState {
            positions: vec![[10.0, 10.0, 90.0]; 4],
            velocities: vec![[0.0; 3]; 4],
            excitations: vec![1.0; 4],
        };
        let action = Action(vec![0.0; cfg.action_dim()]);
        let (targets, excitations) = decode_action(&action, &state, &cfg);
        assert_eq!(targets, state.positions);
        assert_eq!(excitations, vec![0.5; 4]);
    }

    #[test]
    fn full_displacement_scales_with_reach_and_clips() {
        let cfg = small_cfg();
        let state = SwarmState {
            positions: vec![[5.0, 20.0, 90.0]; 4],
            velocities: vec![[0.0; 3]; 4],
            excitations: vec![1.0; 4],
        };
        let mut raw = vec![0.0; cfg.action_dim()];
        raw[0] = 1.0; // +30 m in x: 5 -> 35, inside the box
        raw[4] = -1.0; // -30 m in x for UAV 1: clipped at 0
        let action = Action(raw);
        let (targets, _) = decode_action(&action, &state, &cfg);
        assert!((targets[0][0] - 35.0).abs() < 1e-12);
        assert_eq!(targets[1][0], 0.0);
    }

    #[test]
    fn observation_roundtrip_is_identity() {
        let cfg = small_cfg();
        let positions = vec![
            [0.0, 40.0, 70.0],
            [40.0, 0.0, 120.0],
            [13.7, 22.1, 95.5],
            [1.0, 2.0, 71.0],
        ];
        let eav = [260.0, 77.5];
        let obs = encode_observation(&cfg, &positions, eav);
        assert!(obs.as_slice().iter().all(|v| (-1.0..=1.0).contains(v)));
        let (p2, e2) = decode_observation(&cfg, &obs);
        for (a, b) in positions.iter().zip(&p2) {
            for axis in 0..3 {
                assert!((a[axis] - b[axis]).abs() < 1e-12);
            }
        }
        assert!((eav[0] - e2[0]).abs() < 1e-12);
        assert!((eav[1] - e2[1]).abs() < 1e-12);
    }

    #[test]
    fn hovering_swarm_burns_hover_energy() {
        let cfg = EnvConfig {
            n_uavs: 8,
            slots_per_episode: 3,
            quadrature: GainQuadrature::new(31, 60),
            ..EnvConfig::default()
        };
        let mut env = SwarmEnv::new(cfg.clone()).unwrap();
        env.reset(7).unwrap();
        let outcome = env.step(&Action(vec![0.0; cfg.action_dim()])).unwrap();
        assert!((outcome.info.energy_j - 1326.7).abs() < 1.0, "{}", outcome.info.energy_j);
        assert_eq!(outcome.info.violations, 0);
    }

    #[test]
    fn forced_proximity_is_penalised_not_repositioned() {
        let cfg = EnvConfig {
            n_uavs: 2,
            slots_per_episode: 4,
            d_min: 5.0,
            quadrature: GainQuadrature::new(31, 60),
            ..EnvConfig::default()
        };
        let mut env = SwarmEnv::new(cfg.clone()).unwrap();
        env.reset(11).unwrap();
        // Drive both UAVs to the same corner; they end up well within d_min.
        let mut raw = vec![0.0; cfg.action_dim()];
        for k in 0..2 {
            raw[4 * k] = -1.0;
            raw[4 * k + 1] = -1.0;
            raw[4 * k + 2] = -1.0;
        }
        let mut last = None;
        for _ in 0..3 {
            last = Some(env.step(&Action(raw.clone())).unwrap());
        }
        let outcome = last.unwrap();
        assert_eq!(outcome.info.violations, 1);
        let expected = cfg.secrecy_weight * outcome.info.secrecy_rate_bpshz
            - cfg.energy_weight * outcome.info.energy_j / 1000.0
            - cfg.violation_penalty;
        assert!((outcome.reward - expected).abs() < 1e-9);
        // Both UAVs really sit at the corner, not pushed apart.
        let p = &env.swarm().positions;
        assert!((p[0][0] - p[1][0]).abs() < 1e-9);
    }

    #[test]
    fn reward_decomposition_matches_info_fields() {
        let cfg = small_cfg();
        let mut env = SwarmEnv::new(cfg.clone()).unwrap();
        env.reset(100).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..cfg.slots_per_episode {
            let raw: Vec<f64> = (0..cfg.action_dim())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let outcome = env.step(&Action(raw)).unwrap();
            let expected = cfg.secrecy_weight * outcome.info.secrecy_rate_bpshz
                - cfg.energy_weight * outcome.info.energy_j / 1000.0
                - cfg.violation_penalty * outcome.info.violations as f64;
            assert!((outcome.reward - expected).abs() < 1e-9);
        }
        assert!(env.step(&Action(vec![0.0; cfg.action_dim()])).is_err());
    }

    #[test]
    fn eavesdropper_under_the_beam_clamps_secrecy_to_zero() {
        // Eavesdropper roams directly beneath the swarm while the base
        // station sits far away: the wiretap link dominates and the secrecy
        // component clamps at zero.
        let cfg = EnvConfig {
            n_uavs: 4,
            slots_per_episode: 3,
            rbs_position: [5000.0, 5000.0, 15.0],
            eavesdropper: crate::env::mobility::GaussMarkovParams {
                roam_min: [15.0, 15.0],
                roam_max: [25.0, 25.0],
                ..Default::default()
            },
            quadrature: GainQuadrature::new(31, 60),
            ..EnvConfig::default()
        };
        let mut env = SwarmEnv::new(cfg.clone()).unwrap();
        env.reset(2).unwrap();
        let outcome = env.step(&Action(vec![0.0; cfg.action_dim()])).unwrap();
        assert!(outcome.info.rate_eav_bpshz > outcome.info.rate_rbs_bpshz);
        assert_eq!(outcome.info.secrecy_rate_bpshz, 0.0);
    }

    #[test]
    fn wrong_action_length_is_rejected() {
        let cfg = small_cfg();
        let mut env = SwarmEnv::new(cfg).unwrap();
        env.reset(1).unwrap();
        let err = env.step(&Action(vec![0.0; 3])).unwrap_err();
        assert_eq!(err, EnvError::ActionDimension { expected: 16, got: 3 });
    }

    #[test]
    fn identical_seeds_and_actions_reproduce_trajectories() {
        let cfg = small_cfg();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let actions: Vec<Action> = (0..5)
            .map(|_| {
                Action(
                    (0..cfg.action_dim())
                        .map(|_| rng.random_range(-1.0..1.0))
                        .collect(),
                )
            })
            .collect();
        let run = |cfg: &EnvConfig| {
            let mut env = SwarmEnv::new(cfg.clone()).unwrap();
            let mut trace = vec![env.reset(77).unwrap().0];
            for a in &actions {
                let out = env.step(a).unwrap();
                trace.push(out.observation.0.clone());
                trace.push(vec![out.reward]);
            }
            trace
        };
        assert_eq!(run(&cfg), run(&cfg));
    }

    #[test]
    fn box_speed_and_excitation_constraints_hold_after_every_step() {
        let cfg = small_cfg();
        let mut env = SwarmEnv::new(cfg.clone()).unwrap();
        env.reset(31).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        let reach = cfg.v_max * cfg.slot_seconds;
        for _ in 0..cfg.slots_per_episode {
            let prev = env.swarm().positions.clone();
            let raw: Vec<f64> = (0..cfg.action_dim())
                .map(|_| rng.random_range(-3.0..3.0)) // out-of-box commands too
                .collect();
            env.step(&Action::clamped(raw)).unwrap();
            let state = env.swarm();
            for (k, p) in state.positions.iter().enumerate() {
                for axis in 0..3 {
                    assert!(p[axis] >= cfg.bounds_min[axis] && p[axis] <= cfg.bounds_max[axis]);
                    assert!((p[axis] - prev[k][axis]).abs() <= reach + 1e-9);
                }
            }
            assert!(state.excitations.iter().all(|e| (0.0..=1.0).contains(e)));
        }
    }

    #[test]
    fn eavesdropper_stays_in_roam_bounds() {
        let cfg = EnvConfig {
            n_uavs: 2,
            slots_per_episode: 200,
            quadrature: GainQuadrature::new(11, 20),
            ..EnvConfig::default()
        };
        let mut env = SwarmEnv::new(cfg.clone()).unwrap();
        env.reset(3).unwrap();
        let gm = cfg.eavesdropper;
        for _ in 0..cfg.slots_per_episode {
            env.step(&Action(vec![0.0; cfg.action_dim()])).unwrap();
            let p = env.eavesdropper().position_xy;
            assert!(p[0] >= gm.roam_min[0] && p[0] <= gm.roam_max[0]);
            assert!(p[1] >= gm.roam_min[1] && p[1] <= gm.roam_max[1]);
        }
    }

    #[test]
    fn episode_return_aggregates() {
        let outcome = |reward: f64, secrecy: f64, energy: f64| StepOutcome {
            observation: Observation(vec![]),
            reward,
            terminal: false,
            info: StepInfo {
                secrecy_rate_bpshz: secrecy,
                energy_j: energy,
                ..StepInfo::default()
            },
        };
        assert!(episode_return(&[]).is_err());
        let single = episode_return(&[outcome(1.5, 2.0, 100.0)]).unwrap();
        assert_eq!(single.total_reward, 1.5);
        assert_eq!(single.mean_secrecy_bpshz, 2.0);
        assert_eq!(single.mean_energy_j, 100.0);
        let constant = episode_return(&[
            outcome(2.0, 3.0, 50.0),
            outcome(2.0, 3.0, 50.0),
            outcome(2.0, 3.0, 50.0),
        ])
        .unwrap();
        assert_eq!(constant.total_reward, 6.0);
        assert_eq!(constant.mean_secrecy_bpshz, 3.0);
        assert_eq!(constant.mean_energy_j, 50.0);
    }

    #[test]
    fn episode_return_matches_recompute_oracle() {
        let cfg = small_cfg();
        let mut env = SwarmEnv::new(cfg.clone()).unwrap();
        env.reset(55).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(56);
        let outcomes: Vec<StepOutcome> = (0..cfg.slots_per_episode)
            .map(|_| {
                let raw: Vec<f64> = (0..cfg.action_dim())
                    .map(|_| rng.random_range(-1.0..1.0))
                    .collect();
                env.step(&Action(raw)).unwrap()
            })
            .collect();
        let summary = episode_return(&outcomes).unwrap();
        let total: f64 = outcomes.iter().map(|o| o.reward).sum();
        let secrecy: f64 =
            outcomes.iter().map(|o| o.info.secrecy_rate_bpshz).sum::<f64>() / outcomes.len() as f64;
        assert!((summary.total_reward - total).abs() < 1e-12);
        assert!((summary.mean_secrecy_bpshz - secrecy).abs() < 1e-12);
    }

    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    proptest! {
        #[test]
        fn normalization_is_bijective_on_the_box(
            x in 0.0f64..40.0,
            y in 0.0f64..40.0,
            z in 70.0f64..120.0,
        ) {
            let cfg = EnvConfig::default();
            for (axis, v) in [x, y, z].into_iter().enumerate() {
                let n = normalize(v, cfg.bounds_min[axis], cfg.bounds_max[axis]);
                prop_assert!((-1.0..=1.0).contains(&n));
                let back = denormalize(n, cfg.bounds_min[axis], cfg.bounds_max[axis]);
                prop_assert!((back - v).abs() < 1e-12);
            }
        }
    }
}
