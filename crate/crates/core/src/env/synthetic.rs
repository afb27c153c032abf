//! Synthetic control tasks with known optima, used to validate the learning
//! stack end to end without the physics in the loop.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::{Action, EnvError, Environment, Observation, StepInfo, StepOutcome};

/// One-step contextual bandit: the state is uniform in [-1, 1]^n, the reward
/// is -||a - target(s)||^2 with target(s) = gain * s, so the optimum action
/// is known in closed form and the best possible reward is zero.
pub struct QuadraticBandit {
    dim: usize,
    target_gain: f64,
    state: Vec<f64>,
    terminal: bool,
    rng: ChaCha12Rng,
}

impl QuadraticBandit {
    pub fn new(dim: usize, target_gain: f64) -> Self {
        assert!(dim > 0);
        assert!(target_gain.abs() <= 1.0, "target must stay inside the action box");
        Self {
            dim,
            target_gain,
            state: vec![0.0; dim],
            terminal: true,
            rng: ChaCha12Rng::seed_from_u64(0),
        }
    }

    pub fn optimal_action(&self) -> Vec<f64> {
        self.state.iter().map(|s| s * self.target_gain).collect()
    }
}

impl Environment for QuadraticBandit {
    fn observation_dim(&self) -> usize {
        self.dim
    }

    fn action_dim(&self) -> usize {
        self.dim
    }

    fn reset(&mut self, seed: u64) -> Result<Observation, EnvError> {
        self.rng = ChaCha12Rng::seed_from_u64(seed);
        self.state = (0..self.dim).map(|_| self.rng.random_range(-1.0..1.0)).collect();
        self.terminal = false;
        Ok(Observation(self.state.clone()))
    }

    fn step(&mut self, action: &Action) -> Result<StepOutcome, EnvError> {
        if self.terminal {
            return Err(EnvError::EpisodeFinished);
        }
        if action.len() != self.dim {
            return Err(EnvError::ActionDimension {
                expected: self.dim,
                got: action.len(),
            });
        }
        let reward: f64 = -action
            .as_slice()
            .iter()
            .zip(&self.state)
            .map(|(a, s)| {
                let d = a - s * self.target_gain;
                d * d
            })
            .sum::<f64>();
        self.terminal = true;
        Ok(StepOutcome {
            observation: Observation(self.state.clone()),
            reward,
            terminal: true,
            info: StepInfo::default(),
        })
    }
}
