//! Twin-delayed actor-critic agent whose actor is a state-conditioned
//! denoising sampler.
//!
//! The actor network predicts the noise content of a candidate action vector
//! given the environment state and the denoising step; sampling runs the
//! reverse chain from Gaussian noise down to an action. Critic updates are
//! clipped double Q-learning with target policy smoothing; actor updates
//! backpropagate the first critic's value through the entire reverse chain
//! with frozen noise.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::replay::Transition;
use super::schedule::{build_schedule_with, DiffusionSchedule, NoiseSchedule, ScheduleError};
use super::TrainError;
use crate::env::{Action, Observation};
use crate::nn::{
    optimizer_step, sinusoidal_embed, soft_update, Activation, AdamState, DenseNetSpec, Network,
    ParamSet,
};

/// Which actor drives the policy: the denoising sampler or the plain
/// tanh-MLP ablation that turns the agent into conventional TD3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActorKind {
    Diffusion,
    Mlp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentConfig {
    /// Reward discount.
    pub gamma: f64,
    /// Soft target update rate.
    pub tau: f64,
    /// Actor and target updates happen every `policy_delay` critic updates.
    pub policy_delay: u64,
    /// Reverse-chain length T.
    pub denoise_steps: usize,
    pub noise_schedule: NoiseSchedule,
    pub beta_min: f64,
    pub beta_max: f64,
    /// Std of exploration noise added to sampled actions.
    pub exploration_std: f64,
    /// Std and clip of target policy smoothing noise.
    pub smoothing_std: f64,
    pub smoothing_clip: f64,
    /// Training episodes M.
    pub episodes: usize,
    /// Uniform-random steps collected before any update.
    pub warmup_steps: usize,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    pub learning_rate: f64,
    pub hidden_width: usize,
    pub time_embed_dim: usize,
    pub actor_kind: ActorKind,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            gamma: 0.90,
            tau: 0.005,
            policy_delay: 2,
            denoise_steps: 4,
            noise_schedule: NoiseSchedule::Vp,
            beta_min: 0.1,
            beta_max: 10.0,
            exploration_std: 0.1,
            smoothing_std: 0.2,
            smoothing_clip: 0.5,
            episodes: 8000,
            warmup_steps: 1000,
            batch_size: 128,
            buffer_capacity: 2_000_000,
            learning_rate: 3e-4,
            hidden_width: 256,
            time_embed_dim: 16,
            actor_kind: ActorKind::Diffusion,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(format!("gamma must lie in [0, 1], got {}", self.gamma));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(format!("tau must lie in [0, 1], got {}", self.tau));
        }
        if self.policy_delay == 0 {
            return Err("policy_delay must be at least 1".into());
        }
        if self.denoise_steps == 0 {
            return Err("denoise_steps must be at least 1".into());
        }
        if self.batch_size == 0 {
            return Err("batch_size must be positive".into());
        }
        if self.buffer_capacity < self.batch_size {
            return Err(format!(
                "buffer capacity {} is smaller than the batch size {}",
                self.buffer_capacity, self.batch_size
            ));
        }
        if self.episodes == 0 {
            return Err("episodes must be at least 1".into());
        }
        if self.learning_rate <= 0.0 {
            return Err(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        if self.hidden_width == 0 {
            return Err("hidden_width must be positive".into());
        }
        if self.time_embed_dim < 2 || self.time_embed_dim % 2 != 0 {
            return Err(format!(
                "time_embed_dim must be even and at least 2, got {}",
                self.time_embed_dim
            ));
        }
        if self.exploration_std < 0.0 || self.smoothing_std < 0.0 || self.smoothing_clip < 0.0 {
            return Err("noise parameters must be non-negative".into());
        }
        Ok(())
    }
}

/// Frozen noise for one reverse chain: the initial Gaussian and the per-step
/// injection noise. With all zeros the chain is the deterministic policy.
#[derive(Clone, Debug)]
pub struct ChainNoise {
    pub x_init: Vec<f64>,
    pub step_noise: Vec<Vec<f64>>,
}

impl ChainNoise {
    pub fn zeros(steps: usize, dim: usize) -> Self {
        Self {
            x_init: vec![0.0; dim],
            step_noise: vec![vec![0.0; dim]; steps],
        }
    }

    pub fn standard<R: Rng>(steps: usize, dim: usize, rng: &mut R) -> Self {
        Self {
            x_init: (0..dim).map(|_| rng.sample(StandardNormal)).collect(),
            step_noise: (0..steps)
                .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
                .collect(),
        }
    }
}

fn denoiser_input(state: &[f64], x: &[f64], t: usize, embed_dim: usize) -> Vec<f64> {
    let mut input = Vec::with_capacity(state.len() + x.len() + embed_dim);
    input.extend_from_slice(state);
    input.extend_from_slice(x);
    input.extend(sinusoidal_embed(t, embed_dim));
    input
}

/// Posterior mean of the reverse step at `t` (1-indexed):
/// (x_t - beta_t * eps(x_t, t, s) / sqrt(1 - alpha_bar_t)) / sqrt(alpha_t).
pub fn denoise_mean(
    actor: &Network,
    time_embed_dim: usize,
    schedule: &DiffusionSchedule,
    x_t: &[f64],
    t: usize,
    state: &[f64],
) -> Vec<f64> {
    assert!(
        (1..=schedule.steps).contains(&t),
        "step {t} outside 1..={}",
        schedule.steps
    );
    let eps = actor.forward(&denoiser_input(state, x_t, t, time_embed_dim));
    let beta = schedule.betas[t - 1];
    let alpha = schedule.alphas[t - 1];
    let alpha_bar = schedule.alpha_bars[t - 1];
    let inv_sqrt_alpha = 1.0 / alpha.sqrt();
    let eps_coeff = beta / (1.0 - alpha_bar).sqrt();
    x_t.iter()
        .zip(&eps)
        .map(|(x, e)| inv_sqrt_alpha * (x - eps_coeff * e))
        .collect()
}

/// Record of one reverse chain, enough to backpropagate through it.
pub struct ChainRecord {
    /// Pre-clip outputs of each step, for the clamp mask.
    raws: Vec<Vec<f64>>,
    tapes: Vec<crate::nn::Tape>,
}

/// Runs the reverse chain under the given frozen noise, clipping every
/// intermediate sample to the action box. With `record` the per-step tapes
/// come back for [`chain_backward`].
pub fn chain_forward(
    actor: &Network,
    time_embed_dim: usize,
    schedule: &DiffusionSchedule,
    state: &[f64],
    noise: &ChainNoise,
    record: bool,
) -> (Vec<f64>, Option<ChainRecord>) {
    let steps = schedule.steps;
    assert_eq!(noise.step_noise.len(), steps, "noise draws must match chain length");
    let mut x = noise.x_init.clone();
    let mut rec = record.then(|| ChainRecord {
        raws: Vec::with_capacity(steps),
        tapes: Vec::with_capacity(steps),
    });
    for (i, t) in (1..=steps).rev().enumerate() {
        let input = denoiser_input(state, &x, t, time_embed_dim);
        let (eps, tape) = if record {
            let (eps, tape) = actor.forward_recorded(&input);
            (eps, Some(tape))
        } else {
            (actor.forward(&input), None)
        };
        let beta = schedule.betas[t - 1];
        let alpha = schedule.alphas[t - 1];
        let alpha_bar = schedule.alpha_bars[t - 1];
        let inv_sqrt_alpha = 1.0 / alpha.sqrt();
        let eps_coeff = beta / (1.0 - alpha_bar).sqrt();
        let noise_scale = (schedule.posterior_betas[t - 1] / 2.0).powi(2);
        let raw: Vec<f64> = x
            .iter()
            .zip(&eps)
            .zip(&noise.step_noise[i])
            .map(|((xv, e), w)| inv_sqrt_alpha * (xv - eps_coeff * e) + noise_scale * w)
            .collect();
        let next: Vec<f64> = raw.iter().map(|v| v.clamp(-1.0, 1.0)).collect();
        if let Some(rec) = rec.as_mut() {
            rec.raws.push(raw);
            rec.tapes.push(tape.unwrap());
        }
        x = next;
    }
    (x, rec)
}

/// Pushes a gradient on the final action back through the recorded chain.
/// Returns the accumulated actor parameter gradient.
pub fn chain_backward(
    actor: &Network,
    schedule: &DiffusionSchedule,
    state_len: usize,
    record: &ChainRecord,
    grad_action: &[f64],
) -> ParamSet {
    let steps = schedule.steps;
    let action_dim = grad_action.len();
    let mut grads = ParamSet::zeros(&actor.spec);
    let mut g = grad_action.to_vec();
    for i in (0..steps).rev() {
        // Chain position i applied denoising step t = steps - i.
        let t = steps - i;
        let raw = &record.raws[i];
        let g_raw: Vec<f64> = g
            .iter()
            .zip(raw)
            .map(|(gv, rv)| if (-1.0..1.0).contains(rv) { *gv } else { 0.0 })
            .collect();
        let beta = schedule.betas[t - 1];
        let alpha = schedule.alphas[t - 1];
        let alpha_bar = schedule.alpha_bars[t - 1];
        let inv_sqrt_alpha = 1.0 / alpha.sqrt();
        let eps_coeff = beta / (1.0 - alpha_bar).sqrt();
        let eps_out_grad: Vec<f64> = g_raw
            .iter()
            .map(|gv| -inv_sqrt_alpha * eps_coeff * gv)
            .collect();
        let (step_grads, input_grad) = actor.backward(&record.tapes[i], &eps_out_grad);
        grads.add_scaled(&step_grads, 1.0);
        let mut g_prev = vec![0.0; action_dim];
        for d in 0..action_dim {
            g_prev[d] = inv_sqrt_alpha * g_raw[d] + input_grad[state_len + d];
        }
        g = g_prev;
    }
    grads
}

/// Mean-squared TD loss of one critic over a batch, with its gradient.
fn critic_batch_loss_grads(
    critic: &Network,
    batch: &[&Transition],
    targets: &[f64],
) -> (f64, ParamSet) {
    let scale = 1.0 / batch.len() as f64;
    let mut grads = ParamSet::zeros(&critic.spec);
    let mut loss = 0.0;
    for (transition, &y) in batch.iter().zip(targets) {
        let mut input = Vec::with_capacity(transition.state.len() + transition.action.len());
        input.extend_from_slice(transition.state.as_slice());
        input.extend_from_slice(transition.action.as_slice());
        let (out, tape) = critic.forward_recorded(&input);
        let residual = out[0] - y;
        loss += scale * residual * residual;
        let (g, _) = critic.backward(&tape, &[2.0 * scale * residual]);
        grads.add_scaled(&g, 1.0);
    }
    (loss, grads)
}

/// Negative mean critic value of the reparameterized policy over a batch of
/// states, with its gradient through the full reverse chain. `noises[b]`
/// supplies the frozen chain noise of sample b (ignored by the MLP actor).
fn actor_batch_loss_grads(
    actor: &Network,
    critic: &Network,
    config: &AgentConfig,
    schedule: &DiffusionSchedule,
    states: &[&[f64]],
    noises: &[ChainNoise],
) -> (f64, ParamSet) {
    let scale = 1.0 / states.len() as f64;
    let mut grads = ParamSet::zeros(&actor.spec);
    let mut loss = 0.0;
    for (b, &state) in states.iter().enumerate() {
        let (action, record) = match config.actor_kind {
            ActorKind::Diffusion => {
                let (action, record) = chain_forward(
                    actor,
                    config.time_embed_dim,
                    schedule,
                    state,
                    &noises[b],
                    true,
                );
                (action, record)
            }
            ActorKind::Mlp => (actor.forward(state), None),
        };

        let mut input = Vec::with_capacity(state.len() + action.len());
        input.extend_from_slice(state);
        input.extend_from_slice(&action);
        let (q, critic_tape) = critic.forward_recorded(&input);
        loss -= scale * q[0];
        // d(-mean q)/d(action) through the frozen critic.
        let (_, critic_input_grad) = critic.backward(&critic_tape, &[-scale]);
        let action_grad = &critic_input_grad[state.len()..];

        match config.actor_kind {
            ActorKind::Diffusion => {
                let g = chain_backward(actor, schedule, state.len(), &record.unwrap(), action_grad);
                grads.add_scaled(&g, 1.0);
            }
            ActorKind::Mlp => {
                let (_, tape) = actor.forward_recorded(state);
                let (g, _) = actor.backward(&tape, action_grad);
                grads.add_scaled(&g, 1.0);
            }
        }
    }
    (loss, grads)
}

/// The agent: twin critics with targets, an actor with target, optimizers,
/// and the noise schedule.
pub struct GdmTd3 {
    pub config: AgentConfig,
    obs_dim: usize,
    action_dim: usize,
    pub schedule: DiffusionSchedule,
    pub actor: Network,
    pub actor_target: Network,
    pub critic1: Network,
    pub critic2: Network,
    pub critic1_target: Network,
    pub critic2_target: Network,
    pub actor_opt: AdamState,
    pub critic1_opt: AdamState,
    pub critic2_opt: AdamState,
    rng: ChaCha12Rng,
}

/// Serializable state of an agent, minus the RNG.
#[derive(Clone, Serialize, Deserialize)]
pub struct AgentSnapshot {
    pub config: AgentConfig,
    pub obs_dim: usize,
    pub action_dim: usize,
    pub schedule: DiffusionSchedule,
    pub actor: Network,
    pub actor_target: Network,
    pub critic1: Network,
    pub critic2: Network,
    pub critic1_target: Network,
    pub critic2_target: Network,
    pub actor_opt: AdamState,
    pub critic1_opt: AdamState,
    pub critic2_opt: AdamState,
}

impl GdmTd3 {
    pub fn new(
        obs_dim: usize,
        action_dim: usize,
        config: AgentConfig,
        seed: u64,
    ) -> Result<Self, TrainError> {
        config.validate().map_err(TrainError::Config)?;
        let schedule = build_schedule_with(
            config.noise_schedule,
            config.denoise_steps,
            config.beta_min,
            config.beta_max,
        )?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let h = config.hidden_width;
        let actor_spec = match config.actor_kind {
            ActorKind::Diffusion => DenseNetSpec::new(
                obs_dim + action_dim + config.time_embed_dim,
                &[
                    (h, Activation::Mish),
                    (h, Activation::Mish),
                    (action_dim, Activation::Linear),
                ],
            ),
            ActorKind::Mlp => DenseNetSpec::new(
                obs_dim,
                &[
                    (h, Activation::Relu),
                    (h, Activation::Relu),
                    (action_dim, Activation::Tanh),
                ],
            ),
        };
        let critic_spec = DenseNetSpec::new(
            obs_dim + action_dim,
            &[
                (h, Activation::Relu),
                (h, Activation::Relu),
                (1, Activation::Linear),
            ],
        );
        // The actor's last layer starts 10x smaller so the early reverse
        // chain stays close to the identity map.
        let actor = Network::new(actor_spec, &mut rng, 0.1);
        let critic1 = Network::new(critic_spec.clone(), &mut rng, 1.0);
        let critic2 = Network::new(critic_spec, &mut rng, 1.0);
        let actor_opt = AdamState::new(&actor.spec, config.learning_rate);
        let critic1_opt = AdamState::new(&critic1.spec, config.learning_rate);
        let critic2_opt = AdamState::new(&critic2.spec, config.learning_rate);
        Ok(Self {
            actor_target: actor.clone(),
            critic1_target: critic1.clone(),
            critic2_target: critic2.clone(),
            config,
            obs_dim,
            action_dim,
            schedule,
            actor,
            critic1,
            critic2,
            actor_opt,
            critic1_opt,
            critic2_opt,
            rng,
        })
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn action_dim(&self) -> usize {
        self.action_dim
    }

    pub fn snapshot(&self) -> AgentSnapshot {
        AgentSnapshot {
            config: self.config.clone(),
            obs_dim: self.obs_dim,
            action_dim: self.action_dim,
            schedule: self.schedule.clone(),
            actor: self.actor.clone(),
            actor_target: self.actor_target.clone(),
            critic1: self.critic1.clone(),
            critic2: self.critic2.clone(),
            critic1_target: self.critic1_target.clone(),
            critic2_target: self.critic2_target.clone(),
            actor_opt: self.actor_opt.clone(),
            critic1_opt: self.critic1_opt.clone(),
            critic2_opt: self.critic2_opt.clone(),
        }
    }

    pub fn restore(snapshot: AgentSnapshot, seed: u64) -> Result<Self, TrainError> {
        snapshot.config.validate().map_err(TrainError::Config)?;
        Ok(Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
            config: snapshot.config,
            obs_dim: snapshot.obs_dim,
            action_dim: snapshot.action_dim,
            schedule: snapshot.schedule,
            actor: snapshot.actor,
            actor_target: snapshot.actor_target,
            critic1: snapshot.critic1,
            critic2: snapshot.critic2,
            critic1_target: snapshot.critic1_target,
            critic2_target: snapshot.critic2_target,
            actor_opt: snapshot.actor_opt,
            critic1_opt: snapshot.critic1_opt,
            critic2_opt: snapshot.critic2_opt,
        })
    }

    /// Uniform action in the box, for warmup exploration.
    pub fn random_action(&mut self) -> Action {
        Action(
            (0..self.action_dim)
                .map(|_| self.rng.random_range(-1.0..=1.0))
                .collect(),
        )
    }

    fn policy_action(
        actor: &Network,
        config: &AgentConfig,
        schedule: &DiffusionSchedule,
        state: &[f64],
        noise: Option<&ChainNoise>,
    ) -> Vec<f64> {
        match config.actor_kind {
            ActorKind::Diffusion => {
                let zeros;
                let noise = match noise {
                    Some(n) => n,
                    None => {
                        zeros = ChainNoise::zeros(schedule.steps, actor.spec.output_dim());
                        &zeros
                    }
                };
                chain_forward(actor, config.time_embed_dim, schedule, state, noise, false).0
            }
            ActorKind::Mlp => actor.forward(state),
        }
    }

    /// Exploratory action: a stochastic reverse chain plus clipped
    /// exploration noise.
    pub fn sample_action(&mut self, observation: &Observation) -> Action {
        let noise = ChainNoise::standard(self.schedule.steps, self.action_dim, &mut self.rng);
        let mut action = Self::policy_action(
            &self.actor,
            &self.config,
            &self.schedule,
            observation.as_slice(),
            Some(&noise),
        );
        for a in action.iter_mut() {
            let w: f64 = self.rng.sample(StandardNormal);
            *a = (*a + self.config.exploration_std * w).clamp(-1.0, 1.0);
        }
        Action(action)
    }

    /// Deterministic policy action: zero initial noise, noiseless chain, no
    /// exploration noise. Repeated calls return identical actions.
    pub fn deterministic_action(&self, observation: &Observation) -> Action {
        Action(
            Self::policy_action(
                &self.actor,
                &self.config,
                &self.schedule,
                observation.as_slice(),
                None,
            )
            .into_iter()
            .map(|v| v.clamp(-1.0, 1.0))
            .collect(),
        )
    }

    fn critic_value(critic: &Network, state: &[f64], action: &[f64]) -> f64 {
        let mut input = Vec::with_capacity(state.len() + action.len());
        input.extend_from_slice(state);
        input.extend_from_slice(action);
        critic.forward(&input)[0]
    }

    /// Target-policy action in deterministic mode, clamped to the box.
    pub fn target_policy_action(&self, observation: &Observation) -> Action {
        Action(
            Self::policy_action(
                &self.actor_target,
                &self.config,
                &self.schedule,
                observation.as_slice(),
                None,
            )
            .into_iter()
            .map(|v| v.clamp(-1.0, 1.0))
            .collect(),
        )
    }

    /// Both target critics' values of a (state, action) pair.
    pub fn target_critic_values(&self, observation: &Observation, action: &Action) -> (f64, f64) {
        (
            Self::critic_value(&self.critic1_target, observation.as_slice(), action.as_slice()),
            Self::critic_value(&self.critic2_target, observation.as_slice(), action.as_slice()),
        )
    }

    /// Bellman targets with clipped double Q-learning and target policy
    /// smoothing.
    pub fn target_values(&mut self, batch: &[&Transition]) -> Vec<f64> {
        assert!(!batch.is_empty(), "target computation needs a non-empty batch");
        let mut targets = Vec::with_capacity(batch.len());
        for transition in batch {
            let next_state = transition.next_state.as_slice();
            let mut next_action = Self::policy_action(
                &self.actor_target,
                &self.config,
                &self.schedule,
                next_state,
                None,
            );
            for a in next_action.iter_mut() {
                let w: f64 = self.rng.sample(StandardNormal);
                let noise = (self.config.smoothing_std * w)
                    .clamp(-self.config.smoothing_clip, self.config.smoothing_clip);
                *a = (*a + noise).clamp(-1.0, 1.0);
            }
            let q1 = Self::critic_value(&self.critic1_target, next_state, &next_action);
            let q2 = Self::critic_value(&self.critic2_target, next_state, &next_action);
            let bootstrap = if transition.terminal {
                0.0
            } else {
                self.config.gamma * q1.min(q2)
            };
            targets.push(transition.reward + bootstrap);
        }
        targets
    }

    /// One mean-squared TD step on each critic. Returns both losses.
    pub fn update_critics(
        &mut self,
        batch: &[&Transition],
        targets: &[f64],
    ) -> Result<(f64, f64), TrainError> {
        assert_eq!(batch.len(), targets.len());
        let (loss1, grads1) = critic_batch_loss_grads(&self.critic1, batch, targets);
        let (loss2, grads2) = critic_batch_loss_grads(&self.critic2, batch, targets);
        for loss in [loss1, loss2] {
            if !loss.is_finite() {
                return Err(TrainError::NonFiniteLoss {
                    context: "critic",
                    value: loss,
                });
            }
        }
        optimizer_step(&mut self.critic1_opt, &mut self.critic1.params, &grads1)?;
        optimizer_step(&mut self.critic2_opt, &mut self.critic2.params, &grads2)?;
        Ok((loss1, loss2))
    }

    /// One policy-gradient step: maximize the first critic's value of the
    /// reparameterized policy action. Noise draws are frozen per call.
    pub fn update_actor(&mut self, batch: &[&Transition]) -> Result<f64, TrainError> {
        assert!(!batch.is_empty());
        let states: Vec<&[f64]> = batch.iter().map(|t| t.state.as_slice()).collect();
        let noises: Vec<ChainNoise> = (0..batch.len())
            .map(|_| ChainNoise::standard(self.schedule.steps, self.action_dim, &mut self.rng))
            .collect();
        let (loss, grads) = actor_batch_loss_grads(
            &self.actor,
            &self.critic1,
            &self.config,
            &self.schedule,
            &states,
            &noises,
        );
        if !loss.is_finite() {
            return Err(TrainError::NonFiniteLoss {
                context: "actor",
                value: loss,
            });
        }
        optimizer_step(&mut self.actor_opt, &mut self.actor.params, &grads)?;
        Ok(loss)
    }

    /// Polyak-averages all three target networks toward their online twins.
    pub fn soft_update_targets(&mut self) {
        let tau = self.config.tau;
        soft_update(&mut self.actor_target.params, &self.actor.params, tau);
        soft_update(&mut self.critic1_target.params, &self.critic1.params, tau);
        soft_update(&mut self.critic2_target.params, &self.critic2.params, tau);
    }

    pub fn rng(&mut self) -> &mut ChaCha12Rng {
        &mut self.rng
    }
}

/// Builds a schedule directly from an agent config; convenience for tools
/// that inspect schedules without an agent.
pub fn schedule_from_config(config: &AgentConfig) -> Result<DiffusionSchedule, ScheduleError> {
    build_schedule_with(
        config.noise_schedule,
        config.denoise_steps,
        config.beta_min,
        config.beta_max,
    )
}

/// Finite-difference validation of the end-to-end actor objective: builds a
/// small agent, freezes one batch of chain noise, and compares the analytic
/// gradient of the actor loss against central differences on every actor
/// parameter. Returns the maximum relative error.
pub fn chain_gradient_max_rel_err(denoise_steps: usize, seed: u64) -> f64 {
    let config = AgentConfig {
        hidden_width: 8,
        time_embed_dim: 4,
        denoise_steps,
        ..AgentConfig::default()
    };
    let agent = GdmTd3::new(3, 2, config.clone(), seed).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xD1FF);
    let states_owned: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let states: Vec<&[f64]> = states_owned.iter().map(|s| s.as_slice()).collect();
    let noises: Vec<ChainNoise> = (0..states.len())
        .map(|_| ChainNoise::standard(denoise_steps, 2, &mut rng))
        .collect();

    let loss_of = |actor: &Network| {
        actor_batch_loss_grads(actor, &agent.critic1, &config, &agent.schedule, &states, &noises).0
    };
    let (_, grads) = actor_batch_loss_grads(
        &agent.actor,
        &agent.critic1,
        &config,
        &agent.schedule,
        &states,
        &noises,
    );

    let h = 1e-5;
    let mut max_rel = 0.0f64;
    for l in 0..agent.actor.params.layers.len() {
        let n_w = agent.actor.params.layers[l].weights.len();
        let n_b = agent.actor.params.layers[l].bias.len();
        for idx in 0..n_w + n_b {
            let mut plus = agent.actor.clone();
            let mut minus = agent.actor.clone();
            let (g, p, m) = if idx < n_w {
                (
                    grads.layers[l].weights[idx],
                    &mut plus.params.layers[l].weights[idx],
                    &mut minus.params.layers[l].weights[idx],
                )
            } else {
                (
                    grads.layers[l].bias[idx - n_w],
                    &mut plus.params.layers[l].bias[idx - n_w],
                    &mut minus.params.layers[l].bias[idx - n_w],
                )
            };
            *p += h;
            *m -= h;
            let numeric = (loss_of(&plus) - loss_of(&minus)) / (2.0 * h);
            // Clipping makes some coordinates flat; compare only where the
            // numeric slope is meaningful.
            let denom = numeric.abs().max(1e-4);
            max_rel = max_rel.max((g - numeric).abs() / denom);
        }
    }
    max_rel
}

/// Finite-difference validation of the critic TD loss on a small batch.
/// Returns the maximum relative error over all critic parameters.
pub fn critic_gradient_max_rel_err(seed: u64) -> f64 {
    let config = AgentConfig {
        hidden_width: 8,
        time_embed_dim: 4,
        denoise_steps: 2,
        ..AgentConfig::default()
    };
    let agent = GdmTd3::new(3, 2, config, seed).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xC417);
    let batch_owned: Vec<Transition> = (0..4)
        .map(|_| Transition {
            state: Observation((0..3).map(|_| rng.random_range(-1.0..1.0)).collect()),
            action: Action((0..2).map(|_| rng.random_range(-1.0..1.0)).collect()),
            reward: rng.random_range(-1.0..1.0),
            next_state: Observation((0..3).map(|_| rng.random_range(-1.0..1.0)).collect()),
            terminal: false,
        })
        .collect();
    let batch: Vec<&Transition> = batch_owned.iter().collect();
    let targets: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();

    let (_, grads) = critic_batch_loss_grads(&agent.critic1, &batch, &targets);
    let loss_of =
        |critic: &Network| critic_batch_loss_grads(critic, &batch, &targets).0;

    let h = 1e-5;
    let mut max_rel = 0.0f64;
    for l in 0..agent.critic1.params.layers.len() {
        let n_w = agent.critic1.params.layers[l].weights.len();
        let n_b = agent.critic1.params.layers[l].bias.len();
        for idx in 0..n_w + n_b {
            let mut plus = agent.critic1.clone();
            let mut minus = agent.critic1.clone();
            let (g, p, m) = if idx < n_w {
                (
                    grads.layers[l].weights[idx],
                    &mut plus.params.layers[l].weights[idx],
                    &mut minus.params.layers[l].weights[idx],
                )
            } else {
                (
                    grads.layers[l].bias[idx - n_w],
                    &mut plus.params.layers[l].bias[idx - n_w],
                    &mut minus.params.layers[l].bias[idx - n_w],
                )
            };
            *p += h;
            *m -= h;
            let numeric = (loss_of(&plus) - loss_of(&minus)) / (2.0 * h);
            let denom = numeric.abs().max(1e-4);
            max_rel = max_rel.max((g - numeric).abs() / denom);
        }
    }
    max_rel
}
