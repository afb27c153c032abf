//! Diffusion-policy twin-delayed actor-critic: noise schedule, replay,
//! agent, and training loop.

pub mod agent;
pub mod replay;
pub mod schedule;
pub mod train;

pub use agent::{
    chain_gradient_max_rel_err, critic_gradient_max_rel_err, denoise_mean, schedule_from_config,
    ActorKind, AgentConfig, AgentSnapshot, ChainNoise, GdmTd3,
};
pub use replay::{ReplayBuffer, Transition};
pub use schedule::{build_schedule, build_schedule_with, DiffusionSchedule, NoiseSchedule};
pub use train::{train, EpisodeStats, StepRow, StepSink, TrainLog, TrainOutput};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid agent configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Schedule(#[from] schedule::ScheduleError),
    #[error(transparent)]
    Env(#[from] crate::env::EnvError),
    #[error(transparent)]
    Optimizer(#[from] crate::nn::NnError),
    #[error("{context} loss became non-finite ({value})")]
    NonFiniteLoss { context: &'static str, value: f64 },
}
