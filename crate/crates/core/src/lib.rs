//! Simulation and learning laboratory for a UAV swarm that forms a virtual
//! antenna array and beams data to a remote base station while a mobile
//! eavesdropper tries to intercept it.
//!
//! The crate is organised around the physics of the problem and the agent
//! that learns to solve it:
//!
//! - [`beamforming`]: array geometry, open-loop phases, array factor, and
//!   numerically integrated antenna gain of the swarm.
//! - [`channel`]: elevation-dependent probabilistic LoS channel, link rates,
//!   and the achievable secrecy rate.
//! - [`energy`]: rotary-wing propulsion power and per-slot swarm energy.
//! - [`env`]: the episodic decision process tying it all together, including
//!   the Gauss-Markov eavesdropper and the multi-objective reward.
//! - [`baselines`]: non-learning deployment policies used for comparison.
//! - [`nn`]: minimal dense networks with exact reverse-mode gradients and an
//!   Adam optimizer.
//! - [`gdmtd3`]: the diffusion-policy twin-delayed actor-critic agent and its
//!   training loop.

pub mod baselines;
pub mod beamforming;
pub mod channel;
pub mod energy;
pub mod env;
pub mod gdmtd3;
pub mod nn;

/// Derives a stream-specific seed from a base seed, splitmix64-style.
///
/// Used wherever one user-facing seed has to drive several independent
/// generators (environment, weight init, exploration noise) without them
/// sharing a stream.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
