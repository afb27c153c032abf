//! Gauss-Markov mobility of the ground eavesdropper.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// First-order autoregressive mobility parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussMarkovParams {
    /// Long-run mean speed, m/s.
    pub mean_speed: f64,
    /// Memory coefficient in [0, 1]; 1 freezes speed and heading.
    pub correlation: f64,
    /// Variance of the driving noise.
    pub variance: f64,
    /// Planar roaming box, m.
    pub roam_min: [f64; 2],
    pub roam_max: [f64; 2],
}

impl Default for GaussMarkovParams {
    fn default() -> Self {
        Self {
            mean_speed: 5.0,
            correlation: 0.1,
            variance: 1.0,
            roam_min: [50.0, 50.0],
            roam_max: [400.0, 400.0],
        }
    }
}

impl GaussMarkovParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.correlation) {
            return Err(format!("correlation must lie in [0, 1], got {}", self.correlation));
        }
        if self.mean_speed < 0.0 {
            return Err(format!("mean speed must be non-negative, got {}", self.mean_speed));
        }
        if self.variance < 0.0 {
            return Err(format!("variance must be non-negative, got {}", self.variance));
        }
        for axis in 0..2 {
            if self.roam_min[axis] >= self.roam_max[axis] {
                return Err(format!(
                    "roam bounds are not ordered on axis {axis}: [{}, {}]",
                    self.roam_min[axis], self.roam_max[axis]
                ));
            }
        }
        Ok(())
    }
}

/// Planar position, speed and heading of the eavesdropper. The z coordinate
/// is always zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EavesdropperState {
    pub position_xy: [f64; 2],
    pub speed: f64,
    pub heading: f64,
}

impl EavesdropperState {
    pub fn position(&self) -> [f64; 3] {
        [self.position_xy[0], self.position_xy[1], 0.0]
    }
}

/// One mobility update: speed and heading each follow an AR(1) pull toward
/// their mean (the heading mean is the previous heading, so headings random
/// walk), then the position advances and reflects off the roaming box with
/// the heading mirrored.
pub fn gauss_markov_step<R: Rng>(
    state: &EavesdropperState,
    params: &GaussMarkovParams,
    dt: f64,
    rng: &mut R,
) -> EavesdropperState {
    let zeta = params.correlation;
    let sigma = params.variance.sqrt();
    let noise_scale = (1.0 - zeta * zeta).max(0.0).sqrt() * sigma;
    let w1: f64 = rng.sample(StandardNormal);
    let w2: f64 = rng.sample(StandardNormal);

    let speed = (zeta * state.speed + (1.0 - zeta) * params.mean_speed + noise_scale * w1).max(0.0);
    let mut heading = zeta * state.heading + (1.0 - zeta) * state.heading + noise_scale * w2;

    let mut x = state.position_xy[0] + speed * dt * heading.cos();
    let mut y = state.position_xy[1] + speed * dt * heading.sin();

    // Reflect until inside; a single slot never crosses the box more than a
    // few times.
    loop {
        let mut bounced = false;
        if x < params.roam_min[0] {
            x = 2.0 * params.roam_min[0] - x;
            heading = std::f64::consts::PI - heading;
            bounced = true;
        } else if x > params.roam_max[0] {
            x = 2.0 * params.roam_max[0] - x;
            heading = std::f64::consts::PI - heading;
            bounced = true;
        }
        if y < params.roam_min[1] {
            y = 2.0 * params.roam_min[1] - y;
            heading = -heading;
            bounced = true;
        } else if y > params.roam_max[1] {
            y = 2.0 * params.roam_max[1] - y;
            heading = -heading;
            bounced = true;
        }
        if !bounced {
            break;
        }
    }

    EavesdropperState {
        position_xy: [x, y],
        speed,
        heading: crate::beamforming::wrap_angle(heading),
    }
}
