//! Noise-level schedules for the diffusion actor's reverse process.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("invalid schedule configuration: {0}")]
    Config(String),
}

/// Schedule family. The variance-preserving schedule is the default; linear
/// interpolates the same endpoints in t, and cosine is parameter-free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseSchedule {
    Vp,
    Linear,
    Cosine,
}

impl std::str::FromStr for NoiseSchedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vp" => Ok(Self::Vp),
            "linear" => Ok(Self::Linear),
            "cosine" => Ok(Self::Cosine),
            other => Err(format!(
                "unknown noise schedule '{other}'; expected one of vp, linear, cosine"
            )),
        }
    }
}

impl std::fmt::Display for NoiseSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Vp => "vp",
            Self::Linear => "linear",
            Self::Cosine => "cosine",
        })
    }
}

/// Per-step noise tables of a T-step reverse chain. All vectors are indexed
/// by `t - 1` for steps `t = 1..=T`; the cumulative product treats the
/// virtual step 0 as `alpha_bar = 1`, which makes the final reverse step
/// noiseless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionSchedule {
    pub steps: usize,
    pub betas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub alpha_bars: Vec<f64>,
    /// Posterior variance factors (1 - alpha_bar_{t-1}) / (1 - alpha_bar_t) * beta_t.
    pub posterior_betas: Vec<f64>,
}

impl DiffusionSchedule {
    fn from_betas(betas: Vec<f64>) -> Result<Self, ScheduleError> {
        let steps = betas.len();
        for (i, &b) in betas.iter().enumerate() {
            if !(0.0..1.0).contains(&b) || b == 0.0 {
                return Err(ScheduleError::Config(format!(
                    "beta_{} = {b} outside (0, 1)",
                    i + 1
                )));
            }
            if i > 0 && b <= betas[i - 1] {
                return Err(ScheduleError::Config(format!(
                    "betas must increase strictly: beta_{} = {} then beta_{} = {b}",
                    i,
                    betas[i - 1],
                    i + 1
                )));
            }
        }
        let alphas: Vec<f64> = betas.iter().map(|b| 1.0 - b).collect();
        let mut alpha_bars = Vec::with_capacity(steps);
        let mut running = 1.0;
        for &a in &alphas {
            running *= a;
            alpha_bars.push(running);
        }
        let posterior_betas: Vec<f64> = (0..steps)
            .map(|i| {
                let prev = if i == 0 { 1.0 } else { alpha_bars[i - 1] };
                (1.0 - prev) / (1.0 - alpha_bars[i]) * betas[i]
            })
            .collect();
        Ok(Self {
            steps,
            betas,
            alphas,
            alpha_bars,
            posterior_betas,
        })
    }

    /// Cumulative product before step `t` (1-indexed); step 1 sees 1.
    pub fn alpha_bar_prev(&self, t: usize) -> f64 {
        if t <= 1 {
            1.0
        } else {
            self.alpha_bars[t - 2]
        }
    }
}

/// Variance-preserving schedule:
/// beta_t = 1 - exp(-beta_min/T - (2t-1)/(2T^2) (beta_max - beta_min)).
pub fn build_schedule(steps: usize, beta_min: f64, beta_max: f64) -> Result<DiffusionSchedule, ScheduleError> {
    build_schedule_with(NoiseSchedule::Vp, steps, beta_min, beta_max)
}

pub fn build_schedule_with(
    kind: NoiseSchedule,
    steps: usize,
    beta_min: f64,
    beta_max: f64,
) -> Result<DiffusionSchedule, ScheduleError> {
    if steps == 0 {
        return Err(ScheduleError::Config("schedule needs at least one step".into()));
    }
    if kind != NoiseSchedule::Cosine && !(0.0 < beta_min && beta_min < beta_max) {
        return Err(ScheduleError::Config(format!(
            "need 0 < beta_min < beta_max, got ({beta_min}, {beta_max})"
        )));
    }
    let t_f = steps as f64;
    let betas: Vec<f64> = match kind {
        NoiseSchedule::Vp => (1..=steps)
            .map(|t| {
                let exponent =
                    -beta_min / t_f - (2 * t - 1) as f64 / (2.0 * t_f * t_f) * (beta_max - beta_min);
                1.0 - exponent.exp()
            })
            .collect(),
        NoiseSchedule::Linear => {
            // Straight line in t between the VP endpoints, so linear and VP
            // agree at t = 1 and t = T and differ in between.
            let first = 1.0 - (-beta_min / t_f - 1.0 / (2.0 * t_f * t_f) * (beta_max - beta_min)).exp();
            let last = 1.0
                - (-beta_min / t_f - (2.0 * t_f - 1.0) / (2.0 * t_f * t_f) * (beta_max - beta_min))
                    .exp();
            (1..=steps)
                .map(|t| {
                    if steps == 1 {
                        first
                    } else {
                        first + (t - 1) as f64 / (t_f - 1.0) * (last - first)
                    }
                })
                .collect()
        }
        NoiseSchedule::Cosine => {
            // Squared-cosine cumulative schedule with the usual small offset;
            // betas follow from consecutive alpha_bar ratios, capped at 0.999.
            let s = 0.008;
            let f = |t: f64| ((t / t_f + s) / (1.0 + s) * std::f64::consts::FRAC_PI_2).cos().powi(2);
            let f0 = f(0.0);
            let mut prev = 1.0;
            (1..=steps)
                .map(|t| {
                    let bar = f(t as f64) / f0;
                    let beta = (1.0 - bar / prev).min(0.999);
                    prev = bar;
                    beta
                })
                .collect()
        }
    };
    DiffusionSchedule::from_betas(betas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vp_reference_values() {
        // Frozen from direct evaluation of the variance function at T = 4,
        // (beta_min, beta_max) = (0.1, 10).
        let s = build_schedule(4, 0.1, 10.0).unwrap();
        assert!((s.betas[0] - 0.2842147).abs() < 1e-5, "{}", s.betas[0]);
        assert!((s.betas[3] - 0.8881532).abs() < 1e-5, "{}", s.betas[3]);
    }

    #[test]
    fn schedule_tables_are_consistent() {
        for kind in [NoiseSchedule::Vp, NoiseSchedule::Linear, NoiseSchedule::Cosine] {
            for steps in [1usize, 2, 4, 8, 16] {
                let s = build_schedule_with(kind, steps, 0.1, 10.0).unwrap();
                assert_eq!(s.steps, steps);
                for t in 0..steps {
                    assert!(s.betas[t] > 0.0 && s.betas[t] < 1.0);
                    assert!((s.alphas[t] - (1.0 - s.betas[t])).abs() < 1e-15);
                    if t > 0 {
                        assert!(s.betas[t] > s.betas[t - 1], "{kind} T={steps}");
                        assert!(s.alpha_bars[t] < s.alpha_bars[t - 1]);
                    }
                    assert!(s.posterior_betas[t] >= 0.0);
                    assert!(s.posterior_betas[t] <= s.betas[t] + 1e-15);
                }
                // The final reverse step carries no injected noise.
                assert_eq!(s.posterior_betas[0], 0.0);
                let product: f64 = s.alphas.iter().product();
                assert!((product - s.alpha_bars[steps - 1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        assert!(build_schedule(0, 0.1, 10.0).is_err());
        assert!(build_schedule(4, 0.0, 10.0).is_err());
        assert!(build_schedule(4, 5.0, 5.0).is_err());
        // Large enough beta_max pushes the exponent past beta = 1.
        assert!(build_schedule_with(NoiseSchedule::Linear, 1, 0.1, 10.0).is_ok());
    }

    #[test]
    fn linear_matches_vp_at_the_endpoints() {
        let vp = build_schedule_with(NoiseSchedule::Vp, 4, 0.1, 10.0).unwrap();
        let lin = build_schedule_with(NoiseSchedule::Linear, 4, 0.1, 10.0).unwrap();
        assert!((vp.betas[0] - lin.betas[0]).abs() < 1e-12);
        assert!((vp.betas[3] - lin.betas[3]).abs() < 1e-12);
        assert!((vp.betas[1] - lin.betas[1]).abs() > 1e-3);
    }
}
