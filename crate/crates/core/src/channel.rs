//! Air-to-ground channel model and secrecy rate.
//!
//! The LoS probability of a link depends on the elevation angle between the
//! array center and the ground terminal; the average path loss blends the
//! LoS and NLoS excess losses with the free-space power law. Link rates are
//! spectral efficiencies in bps/Hz and the secrecy rate is the clamped
//! difference between the legitimate and the wiretap rate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beamforming::SPEED_OF_LIGHT;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChannelError {
    #[error("link endpoints coincide; elevation and path loss are undefined")]
    ZeroDistance,
}

/// Channel constants. The excess losses are stored in dB and converted to
/// linear factors where they enter the path loss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// LoS-probability environment constant (also the sigmoid midpoint, deg).
    pub c0: f64,
    /// LoS-probability slope constant, 1/deg.
    pub c1: f64,
    /// Excess path loss of LoS links, dB.
    pub mu1_db: f64,
    /// Excess path loss of NLoS links, dB.
    pub mu2_db: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Carrier frequency, Hz.
    pub carrier_hz: f64,
    /// Receiver noise power, W.
    pub noise_power_w: f64,
    /// Transmission bandwidth, Hz. Carried for reporting; rates are per-Hz.
    pub bandwidth_hz: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            c0: 9.61,
            c1: 0.16,
            mu1_db: 1.0,
            mu2_db: 20.0,
            alpha: 2.0,
            carrier_hz: 2.4e9,
            noise_power_w: 1e-12,
            bandwidth_hz: 1e6,
        }
    }
}

impl ChannelParams {
    /// Free-space path loss factor 4 pi f_c / c, 1/m.
    pub fn free_space_factor(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.carrier_hz / SPEED_OF_LIGHT
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.mu2_db > self.mu1_db && self.mu1_db > 0.0) {
            return Err(format!(
                "excess losses must satisfy mu2 > mu1 > 0 dB, got mu1={} mu2={}",
                self.mu1_db, self.mu2_db
            ));
        }
        if self.alpha <= 0.0 {
            return Err(format!("path-loss exponent must be positive, got {}", self.alpha));
        }
        if self.noise_power_w <= 0.0 {
            return Err(format!("noise power must be positive, got {}", self.noise_power_w));
        }
        if self.carrier_hz <= 0.0 {
            return Err(format!("carrier frequency must be positive, got {}", self.carrier_hz));
        }
        Ok(())
    }
}

/// A transmitter-receiver pair: the array center and a ground terminal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkGeometry {
    pub tx_center: [f64; 3],
    pub rx: [f64; 3],
}

impl LinkGeometry {
    pub fn new(tx_center: [f64; 3], rx: [f64; 3]) -> Self {
        Self { tx_center, rx }
    }

    pub fn distance(&self) -> f64 {
        let dx = self.tx_center[0] - self.rx[0];
        let dy = self.tx_center[1] - self.rx[1];
        let dz = self.tx_center[2] - self.rx[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Converts a dB quantity to a linear factor.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Elevation of the transmitter above the receiver's horizon, degrees.
/// Negative when the receiver sits above the array center.
pub fn elevation_deg(link: &LinkGeometry) -> Result<f64, ChannelError> {
    let d = link.distance();
    if d == 0.0 {
        return Err(ChannelError::ZeroDistance);
    }
    let ratio = ((link.tx_center[2] - link.rx[2]) / d).clamp(-1.0, 1.0);
    Ok(ratio.asin().to_degrees())
}

/// Elevation-dependent LoS probability, strictly increasing in the elevation
/// and mapping all of R into (0, 1).
pub fn los_probability(elev_deg: f64, params: &ChannelParams) -> f64 {
    1.0 / (1.0 + params.c0 * (-params.c1 * (elev_deg - params.c0)).exp())
}

/// Average channel power gain of a link: the reciprocal of the LoS/NLoS
/// blended excess loss times the free-space power law.
pub fn average_channel_gain(link: &LinkGeometry, params: &ChannelParams) -> Result<f64, ChannelError> {
    let d = link.distance();
    if d == 0.0 {
        return Err(ChannelError::ZeroDistance);
    }
    let p_los = los_probability(elevation_deg(link)?, params);
    let excess = p_los * db_to_linear(params.mu1_db) + (1.0 - p_los) * db_to_linear(params.mu2_db);
    let spread = (params.free_space_factor() * d).powf(params.alpha);
    Ok(1.0 / (excess * spread))
}

/// Spectral efficiency of a link, bps/Hz.
pub fn link_rate(tx_power_w: f64, channel_gain: f64, antenna_gain: f64, params: &ChannelParams) -> f64 {
    (1.0 + tx_power_w * channel_gain * antenna_gain / params.noise_power_w).log2()
}

/// Achievable secrecy rate: the legitimate rate minus the wiretap rate,
/// clamped at zero.
pub fn secrecy_rate(rate_rbs: f64, rate_eav: f64) -> f64 {
    (rate_rbs - rate_eav).max(0.0)
}
