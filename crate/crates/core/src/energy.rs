//! Rotary-wing propulsion power and per-slot swarm flight energy.

use serde::{Deserialize, Serialize};

/// Airframe and rotor constants of one UAV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotorcraftParams {
    /// Aircraft weight, N.
    pub weight_n: f64,
    /// Mean rotor induced velocity in hover, m/s.
    pub v0: f64,
    /// Rotor blade tip speed, m/s.
    pub u_tip: f64,
    /// Fuselage drag ratio.
    pub d0: f64,
    /// Air density, kg/m^3.
    pub rho: f64,
    /// Rotor solidity.
    pub solidity: f64,
    /// Rotor disk area, m^2.
    pub area: f64,
    /// Incremental correction factor to induced power.
    pub m_corr: f64,
    /// Profile drag coefficient.
    pub kappa: f64,
    /// Blade angular velocity, rad/s.
    pub omega: f64,
    /// Rotor radius, m.
    pub radius: f64,
}

impl Default for RotorcraftParams {
    fn default() -> Self {
        Self {
            weight_n: 19.6,
            v0: 4.03,
            u_tip: 120.0,
            d0: 0.6,
            rho: 1.225,
            solidity: 0.05,
            area: 0.503,
            m_corr: 0.1,
            kappa: 0.012,
            omega: 300.0,
            radius: 0.4,
        }
    }
}

impl RotorcraftParams {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("weight_n", self.weight_n),
            ("v0", self.v0),
            ("u_tip", self.u_tip),
            ("d0", self.d0),
            ("rho", self.rho),
            ("solidity", self.solidity),
            ("area", self.area),
            ("m_corr", self.m_corr),
            ("kappa", self.kappa),
            ("omega", self.omega),
            ("radius", self.radius),
        ];
        for (name, value) in fields {
            if value <= 0.0 {
                return Err(format!("rotorcraft parameter {name} must be positive, got {value}"));
            }
        }
        Ok(())
    }
}

/// Hover power split into its two closed-form components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoverConstants {
    /// Induced power in hover, W.
    pub p_induced_w: f64,
    /// Blade profile power in hover, W.
    pub p_blade_w: f64,
}

impl HoverConstants {
    pub fn total(&self) -> f64 {
        self.p_induced_w + self.p_blade_w
    }
}

/// Induced and blade profile power in hover.
pub fn hover_constants(params: &RotorcraftParams) -> HoverConstants {
    let p_induced_w =
        (1.0 + params.m_corr) * params.weight_n.powf(1.5) / (2.0 * params.rho * params.area).sqrt();
    let p_blade_w = params.kappa / 8.0
        * params.rho
        * params.solidity
        * params.area
        * params.omega.powi(3)
        * params.radius.powi(3);
    HoverConstants {
        p_induced_w,
        p_blade_w,
    }
}

/// Propulsion power for level flight at horizontal speed `‖(vx, vy)‖`.
pub fn level_flight_power(vx: f64, vy: f64, params: &RotorcraftParams) -> f64 {
    let hover = hover_constants(params);
    let v2 = vx * vx + vy * vy;
    let v = v2.sqrt();
    let v0_2 = params.v0 * params.v0;
    // sqrt(1 + v^4/4v0^4) - v^2/2v0^2 is positive for every v; the max guard
    // only absorbs floating-point rounding at large speeds.
    let radicand = ((1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)).sqrt() - v2 / (2.0 * v0_2)).max(0.0);
    let induced = hover.p_induced_w * radicand.sqrt();
    let blade = hover.p_blade_w * (1.0 + 3.0 * v2 / (params.u_tip * params.u_tip));
    let parasite = 0.5 * params.d0 * params.rho * params.solidity * params.area * v.powi(3);
    induced + blade + parasite
}

/// Climb power. Descent is unpowered (auto-rotation), so it costs nothing.
pub fn vertical_flight_power(vz: f64, params: &RotorcraftParams) -> f64 {
    if vz > 0.0 {
        params.weight_n * vz
    } else {
        0.0
    }
}

/// Flight energy of the whole swarm over one slot of `dt` seconds.
pub fn swarm_energy(velocities: &[[f64; 3]], dt: f64, params: &RotorcraftParams) -> f64 {
    assert!(dt > 0.0, "slot duration must be positive");
    velocities
        .iter()
        .map(|v| dt * (level_flight_power(v[0], v[1], params) + vertical_flight_power(v[2], params)))
        .sum()
}
