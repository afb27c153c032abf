//! Geometry and far-field electromagnetics of the UAV virtual antenna array.
//!
//! Each UAV carries one isotropic element with an excitation current weight
//! in `[0, 1]`. Open-loop phase synchronisation offsets every element's phase
//! by its displacement from the array center so that contributions add
//! coherently toward the steering direction. The directive gain toward any
//! direction is the array factor power normalised by its integral over the
//! sphere, evaluated by midpoint quadrature.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BeamformingError {
    #[error("swarm center of an empty position list is undefined")]
    EmptySwarm,
}

/// Spherical direction. `theta` is the polar angle from the +z axis in
/// `[0, pi]`, `phi` the azimuth in `[-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    /// Builds a direction, wrapping `phi` into `[-pi, pi]`.
    ///
    /// Panics if `theta` lies outside `[0, pi]`; callers construct polar
    /// angles from `acos`, so anything else is a bug.
    pub fn new(theta: f64, phi: f64) -> Self {
        assert!(
            (0.0..=std::f64::consts::PI).contains(&theta),
            "polar angle {theta} outside [0, pi]"
        );
        Self {
            theta,
            phi: wrap_angle(phi),
        }
    }

    /// Direction of `to` as seen from `from`, or `None` when the points
    /// coincide.
    pub fn between(from: [f64; 3], to: [f64; 3]) -> Option<Self> {
        let dx = to[0] - from[0];
        let dy = to[1] - from[1];
        let dz = to[2] - from[2];
        let r = (dx * dx + dy * dy + dz * dz).sqrt();
        if r == 0.0 {
            return None;
        }
        Some(Self::new((dz / r).clamp(-1.0, 1.0).acos(), dy.atan2(dx)))
    }

    /// Cartesian unit vector (sin t cos p, sin t sin p, cos t).
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Wraps an angle into `[-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut w = (a + std::f64::consts::PI).rem_euclid(two_pi) - std::f64::consts::PI;
    if w < -std::f64::consts::PI {
        w += two_pi;
    }
    w
}

/// One array element: a UAV position and its excitation current weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArrayElement {
    pub position: [f64; 3],
    pub excitation: f64,
}

impl ArrayElement {
    pub fn new(position: [f64; 3], excitation: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&excitation),
            "excitation weight {excitation} outside [0, 1]"
        );
        Self {
            position,
            excitation,
        }
    }
}

/// The virtual array: elements, their arithmetic-mean center, and the phase
/// constant 2 pi / wavelength.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrayGeometry {
    elements: Vec<ArrayElement>,
    center: [f64; 3],
    wavelength: f64,
    phase_constant: f64,
}

impl ArrayGeometry {
    pub fn new(elements: Vec<ArrayElement>, wavelength: f64) -> Result<Self, BeamformingError> {
        assert!(wavelength > 0.0, "wavelength must be positive");
        let positions: Vec<[f64; 3]> = elements.iter().map(|e| e.position).collect();
        let center = swarm_center(&positions)?;
        Ok(Self {
            elements,
            center,
            wavelength,
            phase_constant: 2.0 * std::f64::consts::PI / wavelength,
        })
    }

    /// Convenience constructor from parallel position/excitation slices at a
    /// given carrier frequency.
    pub fn from_swarm(
        positions: &[[f64; 3]],
        excitations: &[f64],
        carrier_hz: f64,
    ) -> Result<Self, BeamformingError> {
        assert_eq!(
            positions.len(),
            excitations.len(),
            "positions and excitations must pair up"
        );
        let elements = positions
            .iter()
            .zip(excitations)
            .map(|(&p, &i)| ArrayElement::new(p, i))
            .collect();
        Self::new(elements, SPEED_OF_LIGHT / carrier_hz)
    }

    pub fn elements(&self) -> &[ArrayElement] {
        &self.elements
    }

    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn phase_constant(&self) -> f64 {
        self.phase_constant
    }

    /// Sum of excitation weights; zero means the array radiates nothing.
    pub fn total_excitation(&self) -> f64 {
        self.elements.iter().map(|e| e.excitation).sum()
    }

    /// Element offset from the array center.
    fn offset(&self, k: usize) -> [f64; 3] {
        let p = self.elements[k].position;
        [
            p[0] - self.center[0],
            p[1] - self.center[1],
            p[2] - self.center[2],
        ]
    }

    /// Propagation phase c_p * (offset . unit(dir)) of element `k` toward a
    /// direction. Shared by the open-loop phase and the array factor so that
    /// they cancel exactly at the steering direction.
    fn travel_phase(&self, k: usize, unit: [f64; 3]) -> f64 {
        let d = self.offset(k);
        self.phase_constant * (d[0] * unit[0] + d[1] * unit[1] + d[2] * unit[2])
    }
}

/// Component-wise arithmetic mean of a non-empty set of positions.
pub fn swarm_center(positions: &[[f64; 3]]) -> Result<[f64; 3], BeamformingError> {
    if positions.is_empty() {
        return Err(BeamformingError::EmptySwarm);
    }
    let n = positions.len() as f64;
    let mut acc = [0.0; 3];
    for p in positions {
        acc[0] += p[0];
        acc[1] += p[1];
        acc[2] += p[2];
    }
    Ok([acc[0] / n, acc[1] / n, acc[2] / n])
}

/// Open-loop initial phases: each element is offset by minus its propagation
/// phase toward the steering direction, so all contributions are co-phased
/// there.
pub fn initial_phase(geometry: &ArrayGeometry, steer: Direction) -> Vec<f64> {
    let unit = steer.unit_vector();
    (0..geometry.elements().len())
        .map(|k| -geometry.travel_phase(k, unit))
        .collect()
}

/// Array factor toward `eval_dir` when the array is phase-steered toward
/// `steer`. At `eval_dir == steer` every element contributes with zero net
/// phase, so the magnitude equals the sum of excitations exactly.
pub fn array_factor(geometry: &ArrayGeometry, steer: Direction, eval_dir: Direction) -> Complex64 {
    let phases = initial_phase(geometry, steer);
    array_factor_with_phases(geometry, &phases, eval_dir)
}

fn array_factor_with_phases(
    geometry: &ArrayGeometry,
    phases: &[f64],
    eval_dir: Direction,
) -> Complex64 {
    let unit = eval_dir.unit_vector();
    let mut re = 0.0;
    let mut im = 0.0;
    for (k, element) in geometry.elements().iter().enumerate() {
        let phase = phases[k] + geometry.travel_phase(k, unit);
        let (s, c) = phase.sin_cos();
        re += element.excitation * c;
        im += element.excitation * s;
    }
    Complex64::new(re, im)
}

/// Spherical quadrature resolution for the gain denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainQuadrature {
    /// Node count over the polar range.
    pub n_theta: usize,
    /// Node count over the azimuth range `[0, 2 pi]`.
    pub n_phi: usize,
}

impl Default for GainQuadrature {
    fn default() -> Self {
        Self {
            n_theta: 181,
            n_phi: 360,
        }
    }
}

impl GainQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let q = Self { n_theta, n_phi };
        q.assert_valid();
        q
    }

    fn assert_valid(&self) {
        assert!(
            self.n_theta >= 2 && self.n_phi >= 2,
            "quadrature needs at least 2 nodes per axis"
        );
    }

    /// Builds the midpoint node set. The polar axis is discretised uniformly
    /// in cos(theta), which folds the sin(theta) surface element into the
    /// node placement and makes a constant integrand integrate to exactly
    /// 4 pi.
    pub fn grid(&self) -> SphereGrid {
        self.assert_valid();
        let two_pi = 2.0 * std::f64::consts::PI;
        let du = 2.0 / self.n_theta as f64;
        let dphi = two_pi / self.n_phi as f64;
        let azimuths: Vec<(f64, f64)> = (0..self.n_phi)
            .map(|j| ((j as f64 + 0.5) * dphi).sin_cos())
            .collect();
        let mut nodes = Vec::with_capacity(self.n_theta * self.n_phi);
        for i in 0..self.n_theta {
            let u = -1.0 + (i as f64 + 0.5) * du;
            let sin_theta = (1.0 - u * u).max(0.0).sqrt();
            for &(sp, cp) in &azimuths {
                nodes.push([sin_theta * cp, sin_theta * sp, u]);
            }
        }
        SphereGrid {
            nodes,
            node_solid_angle: du * dphi,
        }
    }
}

/// Precomputed quadrature nodes on the unit sphere, each carrying the same
/// solid-angle weight.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    nodes: Vec<[f64; 3]>,
    node_solid_angle: f64,
}

impl SphereGrid {
    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn node_solid_angle(&self) -> f64 {
        self.node_solid_angle
    }
}

/// Directive gain field of one steered array: the sphere integral of the
/// pattern power is computed once and shared by every direction the pattern
/// is queried at within the same time slot.
#[derive(Clone, Debug)]
pub struct GainField<'a> {
    geometry: &'a ArrayGeometry,
    phases: Vec<f64>,
    denominator: f64,
    degenerate: bool,
}

impl<'a> GainField<'a> {
    pub fn new(geometry: &'a ArrayGeometry, steer: Direction, grid: &SphereGrid) -> Self {
        let phases = initial_phase(geometry, steer);
        // An all-zero excitation vector radiates nothing; the gain is defined
        // as zero instead of 0/0.
        let degenerate = geometry.total_excitation() <= 0.0;
        let mut power = 0.0;
        if !degenerate {
            for unit in grid.nodes() {
                let mut re = 0.0;
                let mut im = 0.0;
                for (k, element) in geometry.elements().iter().enumerate() {
                    let phase = phases[k] + geometry.travel_phase(k, *unit);
                    let (s, c) = phase.sin_cos();
                    re += element.excitation * c;
                    im += element.excitation * s;
                }
                power += re * re + im * im;
            }
            power *= grid.node_solid_angle();
        }
        Self {
            geometry,
            phases,
            denominator: power,
            degenerate,
        }
    }

    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    /// Gain toward one direction: 4 pi |AF|^2 / integral of |AF|^2.
    pub fn gain(&self, eval_dir: Direction) -> f64 {
        if self.degenerate {
            return 0.0;
        }
        let af = array_factor_with_phases(self.geometry, &self.phases, eval_dir);
        4.0 * std::f64::consts::PI * af.norm_sqr() / self.denominator
    }
}

/// One-shot antenna gain toward `eval_dir` for an array steered at `steer`.
///
/// When the same steered pattern is queried in several directions, build a
/// [`GainField`] once instead.
pub fn antenna_gain(
    geometry: &ArrayGeometry,
    steer: Direction,
    eval_dir: Direction,
    quad: GainQuadrature,
) -> f64 {
    GainField::new(geometry, steer, &quad.grid()).gain(eval_dir)
}
