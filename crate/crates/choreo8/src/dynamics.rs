//! Normalized equations of motion, first integrals, energies, and unit
//! conversion for the equal-mass planar three-body system.
//!
//! Units: lengths are fractions of a reference length R, time is the angle
//! tau = sqrt(G m / R^3) t with m the total mass, so one period of the
//! figure-8 is 2*pi. In these units G*m_total = 1 and each particle has
//! mass 1/3.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::vec2::Vec2;

/// Gravitational parameter of one particle in normalized units (G*m_total = 1).
pub const GM_PARTICLE: f64 = 1.0 / 3.0;

/// Apex distance of particle 1 at the isosceles start (the orbit's semi-axis).
pub const FIG8_X0: f64 = 0.746156390452;
/// |y| of the base particles at the isosceles start.
pub const FIG8_Y0: f64 = 0.238313004097;
/// Apex speed at the isosceles start.
pub const FIG8_V0: f64 = 0.324677661931;
/// |x velocity| of the base particles at the isosceles start.
///
/// The commonly reprinted value .764226 is a digit transposition; the orbit
/// only closes (and only reproduces E_t = -0.6215955544) with .762423.
pub const FIG8_VX0: f64 = 0.762422658820;

/// Total energy of the canonical orbit, in the per-particle-mass scale
/// (kinetic = sum of v_i^2 / 2, potential = -(1/3) sum of 1/d_ij).
pub const FIG8_ENERGY: f64 = -0.6215955544;

#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    #[error("coincident positions: particles {0} and {1} overlap")]
    Singularity(usize, usize),
    #[error("zero-angular-momentum constraint violated: |vx0*y0 - 3*v0*x0/4 - delta*delta_v| = {0:.3e}")]
    ConstraintViolated(f64),
    #[error("unknown quantity kind `{0}`")]
    UnknownQuantityKind(String),
    #[error("unit system config: {0}")]
    Config(String),
}

/// Phase-space point of the three bodies at normalized time `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyState {
    pub tau: f64,
    pub r: [Vec2; 3],
    pub v: [Vec2; 3],
}

impl BodyState {
    /// Smallest pairwise separation.
    pub fn min_separation(&self) -> f64 {
        let mut m = f64::INFINITY;
        for (i, j) in PAIRS {
            m = m.min((self.r[i] - self.r[j]).norm());
        }
        m
    }

    pub fn separation(&self, i: usize, j: usize) -> f64 {
        (self.r[i] - self.r[j]).norm()
    }

    /// Point reflection through the origin (positions and velocities).
    pub fn point_reflected(&self) -> BodyState {
        BodyState {
            tau: self.tau,
            r: [-self.r[0], -self.r[1], -self.r[2]],
            v: [-self.v[0], -self.v[1], -self.v[2]],
        }
    }
}

pub const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

/// First integrals of motion evaluated at a state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegralReport {
    /// Center of mass (should be the origin).
    pub com: Vec2,
    /// Total linear momentum per particle mass (should be zero).
    pub momentum: Vec2,
    /// Total angular momentum, sum of r_i x v_i (should be zero).
    pub ang_momentum: f64,
    /// Total energy in the per-particle-mass scale.
    pub energy: f64,
}

/// Kinetic/potential breakdown in the per-particle-mass scale.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyBreakdown {
    pub kinetic_per_particle: [f64; 3],
    pub kinetic_total: f64,
    pub potential_total: f64,
    pub total: f64,
    /// |potential| / kinetic.
    pub pk_ratio: f64,
}

/// The isosceles configuration of the canonical figure-8 orbit at tau = 0.
///
/// Particle 1 sits at its maximal distance on the +x axis moving in +y;
/// particles 2 and 3 mirror each other across the x axis.
pub fn canonical_initial_state() -> BodyState {
    BodyState {
        tau: 0.0,
        r: [
            Vec2::new(FIG8_X0, 0.0),
            Vec2::new(-FIG8_X0 / 2.0, FIG8_Y0),
            Vec2::new(-FIG8_X0 / 2.0, -FIG8_Y0),
        ],
        v: [
            Vec2::new(0.0, FIG8_V0),
            Vec2::new(FIG8_VX0, -FIG8_V0 / 2.0),
            Vec2::new(-FIG8_VX0, -FIG8_V0 / 2.0),
        ],
    }
}

/// Pairwise Newtonian accelerations; the three vectors sum to zero.
pub fn acceleration(state: &BodyState) -> Result<[Vec2; 3], DynamicsError> {
    let mut a = [Vec2::ZERO; 3];
    for (i, j) in PAIRS {
        let d = state.r[j] - state.r[i];
        let dist = d.norm();
        if dist < 1e-12 {
            return Err(DynamicsError::Singularity(i + 1, j + 1));
        }
        let f = GM_PARTICLE / (dist * dist * dist) * d;
        a[i] += f;
        a[j] -= f;
    }
    Ok(a)
}

/// Time derivative of the accelerations, used by the dense-output interpolant.
pub fn jerk(state: &BodyState) -> Result<[Vec2; 3], DynamicsError> {
    let mut j3 = [Vec2::ZERO; 3];
    for (i, j) in PAIRS {
        let d = state.r[j] - state.r[i];
        let w = state.v[j] - state.v[i];
        let dist = d.norm();
        if dist < 1e-12 {
            return Err(DynamicsError::Singularity(i + 1, j + 1));
        }
        let d3 = dist * dist * dist;
        let d5 = d3 * dist * dist;
        let term = GM_PARTICLE * (w / d3 - 3.0 * d.dot(w) / d5 * d);
        j3[i] += term;
        j3[j] -= term;
    }
    Ok(j3)
}

pub fn first_integrals(state: &BodyState) -> IntegralReport {
    let mut com = Vec2::ZERO;
    let mut mom = Vec2::ZERO;
    let mut ang = 0.0;
    for i in 0..3 {
        com += state.r[i];
        mom += state.v[i];
        ang += state.r[i].cross(state.v[i]);
    }
    let e = energies_unchecked(state);
    IntegralReport {
        com: com / 3.0,
        momentum: mom,
        ang_momentum: ang,
        energy: e.total,
    }
}

pub fn energies(state: &BodyState) -> Result<EnergyBreakdown, DynamicsError> {
    for (i, j) in PAIRS {
        if state.separation(i, j) < 1e-12 {
            return Err(DynamicsError::Singularity(i + 1, j + 1));
        }
    }
    Ok(energies_unchecked(state))
}

fn energies_unchecked(state: &BodyState) -> EnergyBreakdown {
    let kinetic_per_particle = [
        0.5 * state.v[0].norm_sq(),
        0.5 * state.v[1].norm_sq(),
        0.5 * state.v[2].norm_sq(),
    ];
    let kinetic_total: f64 = kinetic_per_particle.iter().sum();
    let mut potential_total = 0.0;
    for (i, j) in PAIRS {
        potential_total -= GM_PARTICLE / state.separation(i, j);
    }
    EnergyBreakdown {
        kinetic_per_particle,
        kinetic_total,
        potential_total,
        total: kinetic_total + potential_total,
        pk_ratio: -potential_total / kinetic_total,
    }
}

/// Fictitious attractor reproducing the net pull on one particle.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum Cog {
    /// A particle of mass 2*m_total/3 here produces exactly the observed
    /// acceleration.
    Point(Vec2),
    /// The acceleration vanishes; only the limiting direction survives.
    AtInfinity { direction: Vec2 },
}

/// Position where a mass of 2*m_total/3 would cause the acceleration felt by
/// particle `i`. Returns a point at infinity when that acceleration is zero,
/// with `direction` the unit direction of approach.
pub fn center_of_gravity(state: &BodyState, i: usize) -> Result<Cog, DynamicsError> {
    let a = acceleration(state)?[i];
    let mag = a.norm();
    match a.unit() {
        None => Ok(Cog::AtInfinity {
            direction: Vec2::new(1.0, 0.0),
        }),
        Some(dir) if mag < 1e-14 => Ok(Cog::AtInfinity { direction: dir }),
        Some(dir) => {
            let d = (2.0 * GM_PARTICLE / mag).sqrt();
            Ok(Cog::Point(state.r[i] + d * dir))
        }
    }
}

/// Builds the tau = 0 isosceles-family configuration: particle 1 at (x0, 0)
/// with velocity (0, v0), particles 2 and 3 at (-x0/2 +- delta, +-y0) with
/// velocities (+-vx0, -v0/2 +- delta_v).
///
/// The inputs must satisfy the zero-angular-momentum constraint
/// `vx0*y0 = 3*(v0/2)*(x0/2) + delta*delta_v` (checked to 1e-3, which admits
/// constants rounded to six digits).
pub fn isosceles_family_state(
    x0: f64,
    y0: f64,
    v0: f64,
    vx0: f64,
    delta: f64,
    delta_v: f64,
) -> Result<BodyState, DynamicsError> {
    let violation = (vx0 * y0 - 0.75 * v0 * x0 - delta * delta_v).abs();
    if violation > 1e-3 {
        return Err(DynamicsError::ConstraintViolated(violation));
    }
    Ok(BodyState {
        tau: 0.0,
        r: [
            Vec2::new(x0, 0.0),
            Vec2::new(-x0 / 2.0 + delta, y0),
            Vec2::new(-x0 / 2.0 - delta, -y0),
        ],
        v: [
            Vec2::new(0.0, v0),
            Vec2::new(vx0, -v0 / 2.0 + delta_v),
            Vec2::new(-vx0, -v0 / 2.0 - delta_v),
        ],
    })
}

/// Physical unit system attached to the normalized orbit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UnitSystem {
    /// Reference length in meters.
    #[serde(rename = "R_m")]
    pub r_m: f64,
    /// Total mass in kilograms.
    #[serde(rename = "m_total_kg")]
    pub m_total_kg: f64,
    /// Gravitational constant, m^3 kg^-1 s^-2.
    #[serde(default = "default_g", rename = "G")]
    pub g: f64,
}

fn default_g() -> f64 {
    UnitSystem::DEFAULT_G
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    Length,
    Time,
    Velocity,
    Acceleration,
    AngularMomentum,
    Energy,
}

impl std::str::FromStr for QuantityKind {
    type Err = DynamicsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "length" => Ok(Self::Length),
            "time" => Ok(Self::Time),
            "velocity" => Ok(Self::Velocity),
            "acceleration" => Ok(Self::Acceleration),
            "angular_momentum" | "angular momentum" => Ok(Self::AngularMomentum),
            "energy" => Ok(Self::Energy),
            other => Err(DynamicsError::UnknownQuantityKind(other.to_string())),
        }
    }
}

impl UnitSystem {
    pub const DEFAULT_G: f64 = 6.674e-11;

    pub fn from_json_file(path: &Path) -> Result<UnitSystem, DynamicsError> {
        let text = fs::read_to_string(path)
            .map_err(|e| DynamicsError::Config(format!("{}: {e}", path.display())))?;
        let us: UnitSystem = serde_json::from_str(&text)
            .map_err(|e| DynamicsError::Config(format!("{}: {e}", path.display())))?;
        if us.r_m <= 0.0 || us.m_total_kg <= 0.0 || us.g <= 0.0 {
            return Err(DynamicsError::Config(
                "R_m, m_total_kg and G must be positive".into(),
            ));
        }
        Ok(us)
    }

    pub fn gm(&self) -> f64 {
        self.g * self.m_total_kg
    }

    /// Orbit period in seconds: 2*pi*sqrt(R^3/(G m)).
    pub fn period_s(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.r_m.powi(3) / self.gm()).sqrt()
    }

    /// Converts a normalized value into SI units for the given kind.
    pub fn denormalize(&self, kind: QuantityKind, value: f64) -> f64 {
        let r = self.r_m;
        let gm = self.gm();
        match kind {
            QuantityKind::Length => value * r,
            QuantityKind::Time => value * (r.powi(3) / gm).sqrt(),
            QuantityKind::Velocity => value * (gm / r).sqrt(),
            QuantityKind::Acceleration => value * gm / (r * r),
            QuantityKind::AngularMomentum => value * (gm * r).sqrt(),
            QuantityKind::Energy => value * gm / r,
        }
    }
}
