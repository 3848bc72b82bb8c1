//! A desk-scale laboratory for the equal-mass figure-8 three-body
//! choreography: high-accuracy simulation, detection of the triangular and
//! collinear configurations, derived curves (hodograph, acceleration
//! diagram, center-of-gravity locus, energy ratio), cosine-series
//! approximations, and a catalog of classical figure-8 quartic curves with
//! elliptic-integral arclengths.
//!
//! Everything works in normalized units where the total mass times G is 1
//! and the orbit period is 2*pi; see [`dynamics::UnitSystem`] to convert to
//! physical units.
//!
//! Start with [`dynamics::canonical_initial_state`] and
//! [`integrate::integrate`], then feed the trajectory to the analyses in
//! [`analysis`]. The `examples/` directory has one runnable example per
//! capability.

pub mod analysis;
pub mod cli;
pub mod curves;
pub mod dynamics;
pub mod export;
pub mod integrate;
pub mod series;
pub mod vec2;

pub use dynamics::{canonical_initial_state, BodyState, UnitSystem};
pub use integrate::{integrate, Trajectory};
pub use vec2::Vec2;
