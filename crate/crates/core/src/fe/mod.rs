//! Continuous finite-element recovery of the velocity `(u, v)` from `(h, hP, hQ)`.

pub mod assemble;
pub mod recover;
pub mod space;
pub mod sparse;

pub use assemble::{FeSolver, VelocityField};
pub use recover::{dry_fallback_velocity, InflowVelocity};
pub use space::FeSpace;
