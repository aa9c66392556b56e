//! Numerical core for a two-dimensional dispersion-enhanced Green-Naghdi
//! solver.
//!
//! The conservative variables `(h, hP, hQ)` are advanced with a central
//! discontinuous Galerkin method on a pair of overlapping Cartesian meshes.
//! The depth-averaged velocity is recovered from the auxiliary momenta by a
//! continuous finite element solve on each mesh. Positivity of the water depth
//! and exact preservation of still water are optional scheme features.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// negated comparisons also reject NaN
#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod boundary;
pub mod cdg;
pub mod error;
pub mod fe;
pub mod limiters;
pub mod mesh;
pub mod model;
pub mod problem;
pub mod timestepper;

pub use error::{Error, Result};
pub use mesh::{Boundary, BoundarySet, Domain, Grid, MeshKind, MeshPair};
pub use model::PhysParams;
pub use problem::{InitialCondition, Problem, SchemeOptions, Simulation, StepReport};
