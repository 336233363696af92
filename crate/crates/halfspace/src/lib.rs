//! Half-space Stokes and Navier–Stokes solver.
//!
//! The linear solve follows the potential representation
//! `u = w + ∇φ + v + V`: a heat extension `v` of the initial data, a
//! Duhamel volume potential `V` of the force, a harmonic correction `∇φ`
//! for the normal boundary data and a Stokes layer potential `w` for the
//! remaining tangential data. The nonlinear problem is solved by Picard
//! iteration on the quadratic flux. A discrete anisotropic Besov engine
//! measures all fields so that every boundedness estimate can be probed
//! numerically.
//!
//! Tangential directions are periodic, the vertical axis is `[0, X]` and
//! time is sampled uniformly on `[0, T]`.

pub mod besov;
pub mod core;
pub mod error;
pub mod navier_stokes;
pub mod potentials;
pub mod quad;
pub mod special;
pub mod stokes;
pub mod transforms;
pub mod verify;

pub use crate::core::{
    BesovIndex, BoundaryField, Domain, Grading, HalfSpaceGrid, IterationTrace, ScalarField,
    TensorField, VectorField,
};
pub use crate::error::{Error, Result};

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
