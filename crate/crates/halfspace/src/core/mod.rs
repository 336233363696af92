//! Grids, field containers, exponent bookkeeping and parabolic scaling.

mod field;
mod grid;
mod index;
mod iteration;
mod scaling;

pub use field::{BoundaryField, Domain, ScalarField, TensorField, VectorField};
pub use field::{inner2, inner3};
pub(crate) use field::lq_array;
pub use grid::{Grading, HalfSpaceGrid};
pub use index::BesovIndex;
pub use iteration::{IterationStep, IterationTrace};
pub use scaling::{parabolic_scale, scale_boundary, scale_tensor, scale_vector};
