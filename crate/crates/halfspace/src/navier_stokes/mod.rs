//! Picard iteration for the Navier–Stokes problem and weak-form residuals.

mod flux;
mod picard;
mod weak;

pub use flux::nonlinear_flux;
pub use picard::{picard_iterate, picard_solve, PicardOptions, PicardOutcome, PicardStatus};
pub use weak::{standard_family, weak_ns_gaps, weak_ns_residual, weak_stokes_gaps, TestFunction, WeakGap, WeakTerms};
