//! Fourier analysis: transforms, Riesz multipliers, Helmholtz projection,
//! extensions and traces.

mod extend;
pub(crate) mod fd;
pub(crate) mod fft;
mod ops;
mod spectral;

pub use extend::{
    divergence_check, extend_solenoidal, extend_zero, extend_zero_vector, trace_boundary, Extension, DIV_TOL,
};
pub use fd::{fornberg_weights, VerticalStencil};
pub use ops::{
    divergence_half, helmholtz_project, q_potential, riesz_apply, spectral_divergence, spectral_gradient,
    RieszTarget,
};
pub(crate) use ops::{d_tan, gradient_scale_half, riesz_tan, riesz_tan2};
pub use spectral::{AxisState, SpectralField};
