//! Kernels and potential operators: heat and Newton kernels, the Poisson
//! extension, the heat semigroup and its trace, `T1`, `T1*`, `T2`, `T2*`,
//! the volume potential and the vertical Newton operator `𝓢`.

mod heat;
mod kernels;
mod layer;
pub(crate) mod modes;
mod poisson;
pub(crate) mod s_op;
mod t2;

pub use heat::{
    heat_semigroup, heat_trace, t1_apply, t1_star_apply, volume_potential_v, volume_potential_whole,
};
pub use kernels::{
    heat_kernel, heat_kernel_1d_periodic, newton_kernel, newton_kernel_periodic, newton_kernel_periodic_grad,
    poisson_kernel_periodic,
};
pub use layer::{layer_increment, layer_normal_increment};
pub(crate) use poisson::poisson_array;
pub use poisson::poisson_apply;
pub use s_op::{dn_s_operator, s_operator};
pub use t2::{
    dn_t2_apply, dn_t2_apply_with, t2_apply, t2_apply_with, t2_star_apply, t2_star_apply_with, KernelQuadrature,
};
pub(crate) use t2::convolve_mode;
