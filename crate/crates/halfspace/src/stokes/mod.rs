//! Linear Stokes solution `u = w + ∇φ + v + V` from initial data, boundary
//! data and a force in divergence form.

mod parts;
mod solve;

pub use parts::{
    build_G, build_grad_phi, build_v, build_w, build_w_composed, layer_normal_derivative, normal_defect, LayerPotential,
};
pub use solve::{
    compat_defect, solve_stokes, tensor_norm, CompatDefect, PartNorms, StokesDiagnostics, StokesSolution, StokesSolver,
};
