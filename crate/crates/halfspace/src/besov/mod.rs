//! Discrete homogeneous Besov norms: dyadic Littlewood–Paley sums in space,
//! Gagliardo seminorms in time, their anisotropic intersection, a parabolic
//! Littlewood–Paley norm for non-positive orders and the composite data norm.

mod aniso;
mod gagliardo;
mod partition;
mod spatial;

pub use aniso::{aniso_norm, aniso_parts, besov_st_norm, data_norm_M0, parabolic_lp_norm, AnisoParts, DataNorm};
pub use gagliardo::{gagliardo_series, gagliardo_time_norm, SpatialNorm};
pub use partition::{chi, DyadicPartition};
pub use spatial::{lp_norm, lp_norm_at, lp_norm_profile, negative_order_norm, Geometry, SpaceTimeField};
