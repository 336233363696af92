//! Verification: direct-quadrature oracles, operator-ratio studies,
//! residual suites and scaling checks.

mod compare;
mod oracle;
mod ratio;
mod residual;
mod sample;
mod scaling;

pub use compare::{compare_with_oracle, oracle_suite, OracleComparison};
pub use oracle::{
    oracle_heat_trace, oracle_s, oracle_t2, oracle_w, OracleKind, ORACLE_MAX_MODES, ORACLE_MAX_STEPS,
    ORACLE_MAX_VERTICAL,
};
pub use ratio::{operator_ratio_study, sample_ratio, RatioLevel, RatioStudy, RatioTarget};
pub use residual::{manufactured_stokes, stokes_residual_suite, Manufactured, ResidualReport};
pub use scaling::{scaling_invariance_check, ScalingReport, ScalingRow};
pub use sample::{random_boundary, random_scalar, random_solenoidal, random_solenoidal_open, random_tensor, random_vector, BandSpec};
