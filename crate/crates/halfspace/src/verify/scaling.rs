//! Invariance of the data norm and the linear solution norm under the
//! parabolic rescaling `u_λ(x,t) = λu(λx, λ²t)`.

use serde::Serialize;

use crate::besov::{aniso_norm, data_norm_M0};
use crate::core::{parabolic_scale, BesovIndex, BoundaryField, VectorField};
use crate::error::{Error, Result};
use crate::stokes::StokesSolver;

#[derive(Clone, Debug, Serialize)]
pub struct ScalingRow {
    pub lambda: f64,
    pub data_norm: f64,
    pub solution_norm: f64,
    /// `|M_0(λ) − M_0| / M_0`.
    pub data_deviation: f64,
    /// `|‖u_λ‖ − ‖u‖| / ‖u‖`.
    pub solution_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub alpha: f64,
    pub q: f64,
    pub data_norm: f64,
    pub solution_norm: f64,
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    pub fn max_data_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.data_deviation).fold(0.0, f64::max)
    }

    pub fn max_solution_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.solution_deviation).fold(0.0, f64::max)
    }
}

fn norms(h: &VectorField, g: &BoundaryField, index: &BesovIndex) -> Result<(f64, f64)> {
    let m0 = data_norm_M0(h, g, index)?.total;
    let mut solver = StokesSolver::new(h.grid())?;
    solver.part_norms = false;
    let u = solver.solve(h, g, None, index)?.u;
    Ok((m0, aniso_norm(&u, index.alpha, index.q)?))
}

fn deviation(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b
    }
}

/// Data norm and linear-solution norm of `(h, g)` and of each rescaled pair.
pub fn scaling_invariance_check(h: &VectorField, g: &BoundaryField, index: &BesovIndex, lambdas: &[f64]) -> Result<ScalingReport> {
    if !index.is_critical() {
        return Err(Error::Index(format!(
            "scaling invariance needs the critical exponent, got alpha = {}, q = {}",
            index.alpha, index.q
        )));
    }
    let (m0, un) = norms(h, g, index)?;
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Argument(format!("scaling factor must be positive, got {lambda}")));
        }
        let (hl, gl) = parabolic_scale(h, g, lambda)?;
        let (ml, ul) = norms(&hl, &gl, index)?;
        rows.push(ScalingRow {
            lambda,
            data_norm: ml,
            solution_norm: ul,
            data_deviation: deviation(ml, m0),
            solution_deviation: deviation(ul, un),
        });
    }
    Ok(ScalingReport {
        alpha: index.alpha,
        q: index.q,
        data_norm: m0,
        solution_norm: un,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::HalfSpaceGrid;
    use crate::verify::{random_boundary, random_solenoidal, BandSpec};

    fn data(grid: &HalfSpaceGrid) -> (VectorField, BoundaryField) {
        let h = random_solenoidal(grid, &BandSpec::default(), 2);
        let g = random_boundary(grid, 2, &BandSpec::default(), 3);
        (h, g)
    }

    #[test]
    fn unit_lambda_is_exact() {
        let grid = HalfSpaceGrid::uniform(2, 16, 8.0, 33, 0.5, 8).unwrap();
        let (h, g) = data(&grid);
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        let r = scaling_invariance_check(&h, &g, &idx, &[1.0]).unwrap();
        assert_eq!(r.rows[0].data_deviation, 0.0);
        assert_eq!(r.rows[0].solution_deviation, 0.0);
    }

    #[test]
    fn critical_norms_are_invariant_and_others_are_not() {
        let grid = HalfSpaceGrid::uniform(2, 16, 8.0, 33, 0.5, 8).unwrap();
        let (h, g) = data(&grid);
        let idx = BesovIndex::critical(2, 1.0).unwrap();
        let r = scaling_invariance_check(&h, &g, &idx, &[0.5, 2.0]).unwrap();
        assert!(r.max_data_deviation() < 0.03, "{r:?}");
        assert!(r.max_solution_deviation() < 0.05, "{r:?}");
        // Off the critical line the data norm picks up a power of λ.
        let off = BesovIndex::new(2, 1.0, 3.0).unwrap();
        let (hl, gl) = parabolic_scale(&h, &g, 2.0).unwrap();
        let a = data_norm_M0(&h, &g, &off).unwrap().total;
        let b = data_norm_M0(&hl, &gl, &off).unwrap().total;
        assert!(deviation(b, a) > 0.05);
    }

    #[test]
    fn rejects_subcritical_index() {
        let grid = HalfSpaceGrid::uniform(2, 16, 8.0, 17, 0.5, 4).unwrap();
        let (h, g) = data(&grid);
        let idx = BesovIndex::new(2, 1.0, 3.0).unwrap();
        assert!(matches!(scaling_invariance_check(&h, &g, &idx, &[2.0]), Err(Error::Index(_))));
    }
}
