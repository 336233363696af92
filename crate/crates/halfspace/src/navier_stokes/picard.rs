use serde::Serialize;

use super::flux::nonlinear_flux;
use crate::besov::{aniso_norm, data_norm_M0};
use crate::core::{BesovIndex, BoundaryField, IterationTrace, VectorField};
use crate::error::{Error, Result};
use crate::stokes::StokesSolver;

/// Stopping parameters of the Picard iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PicardOptions {
    pub max_iter: usize,
    /// Relative tolerance on `‖u^{m+1} − u^m‖ / ‖u¹‖`.
    pub tol: f64,
    /// Consecutive ratios `≥ 1` that count as divergence.
    pub patience: usize,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            max_iter: 50,
            tol: 1e-8,
            patience: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PicardStatus {
    Converged,
    MaxIter,
    Diverged,
}

#[derive(Clone, Debug)]
pub struct PicardOutcome {
    /// Last iterate.
    pub u: VectorField,
    pub trace: IterationTrace,
    pub status: PicardStatus,
}

fn norm(u: &VectorField, index: &BesovIndex) -> Result<f64> {
    if u.max_abs() == 0.0 {
        Ok(0.0)
    } else {
        aniso_norm(u, index.alpha, index.q)
    }
}

/// Runs `u¹ = S(h, g, 0)`, `u^{m+1} = S(h, g, −u^m⊗u^m)` with the Stokes
/// solver `S`, recording norms in `Ḃ^{α,α/2}_q`. Divergence is reported in
/// the status rather than as an error.
pub fn picard_iterate(
    solver: &StokesSolver,
    h: &VectorField,
    g: &BoundaryField,
    index: &BesovIndex,
    opts: PicardOptions,
) -> Result<PicardOutcome> {
    if !index.is_critical() {
        return Err(Error::Index(format!(
            "Picard iteration needs a critical index, q = (n+2)/(alpha+1); got alpha = {}, q = {}",
            index.alpha, index.q
        )));
    }
    if opts.max_iter == 0 || !(opts.tol >= 0.0) || opts.patience == 0 {
        return Err(Error::Argument(format!("invalid Picard options {opts:?}")));
    }
    let (beta, p) = index.aux()?;
    let data = data_norm_M0(h, g, index)?.total;
    let mut trace = IterationTrace::new(data, beta, p);
    let mut u = solver.solve(h, g, None, index)?.u;
    let first = norm(&u, index)?;
    for _ in 0..opts.max_iter {
        let f = nonlinear_flux(&u);
        let next = solver.solve(h, g, Some(&f), index)?.u;
        let inc = norm(&next.sub(&u)?, index)?;
        u = next;
        trace.push(norm(&u, index)?, inc);
        if inc <= opts.tol * first {
            trace.converged = true;
            return Ok(PicardOutcome {
                u,
                trace,
                status: PicardStatus::Converged,
            });
        }
        if trace.trailing_non_contracting() >= opts.patience {
            return Ok(PicardOutcome {
                u,
                trace,
                status: PicardStatus::Diverged,
            });
        }
    }
    Ok(PicardOutcome {
        u,
        trace,
        status: PicardStatus::MaxIter,
    })
}

/// Picard iteration with default patience; divergence is an error.
pub fn picard_solve(
    h: &VectorField,
    g: &BoundaryField,
    index: &BesovIndex,
    max_iter: usize,
    tol: f64,
) -> Result<(VectorField, IterationTrace)> {
    let mut solver = StokesSolver::new(h.grid())?;
    solver.part_norms = false;
    let opts = PicardOptions {
        max_iter,
        tol,
        ..PicardOptions::default()
    };
    let out = picard_iterate(&solver, h, g, index, opts)?;
    match out.status {
        PicardStatus::Diverged => Err(Error::Diverged {
            step: out.trace.steps.len(),
            consecutive: out.trace.trailing_non_contracting(),
        }),
        _ => Ok((out.u, out.trace)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Domain, HalfSpaceGrid};

    #[test]
    fn zero_data_converges_immediately() {
        let g = HalfSpaceGrid::uniform(2, 8, 4.0, 9, 0.5, 4).unwrap();
        let h = VectorField::zeros(&g, Domain::HalfSpace);
        let b = BoundaryField::zeros(&g, 2);
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        let (u, trace) = picard_solve(&h, &b, &idx, 10, 1e-8).unwrap();
        assert_eq!(u.max_abs(), 0.0);
        assert!(trace.converged);
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn rejects_subcritical_index() {
        let g = HalfSpaceGrid::uniform(2, 8, 4.0, 9, 0.5, 4).unwrap();
        let h = VectorField::zeros(&g, Domain::HalfSpace);
        let b = BoundaryField::zeros(&g, 2);
        let idx = BesovIndex::new(2, 0.5, 3.0).unwrap();
        assert!(matches!(picard_solve(&h, &b, &idx, 10, 1e-8), Err(Error::Index(_))));
    }
}
