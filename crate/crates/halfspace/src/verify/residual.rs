//! Manufactured Stokes solutions and the residual suite.

use serde::Serialize;

use crate::core::{BoundaryField, Domain, HalfSpaceGrid, TensorField, VectorField};
use crate::error::{Error, Result};
use crate::navier_stokes::{weak_stokes_gaps, TestFunction, WeakGap};
use crate::stokes::StokesSolution;

/// An exact Stokes solution with the data that produce it.
#[derive(Clone, Debug)]
pub struct Manufactured {
    pub exact: VectorField,
    pub h: VectorField,
    pub g: BoundaryField,
    pub force: TensorField,
}

/// `u = a(t)U + b(t)∇H` on a two-dimensional grid, where
/// `U = (∂_nψ, −∂_1ψ)`, `ψ = cos x_1 · x_n e^{−x_n²}`, `H = cos(2x_1) e^{−2x_n}`,
/// `a = 1 + t` and `b = sin(πt/T)`. The potential flow is absorbed by the
/// pressure; the rest is driven by the antisymmetric force
/// `𝓕 = [[0, −χ], [χ, 0]]` with `χ = a'ψ − aΔψ`, whose divergence is
/// `(∂_t − Δ)(aU)`. The data are compatible: `h|_{wall} = g(·, 0)`.
pub fn manufactured_stokes(grid: &HalfSpaceGrid) -> Result<Manufactured> {
    if grid.n() != 2 {
        return Err(Error::Grid("the manufactured solution is two-dimensional".into()));
    }
    let tf = grid.t_final();
    let a = |t: f64| 1.0 + t;
    let b = |t: f64| (std::f64::consts::PI * t / tf).sin();
    let uu = |x: &[f64]| {
        let (c, s, z) = (x[0].cos(), x[0].sin(), x[1]);
        let e = (-z * z).exp();
        [c * (1.0 - 2.0 * z * z) * e, s * z * e]
    };
    let uh = |x: &[f64]| {
        let e = (-2.0 * x[1]).exp();
        [-2.0 * (2.0 * x[0]).sin() * e, -2.0 * (2.0 * x[0]).cos() * e]
    };
    let exact = VectorField::from_fn(grid, Domain::HalfSpace, |x, t| {
        let (p, q) = (uu(x), uh(x));
        [a(t) * p[0] + b(t) * q[0], a(t) * p[1] + b(t) * q[1], 0.0]
    });
    let h = VectorField::stationary(grid, Domain::HalfSpace, |x| {
        let p = uu(x);
        [a(0.0) * p[0], a(0.0) * p[1], 0.0]
    });
    let g = BoundaryField::from_fn(grid, 2, |x, t| {
        let (p, q) = (uu(&[x[0], 0.0]), uh(&[x[0], 0.0]));
        [a(t) * p[0] + b(t) * q[0], a(t) * p[1] + b(t) * q[1], 0.0]
    });
    let force = TensorField::from_fn(grid, Domain::HalfSpace, |x, t| {
        let z = x[1];
        let e = (-z * z).exp();
        let psi = z * e;
        // Δ(cos x_1 · ζ(x_n)) = cos x_1 (ζ'' − ζ) with ζ'' = (4z³ − 6z)e^{−z²}.
        let lap = x[0].cos() * (e * (4.0 * z * z * z - 6.0 * z) - psi);
        let chi = x[0].cos() * psi - a(t) * lap;
        [[0.0, -chi, 0.0], [chi, 0.0, 0.0], [0.0; 3]]
    });
    Ok(Manufactured { exact, h, g, force })
}

/// Weak-form gaps and strong diagnostics of one Stokes solution.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub gaps: Vec<WeakGap>,
    pub max_gap: f64,
    /// Largest `gap / tolerance` over the family.
    pub max_gap_ratio: f64,
    pub divergence: f64,
    pub boundary: f64,
    pub initial: f64,
    pub compat: f64,
}

pub fn stokes_residual_suite(
    sol: &StokesSolution,
    h: &VectorField,
    g: &BoundaryField,
    force: Option<&TensorField>,
    family: &[TestFunction],
) -> Result<ResidualReport> {
    let gaps = weak_stokes_gaps(&sol.u, h, g, force, family)?;
    let max_gap = gaps.iter().map(|x| x.gap).fold(0.0, f64::max);
    let max_gap_ratio = gaps
        .iter()
        .map(|x| if x.gap == 0.0 { 0.0 } else { x.gap / x.tolerance })
        .fold(0.0, f64::max);
    let d = &sol.diagnostics;
    Ok(ResidualReport {
        gaps,
        max_gap,
        max_gap_ratio,
        divergence: d.divergence,
        boundary: d.boundary,
        initial: d.initial,
        compat: d.compat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::BesovIndex;
    use crate::navier_stokes::standard_family;
    use crate::stokes::StokesSolver;

    #[test]
    fn manufactured_data_are_compatible() {
        let grid = HalfSpaceGrid::uniform(2, 16, 8.0, 33, 0.5, 8).unwrap();
        let m = manufactured_stokes(&grid).unwrap();
        for c in 0..2 {
            for i in 0..grid.tan_len() {
                assert!((m.h.comp(c)[[i, 0, 0]] - m.g.comp(c)[[i, 0]]).abs() < 1e-14);
                assert!((m.exact.comp(c)[[i, 0, 3]] - m.g.comp(c)[[i, 3]]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_data_zero_residuals() {
        let grid = HalfSpaceGrid::uniform(2, 16, 8.0, 17, 0.5, 8).unwrap();
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        let mut solver = StokesSolver::new(&grid).unwrap();
        solver.part_norms = false;
        let h = VectorField::zeros(&grid, Domain::HalfSpace);
        let g = BoundaryField::zeros(&grid, 2);
        let sol = solver.solve(&h, &g, None, &idx).unwrap();
        let r = stokes_residual_suite(&sol, &h, &g, None, &standard_family(&grid)).unwrap();
        assert_eq!(r.max_gap, 0.0);
        assert_eq!((r.divergence, r.boundary, r.initial, r.compat), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn manufactured_solution_satisfies_weak_form() {
        let grid = HalfSpaceGrid::uniform(2, 16, 8.0, 33, 0.5, 16).unwrap();
        let m = manufactured_stokes(&grid).unwrap();
        let fam = standard_family(&grid);
        let gaps = weak_stokes_gaps(&m.exact, &m.h, &m.g, Some(&m.force), &fam).unwrap();
        for gp in &gaps {
            assert!(gp.gap <= gp.tolerance.max(1e-6), "{gp:?}");
        }
    }
}
