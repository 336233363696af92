use serde::Serialize;

use super::parts::{build_G, build_grad_phi, build_v, LayerPotential};
use crate::besov::{aniso_norm, besov_st_norm, data_norm_M0, DataNorm};
use crate::core::{BesovIndex, BoundaryField, Domain, HalfSpaceGrid, TensorField, VectorField};
use crate::error::{Error, Result};
use crate::potentials::{heat_trace, volume_potential_v};
use crate::transforms::{divergence_half, extend_solenoidal, gradient_scale_half, trace_boundary};

/// Anisotropic norms of the solution, its parts and the data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartNorms {
    pub u: f64,
    pub v: f64,
    pub vol: f64,
    pub grad_phi: f64,
    pub w: f64,
    /// `‖G‖_{Ḃ^{α−1/q, α/2−1/2q}_q}`
    pub g_corr: f64,
    pub data: DataNorm,
    /// `‖𝓕‖_{Ḃ^{β,β/2}_p}` with the auxiliary pair, when a force is present.
    pub force: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StokesDiagnostics {
    /// `‖div u‖_{L²} / Σ‖∂_j u_i‖_{L²}`.
    pub divergence: f64,
    /// `‖u|_{wall} − g‖_{L^q}` over the boundary and time.
    pub boundary: f64,
    /// `‖u(·,0) − h‖_{L^q}` over the half space.
    pub initial: f64,
    /// Anisotropic norm of the compatibility defect.
    pub compat: f64,
    /// `max |d(·,0)|` of the compatibility defect.
    pub compat_initial: f64,
    /// Jump of the reflected initial data across the wall.
    pub extension_jump: f64,
    pub warnings: Vec<String>,
    pub norms: Option<PartNorms>,
}

#[derive(Clone, Debug)]
pub struct StokesSolution {
    pub u: VectorField,
    pub v: VectorField,
    pub vol: VectorField,
    pub grad_phi: VectorField,
    pub w: VectorField,
    pub g_corr: BoundaryField,
    pub diagnostics: StokesDiagnostics,
}

/// Compatibility defect `d = g − (Γ_t * h̃)|_{wall}`.
#[derive(Clone, Debug)]
pub struct CompatDefect {
    pub defect: BoundaryField,
    /// `‖d‖_{Ḃ^{α−1/q, α/2−1/2q}_q}`
    pub norm: f64,
    /// `max |d(·,0)|`
    pub initial: f64,
}

fn same_grid(a: &HalfSpaceGrid, b: &HalfSpaceGrid, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Grid(format!("{what} lives on a different grid")));
    }
    Ok(())
}

fn defect_norm(d: &BoundaryField, index: &BesovIndex) -> Result<f64> {
    if d.max_abs() == 0.0 {
        return Ok(0.0);
    }
    besov_st_norm(d, index.boundary_order(), index.q)
}

pub fn compat_defect(h: &VectorField, g: &BoundaryField, index: &BesovIndex) -> Result<CompatDefect> {
    same_grid(h.grid(), g.grid(), "boundary data")?;
    let ext = extend_solenoidal(h)?;
    let defect = g.padded().sub(&heat_trace(&ext.field)?)?;
    Ok(CompatDefect {
        norm: defect_norm(&defect, index)?,
        initial: defect.initial_max_abs(),
        defect,
    })
}

/// Linear Stokes solver bound to one grid; the layer-potential tables are
/// built once and reused across solves.
pub struct StokesSolver {
    grid: HalfSpaceGrid,
    layer: LayerPotential,
    /// Compute anisotropic part norms after each solve.
    pub part_norms: bool,
}

impl StokesSolver {
    pub fn new(grid: &HalfSpaceGrid) -> Result<Self> {
        grid.require_uniform("the Stokes solver")?;
        Ok(Self {
            grid: grid.clone(),
            layer: LayerPotential::new(grid),
            part_norms: true,
        })
    }

    pub fn grid(&self) -> &HalfSpaceGrid {
        &self.grid
    }

    /// `u = w + ∇φ + v + V` for initial data `h` (read at the first time
    /// node), boundary data `g` and force `𝓕` (`u_t − Δu + ∇p = div 𝓕`).
    pub fn solve(
        &self,
        h: &VectorField,
        g: &BoundaryField,
        force: Option<&TensorField>,
        index: &BesovIndex,
    ) -> Result<StokesSolution> {
        let grid = &self.grid;
        same_grid(h.grid(), grid, "initial data")?;
        same_grid(g.grid(), grid, "boundary data")?;
        if h.domain() != Domain::HalfSpace {
            return Err(Error::Domain("initial data must live on the half space".into()));
        }
        let q = index.q;
        let (v, ext) = build_v(h).map_err(Error::in_part("v"))?;
        let vol = match force {
            Some(f) if !f.is_zero() => {
                same_grid(f.grid(), grid, "force")?;
                volume_potential_v(f).map_err(Error::in_part("V"))?
            }
            _ => VectorField::zeros(grid, Domain::HalfSpace),
        };
        let grad_phi = build_grad_phi(g, &v, &vol).map_err(Error::in_part("grad_phi"))?;
        let g_corr = build_G(g, &v, &vol).map_err(Error::in_part("G"))?;
        let w = self.layer.apply(&g_corr).map_err(Error::in_part("w"))?;
        let u = w.add(&grad_phi)?.add(&v)?.add(&vol)?;

        let scale = gradient_scale_half(&u);
        let divergence = if scale == 0.0 {
            0.0
        } else {
            divergence_half(&u)?.lq_norm(2.0) / scale
        };
        let boundary = trace_boundary(&u)?.sub(&g.padded())?.lq_norm(q);
        let initial = {
            let diff: Vec<f64> = u
                .time_slice(0)
                .iter()
                .zip(h.time_slice(0))
                .flat_map(|(a, b)| (a - &b).into_iter().collect::<Vec<_>>())
                .collect();
            initial_lq(grid, &diff, q)
        };
        let defect = g.padded().sub(&trace_boundary(&v)?)?;
        let compat = defect_norm(&defect, index)?;
        let mut warnings = Vec::new();
        warnings.extend(ext.warning.clone());
        let norms = if self.part_norms {
            Some(self.norms(h, g, force, index, &u, &v, &vol, &grad_phi, &w, &g_corr)?)
        } else {
            None
        };
        Ok(StokesSolution {
            diagnostics: StokesDiagnostics {
                divergence,
                boundary,
                initial,
                compat,
                compat_initial: defect.initial_max_abs(),
                extension_jump: ext.jump,
                warnings,
                norms,
            },
            u,
            v,
            vol,
            grad_phi,
            w,
            g_corr,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn norms(
        &self,
        h: &VectorField,
        g: &BoundaryField,
        force: Option<&TensorField>,
        index: &BesovIndex,
        u: &VectorField,
        v: &VectorField,
        vol: &VectorField,
        grad_phi: &VectorField,
        w: &VectorField,
        g_corr: &BoundaryField,
    ) -> Result<PartNorms> {
        let (a, q) = (index.alpha, index.q);
        let nrm = |f: &VectorField| -> Result<f64> {
            if f.max_abs() == 0.0 {
                Ok(0.0)
            } else {
                aniso_norm(f, a, q)
            }
        };
        let force = match force {
            Some(f) if !f.is_zero() => {
                let (beta, p) = index.aux()?;
                Some(tensor_norm(f, beta, p)?)
            }
            _ => None,
        };
        Ok(PartNorms {
            u: nrm(u)?,
            v: nrm(v)?,
            vol: nrm(vol)?,
            grad_phi: nrm(grad_phi)?,
            w: nrm(w)?,
            g_corr: defect_norm(g_corr, index)?,
            data: data_norm_M0(h, g, index)?,
            force,
        })
    }
}

/// `‖𝓕‖_{Ḃ^{s,s/2}_p}` summed over rows.
pub fn tensor_norm(f: &TensorField, s: f64, p: f64) -> Result<f64> {
    let g = f.grid();
    let n = g.n();
    let mut acc = 0.0;
    for k in 0..n {
        let row = VectorField::new(g.clone(), f.domain(), (0..n).map(|i| f.comp(k, i).clone()).collect())?;
        if row.max_abs() > 0.0 {
            acc += besov_st_norm(&row, s, p)?.powf(p);
        }
    }
    Ok(acc.powf(1.0 / p))
}

fn initial_lq(grid: &HalfSpaceGrid, diff: &[f64], q: f64) -> f64 {
    // `diff` holds the n components of a (tangential, vertical) slice back to back.
    let wz = grid.vertical_weights();
    let nz = wz.len();
    let area = grid.cell_area();
    diff.iter()
        .enumerate()
        .map(|(i, d)| area * wz[i % nz] * d.abs().powf(q))
        .sum::<f64>()
        .powf(1.0 / q)
}

/// Solves once on the data's grid with part norms.
pub fn solve_stokes(
    h: &VectorField,
    g: &BoundaryField,
    force: Option<&TensorField>,
    index: &BesovIndex,
) -> Result<StokesSolution> {
    StokesSolver::new(h.grid())?.solve(h, g, force, index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Grading;
    use std::f64::consts::PI;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::new(2, 2.0 * PI, 16, 4.0, 33, Grading::Uniform, 0.5, 16).unwrap()
    }

    #[test]
    fn zero_data_zero_solution() {
        let g = grid();
        let idx = BesovIndex::critical(2, 1.0).unwrap();
        let s = solve_stokes(
            &VectorField::zeros(&g, Domain::HalfSpace),
            &BoundaryField::zeros(&g, 2),
            None,
            &idx,
        )
        .unwrap();
        assert_eq!(s.u.max_abs(), 0.0);
        let d = &s.diagnostics;
        assert_eq!((d.divergence, d.boundary, d.initial, d.compat), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn tangential_data_gives_layer_potential_only() {
        let g = grid();
        let idx = BesovIndex::critical(2, 1.0).unwrap();
        let b = BoundaryField::from_fn(&g, 2, |x, t| [x[0].cos() * t, 0.0, 0.0]);
        let s = solve_stokes(&VectorField::zeros(&g, Domain::HalfSpace), &b, None, &idx).unwrap();
        assert_eq!(s.v.max_abs() + s.vol.max_abs() + s.grad_phi.max_abs(), 0.0);
        let w = super::super::build_w(&b).unwrap();
        assert!(s.u.sub(&w).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn compat_defect_of_heat_trace_vanishes() {
        let g = grid();
        let idx = BesovIndex::critical(2, 1.0).unwrap();
        let h = VectorField::stationary(&g, Domain::HalfSpace, |x| {
            let e = (-x[1] * x[1]).exp();
            [x[0].cos() * (1.0 - 2.0 * x[1] * x[1]) * e, x[0].sin() * x[1] * e, 0.0]
        });
        let ext = extend_solenoidal(&h).unwrap();
        let gtr = heat_trace(&ext.field).unwrap();
        let c = compat_defect(&h, &gtr, &idx).unwrap();
        assert_eq!(c.defect.max_abs(), 0.0);
        assert_eq!(c.norm, 0.0);
        let mis = BoundaryField::from_fn(&g, 2, |x, _| [0.25 * (2.0 * x[0]).sin(), 0.0, 0.0]);
        let c = compat_defect(&h, &gtr.add(&mis).unwrap(), &idx).unwrap();
        assert!((c.initial - 0.25).abs() < 1e-12);
    }

    #[test]
    fn part_failures_carry_names() {
        let g = grid();
        let idx = BesovIndex::critical(2, 1.0).unwrap();
        let h = VectorField::stationary(&g, Domain::HalfSpace, |x| [x[0].cos(), 0.0, 0.0]);
        let e = solve_stokes(&h, &BoundaryField::zeros(&g, 2), None, &idx).unwrap_err();
        assert!(matches!(e, Error::Part { part: "v", .. }), "{e}");
    }
}
