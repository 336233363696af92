//! Anisotropic space-time norms and the composite data norm.

use ndarray::{s, Array3};
use num_complex::Complex64;
use serde::Serialize;

use super::gagliardo::{gagliardo_time_norm, SpatialNorm};
use super::partition::DyadicPartition;
use super::spatial::{check_exponents, lp_norm, lp_norm_at, powq, Layout, SpaceTimeField};
use crate::core::{BesovIndex, BoundaryField, VectorField};
use crate::error::{Error, Result};
use crate::transforms::fft::fft_axis;

/// The two mixed norms whose maximum is the anisotropic norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnisoParts {
    /// `‖f‖_{L^q(0,T; Ḃ^s_q)}`
    pub space: f64,
    /// `‖f‖_{L^q(Ω; Ḃ^{s/2}_q(0,T))}` by the Gagliardo seminorm.
    pub time: f64,
}

impl AnisoParts {
    pub fn norm(&self) -> f64 {
        self.space.max(self.time)
    }
}

pub fn aniso_parts<F: SpaceTimeField>(f: &F, s: f64, q: f64) -> Result<AnisoParts> {
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::Argument(format!("anisotropic order must lie in (0, 2), got {s}")));
    }
    Ok(AnisoParts {
        space: lp_norm(f, s, q, None)?,
        time: gagliardo_time_norm(f, 0.5 * s, q, SpatialNorm::Lq)?,
    })
}

/// `‖f‖_{Ḃ^{s,s/2}_q}` as the larger of the two mixed norms, `0 < s < 2`.
pub fn aniso_norm<F: SpaceTimeField>(f: &F, s: f64, q: f64) -> Result<f64> {
    Ok(aniso_parts(f, s, q)?.norm())
}

/// Parabolic Littlewood–Paley norm on space-time: blocks in
/// `ρ = (|ξ|⁴ + η²)^{1/4}` after extending `f` by zero beyond `[0, T]`.
/// Any real order; used where the intersection form is unavailable (`s ≤ 0`).
pub fn parabolic_lp_norm<F: SpaceTimeField>(f: &F, s: f64, q: f64) -> Result<f64> {
    check_exponents(s, q)?;
    let g = f.grid();
    let layout = Layout::new(g, f.geometry())?;
    let nt = g.nt();
    let np = 2 * nt;
    let dt = g.dt();
    let eta: Vec<f64> = (0..np).map(|k| crate::transforms::fft::freq(k, np, np as f64 * dt)).collect();
    let rho = |m: usize, v: usize, k: usize| -> f64 { (layout.mags[[m, v]].powi(4) + eta[k] * eta[k]).powf(0.25) };
    let hats: Vec<Array3<Complex64>> = f
        .arrays()
        .iter()
        .map(|a| {
            let c = layout.forward(g, a);
            let (m, nz, _) = c.dim();
            let mut p = Array3::<Complex64>::zeros((m, nz, np));
            p.slice_mut(s![.., .., ..nt]).assign(&c);
            fft_axis(&mut p, 2, false);
            p
        })
        .collect();
    let (mm, nz, _) = hats[0].dim();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for m in 0..mm {
        for v in 0..nz {
            for k in 0..np {
                let r = rho(m, v, k);
                if r > 0.0 {
                    lo = lo.min(r);
                    hi = hi.max(r);
                }
            }
        }
    }
    let part = DyadicPartition::covering(lo, hi)?;
    let mut total = 0.0;
    for j in part.blocks() {
        let wj = 2f64.powf(j as f64 * s * q);
        for h in &hats {
            let mut c = h.clone();
            let mut any = false;
            for ((m, v, k), x) in c.indexed_iter_mut() {
                let w = part.window(j, rho(m, v, k));
                any |= w > 0.0;
                *x *= w;
            }
            if !any {
                continue;
            }
            fft_axis(&mut c, 2, true);
            // Spatial inverse acts slice by slice in time.
            let phys = layout.inverse(g, c);
            for ((_, v, _), x) in phys.indexed_iter() {
                total += wj * layout.weights[v] * dt * powq(*x, q);
            }
        }
    }
    Ok(total.powf(1.0 / q))
}

/// Space-time norm of order `s`: the anisotropic intersection for
/// `0 < s < 2`, the parabolic Littlewood–Paley norm otherwise.
pub fn besov_st_norm<F: SpaceTimeField>(f: &F, s: f64, q: f64) -> Result<f64> {
    if s > 0.0 && s < 2.0 {
        aniso_norm(f, s, q)
    } else {
        parabolic_lp_norm(f, s, q)
    }
}

/// The four terms of the data norm and their sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DataNorm {
    /// `‖h‖_{Ḃ^{α−2/q}_q}`
    pub initial: f64,
    /// `‖g‖_{Ḃ^{α−1/q, α/2−1/2q}_q}`
    pub boundary: f64,
    /// `‖g_n‖_{Ḃ^{α/2}_q(0,T; Ḃ^{−1/q}_q)}`
    pub normal_time: f64,
    /// `‖g_n‖_{L^q(0,T; Ḃ^{α−1/q}_q)}`
    pub normal_space: f64,
    pub total: f64,
}

/// Normal component of boundary data as a one-component field.
pub(crate) fn normal_part(g: &BoundaryField) -> Result<BoundaryField> {
    let n = g.grid().n();
    BoundaryField::new(g.grid().clone(), vec![g.comp_or_zero(n - 1)])
}

/// Data norm of `(h, g)`; `h` is read at the first time node.
#[allow(non_snake_case)]
pub fn data_norm_M0(h: &VectorField, g: &BoundaryField, index: &BesovIndex) -> Result<DataNorm> {
    let (a, q) = (index.alpha, index.q);
    let initial = lp_norm_at(h, 0, index.initial_order(), q, None)?;
    let boundary = besov_st_norm(g, index.boundary_order(), q)?;
    let gn = normal_part(g)?;
    let normal_time = gagliardo_time_norm(&gn, 0.5 * a, q, SpatialNorm::Besov(-1.0 / q))?;
    let normal_space = lp_norm(&gn, index.boundary_order(), q, None)?;
    Ok(DataNorm {
        initial,
        boundary,
        normal_time,
        normal_space,
        total: initial + boundary + normal_time + normal_space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Domain, Grading, HalfSpaceGrid};
    use std::f64::consts::PI;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::new(2, 2.0 * PI, 16, PI, 17, Grading::Uniform, 1.0, 32).unwrap()
    }

    #[test]
    fn zero_data() {
        let g = grid();
        let h = VectorField::zeros(&g, Domain::HalfSpace);
        let b = BoundaryField::zeros(&g, 2);
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        assert_eq!(data_norm_M0(&h, &b, &idx).unwrap().total, 0.0);
    }

    #[test]
    fn initial_only_reduces_to_lp() {
        let g = grid();
        let h = VectorField::stationary(&g, Domain::HalfSpace, |x| [x[0].cos() * (2.0 * x[1]).cos(), 0.0, 0.0]);
        let b = BoundaryField::zeros(&g, 2);
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        let m = data_norm_M0(&h, &b, &idx).unwrap();
        let lp = lp_norm_at(&h, 0, idx.initial_order(), idx.q, None).unwrap();
        assert_eq!(m.total, lp);
        assert!(lp > 0.0);
    }

    #[test]
    fn separable_boundary_field_factors() {
        // f = a(x)b(t): the space part is ‖a‖_{Ḃ^s}‖b‖_{L^q}, the time part ‖a‖_{L^q}[b].
        let g = grid();
        let (s, q) = (0.8, 2.2);
        let bt = |t: f64| (2.0 * t).sin() + t;
        let f = BoundaryField::from_fn(&g, 1, |x, t| [(3.0 * x[0]).cos() * bt(t), 0.0, 0.0]);
        let p = aniso_parts(&f, s, q).unwrap();
        let a = BoundaryField::from_fn(&g, 1, |x, _| [(3.0 * x[0]).cos(), 0.0, 0.0]);
        let a_b = lp_norm_at(&a, 0, s, q, None).unwrap();
        let a_l = (a.comp(0).column(0).iter().map(|v| v.abs().powf(q)).sum::<f64>() * g.cell_area()).powf(1.0 / q);
        let wt = g.time_weights();
        let b_l = (0..g.nt()).map(|k| wt[k] * bt(g.time(k)).abs().powf(q)).sum::<f64>().powf(1.0 / q);
        let u: Vec<f64> = (0..g.nt()).map(|k| bt(g.time(k))).collect();
        let b_g = super::super::gagliardo::gagliardo_series(&u, g.dt(), 0.5 * s, q).unwrap();
        assert!((p.space - a_b * b_l).abs() < 1e-12 * p.space);
        assert!((p.time - a_l * b_g).abs() < 1e-10 * p.time, "{} {}", p.time, a_l * b_g);
    }

    #[test]
    fn parabolic_norm_is_homogeneous() {
        let g = grid();
        let f = BoundaryField::from_fn(&g, 1, |x, t| [x[0].sin() * (PI * t).sin(), 0.0, 0.0]);
        let a = parabolic_lp_norm(&f, -0.4, 2.0).unwrap();
        let b = parabolic_lp_norm(&f.scaled(2.5), -0.4, 2.0).unwrap();
        assert!(a > 0.0 && (b - 2.5 * a).abs() < 1e-12 * b);
    }
}
