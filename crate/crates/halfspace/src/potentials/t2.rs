//! Single-layer heat potential `T2`, its adjoint and normal derivative.

use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;
use rayon::prelude::*;

use super::layer::{layer_increment, layer_normal_increment};
use super::modes::RadialModes;
use crate::core::{BoundaryField, Domain, HalfSpaceGrid, VectorField};
use crate::error::{Error, Result};
use crate::quad::Rule;
use crate::transforms::fft::{tan_forward, tan_forward2, tan_inverse, tan_inverse2};

/// Step weights of the single-layer heat kernel for every distinct
/// tangential frequency, vertical node and time offset.
///
/// For offset `d ≥ 1`, `value[j][d−1] = ∫_{(d−1)Δt}^{dΔt} K(z_j, τ) dτ` and
/// `normal[j][d−1]` is its `z`-derivative. Data are taken constant on each
/// time step with the step mean of the nodal values.
#[derive(Clone, Debug)]
pub struct KernelQuadrature {
    dt: f64,
    nodes: Vec<f64>,
    vertical_weights: Vec<f64>,
    time_weights: Vec<f64>,
    pub(crate) modes: RadialModes,
    value: Vec<Array2<f64>>,
    normal: Vec<Array2<f64>>,
}

impl KernelQuadrature {
    pub fn new(grid: &HalfSpaceGrid) -> Self {
        let modes = RadialModes::new(grid);
        let dt = grid.dt();
        let nd = grid.n_time();
        let nodes = grid.vertical().to_vec();
        let tables: Vec<(Array2<f64>, Array2<f64>)> = modes
            .ks
            .par_iter()
            .map(|&k| {
                let mut f = Array2::zeros((nodes.len(), nd));
                let mut g = Array2::zeros((nodes.len(), nd));
                for (j, &z) in nodes.iter().enumerate() {
                    for d in 1..=nd {
                        let (t1, t2) = ((d - 1) as f64 * dt, d as f64 * dt);
                        f[[j, d - 1]] = layer_increment(z, k, t1, t2);
                        g[[j, d - 1]] = layer_normal_increment(z, k, t1, t2);
                    }
                }
                (f, g)
            })
            .collect();
        let (value, normal) = tables.into_iter().unzip();
        Self {
            dt,
            nodes,
            vertical_weights: grid.vertical_weights(),
            time_weights: grid.time_weights(),
            modes,
            value,
            normal,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Distinct tangential frequencies `|ξ'|`.
    pub fn frequencies(&self) -> &[f64] {
        &self.modes.ks
    }

    /// Vertical quadrature weights (trapezoid on the possibly graded nodes).
    pub fn vertical_weights(&self) -> &[f64] {
        &self.vertical_weights
    }

    /// Value weights for frequency index `r`, shape `(vertical, offset)`.
    pub fn value_table(&self, r: usize) -> &Array2<f64> {
        &self.value[r]
    }

    pub fn normal_table(&self, r: usize) -> &Array2<f64> {
        &self.normal[r]
    }

    /// `ζ(z_j) = ∫_0^{z_j} e^{-k(z_j−y)} ∂_y W_d(y) dy` per offset, the
    /// vertical kernel of `∇S` composed with `∂_n T2`. Shape `(vertical, offset)`.
    pub fn smoothed_normal_table(&self, r: usize) -> Array2<f64> {
        let k = self.modes.ks[r];
        let nd = self.value[r].ncols();
        let rule = Rule::new(10);
        let mut out = Array2::zeros((self.nodes.len(), nd));
        let width = (0.5 * self.dt.sqrt()).min(if k > 0.0 { 2.0 / k } else { f64::INFINITY });
        for d in 1..=nd {
            let (t1, t2) = ((d - 1) as f64 * self.dt, d as f64 * self.dt);
            let mut acc = 0.0;
            for j in 1..self.nodes.len() {
                let (a, b) = (self.nodes[j - 1], self.nodes[j]);
                let pieces = ((b - a) / width).ceil().max(1.0) as usize;
                let h = (b - a) / pieces as f64;
                let mut seg = 0.0;
                for p in 0..pieces {
                    let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
                    seg += rule.integrate(lo, hi, |y| (-k * (b - y)).exp() * layer_normal_increment(y, k, t1, t2));
                }
                acc = acc * (-k * (b - a)).exp() + seg;
                out[[j, d - 1]] = acc;
            }
        }
        out
    }
}

/// Step means `ḡ_i = (g_i + g_{i+1})/2`, `i = 0..nt−1`.
fn step_means(g: &[Complex64]) -> Vec<Complex64> {
    g.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect()
}

/// `out[j][m] = Σ_{d=1}^{m} table[j][d−1] ḡ[m−d]` for one tangential mode.
pub(crate) fn convolve_mode(table: &Array2<f64>, g: &[Complex64], out: &mut ndarray::ArrayViewMut2<Complex64>) {
    let gb = step_means(g);
    let nt = g.len();
    for j in 0..table.nrows() {
        let row = table.row(j);
        for m in 1..nt {
            let mut acc = Complex64::new(0.0, 0.0);
            for d in 1..=m {
                acc += gb[m - d] * row[d - 1];
            }
            out[[j, m]] = acc;
        }
    }
}

fn apply_table(
    q: &KernelQuadrature,
    grid: &HalfSpaceGrid,
    g: &BoundaryField,
    normal: bool,
) -> Result<VectorField> {
    check_grid(q, grid)?;
    let nz = grid.n_vert();
    let comps = g
        .padded()
        .comps()
        .iter()
        .map(|c| {
            let gh = tan_forward2(grid, c);
            let mut out = Array3::<Complex64>::zeros((grid.tan_len(), nz, grid.nt()));
            out.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(m, mut o)| {
                let r = q.modes.of_mode[m];
                let table = if normal { &q.normal[r] } else { &q.value[r] };
                let lane: Vec<Complex64> = gh.row(m).to_vec();
                convolve_mode(table, &lane, &mut o);
            });
            tan_inverse(grid, out)
        })
        .collect();
    VectorField::new(grid.clone(), Domain::HalfSpace, comps)
}

fn check_grid(q: &KernelQuadrature, grid: &HalfSpaceGrid) -> Result<()> {
    if q.nodes != grid.vertical() || (q.dt - grid.dt()).abs() > 1e-15 * q.dt || q.modes.of_mode.len() != grid.tan_len() {
        return Err(Error::Grid("kernel quadrature was built for a different grid".into()));
    }
    Ok(())
}

/// `T2 g(x, t) = ∫_0^t ∫ Γ(x'−y', x_n, t−s) g(y', s) dy' ds` per component.
pub fn t2_apply(g: &BoundaryField) -> Result<VectorField> {
    let q = KernelQuadrature::new(g.grid());
    t2_apply_with(&q, g)
}

pub fn t2_apply_with(q: &KernelQuadrature, g: &BoundaryField) -> Result<VectorField> {
    apply_table(q, g.grid(), g, false)
}

/// `∂_{x_n} T2 g` from the exact normal-derivative weights; the wall value
/// is the one-sided limit `−½ ḡ` of the last step.
pub fn dn_t2_apply(g: &BoundaryField) -> Result<VectorField> {
    let q = KernelQuadrature::new(g.grid());
    dn_t2_apply_with(&q, g)
}

pub fn dn_t2_apply_with(q: &KernelQuadrature, g: &BoundaryField) -> Result<VectorField> {
    apply_table(q, g.grid(), g, true)
}

/// Adjoint of [`t2_apply`]: the wall trace of `T1*` acting on the zero
/// extension of `φ`, computed with the same step weights so that
/// `⟨T2 g, φ⟩ = ⟨g, T2* φ⟩` holds in the discrete inner products.
pub fn t2_star_apply(phi: &VectorField) -> Result<BoundaryField> {
    let q = KernelQuadrature::new(phi.grid());
    t2_star_apply_with(&q, phi)
}

pub fn t2_star_apply_with(q: &KernelQuadrature, phi: &VectorField) -> Result<BoundaryField> {
    if phi.domain() != Domain::HalfSpace {
        return Err(Error::Domain("T2* acts on half-space fields".into()));
    }
    let grid = phi.grid();
    check_grid(q, grid)?;
    let nt = grid.nt();
    let wz = &q.vertical_weights;
    let wt = &q.time_weights;
    let comps = phi
        .comps()
        .iter()
        .map(|c| {
            let ph = tan_forward(grid, c);
            let mut out = Array2::<Complex64>::zeros((grid.tan_len(), nt));
            out.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(m, mut o)| {
                let table = &q.value[q.modes.of_mode[m]];
                // ψ_i = Σ_{m'>i} ω_{m'} Σ_j w_j W_{m'−i}(z_j) φ_{j,m'}
                let mut psi = vec![Complex64::new(0.0, 0.0); nt - 1];
                for (i, p) in psi.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for mp in i + 1..nt {
                        let d = mp - i;
                        let mut s = Complex64::new(0.0, 0.0);
                        for j in 0..table.nrows() {
                            s += ph[[m, j, mp]] * (wz[j] * table[[j, d - 1]]);
                        }
                        acc += s * wt[mp];
                    }
                    *p = acc;
                }
                for k in 0..nt {
                    let left = if k >= 1 { psi[k - 1] } else { Complex64::new(0.0, 0.0) };
                    let right = if k + 1 < nt { psi[k] } else { Complex64::new(0.0, 0.0) };
                    o[k] = (left + right) / (2.0 * wt[k]);
                }
            });
            tan_inverse2(grid, out)
        })
        .collect();
    BoundaryField::new(grid.clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{inner2, inner3};
    use std::f64::consts::PI;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::new(2, 2.0 * PI, 8, 3.0, 13, crate::core::Grading::Geometric { ratio: 1.15 }, 1.0, 8).unwrap()
    }

    #[test]
    fn unit_data_at_wall() {
        let g = grid();
        let b = BoundaryField::from_fn(&g, 1, |_, _| [1.0, 0.0, 0.0]);
        let u = t2_apply(&b).unwrap();
        for k in 0..g.nt() {
            let expect = (g.time(k) / PI).sqrt();
            assert!((u.comp(0)[[3, 0, k]] - expect).abs() < 1e-14);
        }
        assert!(u.comp(1).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn normal_derivative_wall_jump() {
        let g = grid();
        let b = BoundaryField::from_fn(&g, 1, |x, t| [x[0].cos() * t, 0.0, 0.0]);
        let d = dn_t2_apply(&b).unwrap();
        for k in 1..g.nt() {
            let gbar = 0.5 * (g.time(k - 1) + g.time(k));
            assert!((d.comp(0)[[0, 0, k]] + 0.5 * gbar).abs() < 1e-14);
        }
    }

    #[test]
    fn adjoint_identity() {
        let g = grid();
        let b = BoundaryField::from_fn(&g, 2, |x, t| [x[0].sin() * t + (2.0 * x[0]).cos(), t * t, 0.0]);
        let phi = VectorField::from_fn(&g, Domain::HalfSpace, |x, t| {
            [(x[0] + x[1]).cos() * (1.0 - t), x[1] * (-x[1]).exp() * x[0].sin(), 0.0]
        });
        let q = KernelQuadrature::new(&g);
        let lhs: f64 = {
            let u = t2_apply_with(&q, &b).unwrap();
            (0..2)
                .map(|c| inner3(&g, Domain::HalfSpace, &u.comp(c).view(), &phi.comp(c).view()))
                .sum()
        };
        let s = t2_star_apply_with(&q, &phi).unwrap();
        let rhs: f64 = (0..2).map(|c| inner2(&g, &b.comp(c).view(), &s.comp(c).view())).sum();
        assert!((lhs - rhs).abs() < 1e-13 * lhs.abs(), "{lhs} {rhs}");
    }

    #[test]
    fn causality() {
        let g = grid();
        let b = BoundaryField::from_fn(&g, 1, |x, t| [if t > 0.6 { x[0].cos() } else { 0.0 }, 0.0, 0.0]);
        let u = t2_apply(&b).unwrap();
        for k in 0..g.nt() {
            if g.time(k) < 0.6 - 0.125 {
                assert!(u.comp(0).index_axis(Axis(2), k).iter().all(|v| v.abs() < 1e-15));
            }
        }
    }
}
