//! Direct-quadrature oracles for the potential operators on coarse
//! two-dimensional grids.
//!
//! Data are trigonometric polynomials in `x'` (their nodal interpolants) and
//! step means in time, as in the fast paths. Each tangential convolution is
//! evaluated by integrating the physical periodic kernel against every data
//! mode on graded Gauss panels; vertical and time integrals are brute-force
//! Gauss quadrature of the raw kernels. No closed-form symbol, error-function
//! increment or exponential recursion is used.

use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;
use serde::Serialize;

use crate::core::{BoundaryField, Domain, HalfSpaceGrid, ScalarField, VectorField};
use crate::error::{Error, Result};
use crate::potentials::{heat_kernel_1d_periodic, newton_kernel_periodic, newton_kernel_periodic_grad};
use crate::quad::{graded_breaks, uniform_breaks, Rule};

pub const ORACLE_MAX_MODES: usize = 16;
pub const ORACLE_MAX_STEPS: usize = 16;
pub const ORACLE_MAX_VERTICAL: usize = 33;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    T2,
    HeatTrace,
    Kij,
    S,
}

impl OracleKind {
    pub const ALL: [OracleKind; 4] = [OracleKind::T2, OracleKind::HeatTrace, OracleKind::Kij, OracleKind::S];
}

fn check_grid(grid: &HalfSpaceGrid) -> Result<()> {
    if grid.n() != 2 {
        return Err(Error::OracleSize(format!("oracles are two-dimensional, got n = {}", grid.n())));
    }
    if grid.n_tan() > ORACLE_MAX_MODES || grid.n_time() > ORACLE_MAX_STEPS || grid.n_vert() > ORACLE_MAX_VERTICAL {
        return Err(Error::OracleSize(format!(
            "{} modes, {} vertical nodes, {} steps exceed {ORACLE_MAX_MODES}/{ORACLE_MAX_VERTICAL}/{ORACLE_MAX_STEPS}",
            grid.n_tan(),
            grid.n_vert(),
            grid.n_time()
        )));
    }
    Ok(())
}

/// Signed wavenumbers of a periodic axis, with the index of `|k|` among
/// `0..=N/2` and whether the mode is the Nyquist mode.
struct Axis1 {
    coords: Vec<f64>,
    k: Vec<f64>,
    abs_idx: Vec<usize>,
    nyquist: Vec<bool>,
    abs_k: Vec<f64>,
}

impl Axis1 {
    fn new(coords: Vec<f64>, period: f64) -> Self {
        let n = coords.len();
        let step = 2.0 * std::f64::consts::PI / period;
        let signed: Vec<i64> = (0..n as i64).map(|m| if m <= n as i64 / 2 { m } else { m - n as i64 }).collect();
        Self {
            k: signed.iter().map(|&m| step * m as f64).collect(),
            abs_idx: signed.iter().map(|m| m.unsigned_abs() as usize).collect(),
            nyquist: signed.iter().map(|&m| n % 2 == 0 && m == n as i64 / 2).collect(),
            abs_k: (0..=n / 2).map(|m| step * m as f64).collect(),
            coords,
        }
    }

    fn len(&self) -> usize {
        self.coords.len()
    }

    /// `c_m = N^{-1} Σ_j v_j e^{-i k_m x_j}`.
    fn dft(&self, v: impl Fn(usize) -> f64) -> Vec<Complex64> {
        let n = self.len();
        let vals: Vec<f64> = (0..n).map(v).collect();
        self.k
            .iter()
            .map(|&k| {
                vals.iter()
                    .zip(&self.coords)
                    .map(|(&f, &x)| Complex64::from_polar(f, -k * x))
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    fn synth(&self, c: &[Complex64]) -> Vec<f64> {
        self.coords
            .iter()
            .map(|&x| c.iter().zip(&self.k).map(|(a, &k)| (a * Complex64::from_polar(1.0, k * x)).re).sum())
            .collect()
    }
}

/// Cosine and sine transforms of a kernel over one period, on panels graded
/// toward the origin where the kernels concentrate or are singular.
struct KernelTransform {
    nodes: Vec<(f64, f64)>,
    cos: Vec<Vec<f64>>,
    sin: Vec<Vec<f64>>,
}

impl KernelTransform {
    fn new(half_period: f64, abs_k: &[f64]) -> Self {
        let rule = Rule::new(12);
        let b0 = (0.25f64).min(half_period / 4.0);
        let mut breaks = graded_breaks(0.0, b0, 48, 0.5);
        let panels = ((half_period - b0) / 0.25).ceil().max(1.0) as usize;
        breaks.extend(uniform_breaks(b0, half_period, panels).into_iter().skip(1));
        let nodes = rule.composite_nodes(&breaks);
        let table = |f: fn(f64) -> f64| abs_k.iter().map(|&k| nodes.iter().map(|&(s, _)| f(k * s)).collect()).collect();
        Self {
            cos: table(f64::cos),
            sin: table(f64::sin),
            nodes,
        }
    }

    /// `∫ K(s) cos(ks) ds` for even `K`, per `|k|`.
    fn even(&self, kernel: impl Fn(f64) -> f64) -> Vec<f64> {
        let vals: Vec<f64> = self.nodes.iter().map(|&(s, w)| 2.0 * w * kernel(s)).collect();
        self.cos.iter().map(|c| c.iter().zip(&vals).map(|(a, b)| a * b).sum()).collect()
    }

    /// `∫ K(s) sin(ks) ds` for odd `K`, per `|k|`.
    fn odd(&self, kernel: impl Fn(f64) -> f64) -> Vec<f64> {
        let vals: Vec<f64> = self.nodes.iter().map(|&(s, w)| 2.0 * w * kernel(s)).collect();
        self.sin.iter().map(|c| c.iter().zip(&vals).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Nodes `(τ, weight)` for `∫ f(τ) dτ` over step `d` after `τ = σ²`.
fn time_nodes(d: usize, dt: f64) -> Vec<(f64, f64)> {
    let rule = Rule::new(10);
    let (s1, s2) = (((d - 1) as f64 * dt).sqrt(), (d as f64 * dt).sqrt());
    let breaks = if d == 1 {
        graded_breaks(0.0, s2, 30, 0.5)
    } else {
        uniform_breaks(s1, s2, 2)
    };
    rule.composite_nodes(&breaks)
        .into_iter()
        .map(|(s, w)| (s * s, 2.0 * s * w))
        .collect()
}

/// 1-D heat kernel `(4πτ)^{-1/2} e^{-z²/4τ}`.
fn gauss(z: f64, tau: f64) -> f64 {
    (-z * z / (4.0 * tau)).exp() / (4.0 * std::f64::consts::PI * tau).sqrt()
}

/// `out(m, j, n) = Σ_{d=1}^{n} q[d−1](m, j) ḡ_{n−d}(m)` with step means ḡ of
/// the mode coefficients `c(m, n)`, then synthesized along `x'`.
fn time_convolve(axis: &Axis1, q: &[Array2<Complex64>], c: &Array2<Complex64>, nz: usize) -> Array3<f64> {
    let (nm, nt) = c.dim();
    let mut out = Array3::zeros((nm, nz, nt));
    for j in 0..nz {
        for n in 1..nt {
            let coef: Vec<Complex64> = (0..nm)
                .map(|m| {
                    (1..=n)
                        .map(|d| q[d - 1][[m, j]] * (c[[m, n - d]] + c[[m, n - d + 1]]) * 0.5)
                        .sum()
                })
                .collect();
            for (m, v) in axis.synth(&coef).into_iter().enumerate() {
                out[[m, j, n]] = v;
            }
        }
    }
    out
}

fn boundary_modes(axis: &Axis1, a: &Array2<f64>) -> Array2<Complex64> {
    let nt = a.ncols();
    let mut c = Array2::zeros((axis.len(), nt));
    for n in 0..nt {
        for (m, v) in axis.dft(|i| a[[i, n]]).into_iter().enumerate() {
            c[[m, n]] = v;
        }
    }
    c
}

fn tan_axis(grid: &HalfSpaceGrid) -> Axis1 {
    Axis1::new((0..grid.n_tan()).map(|i| grid.tan_point(i)[0]).collect(), grid.period())
}

/// Tangential transforms of the periodic heat kernel at the quadrature
/// nodes of every step: `(τ, weight, transform per |k|)`.
fn heat_transforms(grid: &HalfSpaceGrid, tr: &KernelTransform) -> Vec<Vec<(f64, f64, Vec<f64>)>> {
    let l = grid.period();
    (1..=grid.n_time())
        .map(|d| {
            time_nodes(d, grid.dt())
                .into_iter()
                .map(|(tau, w)| (tau, w, tr.even(|s| heat_kernel_1d_periodic(s, tau, l))))
                .collect()
        })
        .collect()
}

/// `T2 g` by direct quadrature.
pub fn oracle_t2(g: &BoundaryField) -> Result<VectorField> {
    let grid = g.grid();
    check_grid(grid)?;
    let axis = tan_axis(grid);
    let tr = KernelTransform::new(0.5 * grid.period(), &axis.abs_k);
    let heat = heat_transforms(grid, &tr);
    let z = grid.vertical();
    let q: Vec<Array2<Complex64>> = heat
        .iter()
        .map(|nodes| {
            Array2::from_shape_fn((axis.len(), z.len()), |(m, j)| {
                let a = axis.abs_idx[m];
                Complex64::from(nodes.iter().map(|(tau, w, h)| w * gauss(z[j], *tau) * h[a]).sum::<f64>())
            })
        })
        .collect();
    let comps = g
        .padded()
        .comps()
        .iter()
        .map(|c| time_convolve(&axis, &q, &boundary_modes(&axis, c), z.len()))
        .collect();
    VectorField::new(grid.clone(), Domain::HalfSpace, comps)
}

/// Wall trace of `Γ_t * h̃` by direct quadrature, for a whole-space `h̃`
/// read at the first time node.
pub fn oracle_heat_trace(h: &VectorField) -> Result<BoundaryField> {
    let grid = h.grid();
    check_grid(grid)?;
    if h.domain() != Domain::WholeSpace {
        return Err(Error::Domain("the heat trace oracle takes a whole-space field".into()));
    }
    let axis = tan_axis(grid);
    let zs = grid.whole_vertical();
    let nzp = zs.len() - 1;
    let vaxis = Axis1::new(zs[..nzp].to_vec(), 2.0 * grid.height());
    let wall = grid.n_vert() - 1;
    let tr_t = KernelTransform::new(0.5 * grid.period(), &axis.abs_k);
    let tr_v = KernelTransform::new(grid.height(), &vaxis.abs_k);
    let times = grid.times();
    let ht: Vec<(Vec<f64>, Vec<f64>)> = times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                (vec![1.0; axis.abs_k.len()], vec![1.0; vaxis.abs_k.len()])
            } else {
                (
                    tr_t.even(|s| heat_kernel_1d_periodic(s, t, grid.period())),
                    tr_v.even(|s| heat_kernel_1d_periodic(s, t, 2.0 * grid.height())),
                )
            }
        })
        .collect();
    let comps = h
        .comps()
        .iter()
        .map(|c| {
            // Vertical coefficients per tangential node, then tangential per vertical mode.
            let mut cv = Array2::<Complex64>::zeros((axis.len(), nzp));
            for i in 0..axis.len() {
                for (p, v) in vaxis.dft(|j| c[[i, j, 0]]).into_iter().enumerate() {
                    cv[[i, p]] = v;
                }
            }
            let mut cc = Array2::<Complex64>::zeros((axis.len(), nzp));
            for p in 0..nzp {
                let re = axis.dft(|i| cv[[i, p]].re);
                let im = axis.dft(|i| cv[[i, p]].im);
                for m in 0..axis.len() {
                    cc[[m, p]] = re[m] + Complex64::i() * im[m];
                }
            }
            let mut out = Array2::zeros((axis.len(), times.len()));
            for (n, (hx, hz)) in ht.iter().enumerate() {
                if n == 0 {
                    out.column_mut(0).assign(&c.index_axis(Axis(2), 0).column(wall));
                    continue;
                }
                // The wall is z = 0, where every vertical mode equals its coefficient.
                let coef: Vec<Complex64> = (0..axis.len())
                    .map(|m| {
                        (0..nzp)
                            .map(|p| cc[[m, p]] * hz[vaxis.abs_idx[p]])
                            .sum::<Complex64>()
                            * hx[axis.abs_idx[m]]
                    })
                    .collect();
                for (m, v) in axis.synth(&coef).into_iter().enumerate() {
                    out[[m, n]] = v;
                }
            }
            out
        })
        .collect();
    BoundaryField::new(grid.clone(), comps)
}

/// `𝓢f(x) = ∫_0^{x_n} ∫ N(x'−y', x_n−y_n) f(y) dy' dy_n` by direct quadrature,
/// with `f` linear between vertical nodes.
pub fn oracle_s(f: &ScalarField) -> Result<ScalarField> {
    let grid = f.grid();
    check_grid(grid)?;
    if f.domain() != Domain::HalfSpace {
        return Err(Error::Domain("the S oracle takes a half-space field".into()));
    }
    let axis = tan_axis(grid);
    let tr = KernelTransform::new(0.5 * grid.period(), &axis.abs_k);
    let z = grid.vertical();
    let l = grid.period();
    let rule = Rule::new(16);
    // weights[j] lists (lower node, upper node, weight on lower, weight on upper, Ñ per |k|).
    let mut weights: Vec<Vec<(usize, f64, f64, Vec<f64>)>> = vec![Vec::new(); z.len()];
    for (j, wj) in weights.iter_mut().enumerate() {
        for c in 1..=j {
            let (a, b) = (z[c - 1], z[c]);
            for (y, w) in rule.on(a, b) {
                let t = (y - a) / (b - a);
                let nk = tr.even(|s| newton_kernel_periodic(s, z[j] - y, l));
                wj.push((c, w * (1.0 - t), w * t, nk));
            }
        }
    }
    let data = f.data();
    let nt = grid.nt();
    let mut out = Array3::zeros(data.dim());
    for n in 0..nt {
        let modes: Vec<Vec<Complex64>> = (0..z.len()).map(|j| axis.dft(|i| data[[i, j, n]])).collect();
        for (j, wj) in weights.iter().enumerate() {
            let mut coef = vec![Complex64::new(0.0, 0.0); axis.len()];
            for (c, wl, wu, nk) in wj {
                for (m, cf) in coef.iter_mut().enumerate() {
                    let a = axis.abs_idx[m];
                    *cf += (modes[c - 1][m] * *wl + modes[*c][m] * *wu) * nk[a];
                }
            }
            for (m, v) in axis.synth(&coef).into_iter().enumerate() {
                out[[m, j, n]] = v;
            }
        }
    }
    ScalarField::new(grid.clone(), Domain::HalfSpace, out)
}

/// Layer potential `w_i = Σ_j ∫∫ K_ij(x'−y', x_n, t−s) G_j(y', s) dy' ds`
/// with `K_ij = −2δ_ij ∂_nΓ + 4∂_j ∫_0^{x_n}∫ ∂_{z_n}Γ(z) ∂_iN(x−z) dz`, by
/// direct quadrature. The wall row is the one-sided limit `w = Ḡ`.
pub fn oracle_w(g: &BoundaryField) -> Result<VectorField> {
    let grid = g.grid();
    check_grid(grid)?;
    if g.ncomp() > 1 && g.comp(1).iter().any(|v| *v != 0.0) {
        return Err(Error::Argument("the layer potential takes tangential data".into()));
    }
    let axis = tan_axis(grid);
    let tr = KernelTransform::new(0.5 * grid.period(), &axis.abs_k);
    let heat = heat_transforms(grid, &tr);
    let z = grid.vertical();
    let l = grid.period();
    let rule = Rule::new(10);
    let na = axis.abs_k.len();
    // Per output node: inner nodes z' with weights and the transforms of ∂_sN, ∂_nN at z_j − z'.
    let inner: Vec<Vec<(f64, f64, Vec<f64>, Vec<f64>)>> = z
        .iter()
        .map(|&zj| {
            if zj == 0.0 {
                return Vec::new();
            }
            let b0 = zj.min(0.25);
            let mut breaks = graded_breaks(0.0, b0, 40, 0.5);
            let panels = ((zj - b0) / 0.125).ceil() as usize;
            if panels > 0 {
                breaks.extend(uniform_breaks(b0, zj, panels).into_iter().skip(1));
            }
            rule.composite_nodes(&breaks)
                .into_iter()
                .map(|(y, w)| {
                    let d = zj - y;
                    let s1 = tr.odd(|s| newton_kernel_periodic_grad(s, d, l)[0]);
                    let c2 = tr.even(|s| newton_kernel_periodic_grad(s, d, l)[1]);
                    (y, w, s1, c2)
                })
                .collect()
        })
        .collect();
    let nm = axis.len();
    let mut q1 = Vec::with_capacity(heat.len());
    let mut q2 = Vec::with_capacity(heat.len());
    for (d, nodes) in heat.iter().enumerate() {
        let mut a1 = Array2::<Complex64>::zeros((nm, z.len()));
        let mut a2 = Array2::<Complex64>::zeros((nm, z.len()));
        for (j, &zj) in z.iter().enumerate() {
            if zj == 0.0 {
                if d == 0 {
                    a1.column_mut(j).fill(Complex64::new(1.0, 0.0));
                }
                continue;
            }
            let mut t1 = vec![0.0; na];
            let mut i1 = vec![0.0; na];
            let mut i2 = vec![0.0; na];
            for (tau, w, h) in nodes {
                let dn = -zj / (2.0 * tau) * gauss(zj, *tau);
                let mut s1 = vec![0.0; na];
                let mut c2 = vec![0.0; na];
                for (y, wy, sk, ck) in &inner[j] {
                    let dg = -y / (2.0 * tau) * gauss(*y, *tau) * wy;
                    for a in 0..na {
                        s1[a] += dg * sk[a];
                        c2[a] += dg * ck[a];
                    }
                }
                for a in 0..na {
                    t1[a] += w * h[a] * (-2.0 * dn);
                    i1[a] += w * h[a] * s1[a];
                    i2[a] += w * h[a] * c2[a];
                }
            }
            for m in 0..nm {
                let a = axis.abs_idx[m];
                let (k, kabs) = if axis.nyquist[m] { (0.0, 0.0) } else { (axis.k[m], axis.abs_k[a]) };
                a1[[m, j]] = Complex64::from(t1[a] + 4.0 * kabs * i1[a]);
                a2[[m, j]] = Complex64::new(0.0, 4.0 * k * i2[a]);
            }
        }
        q1.push(a1);
        q2.push(a2);
    }
    let c = boundary_modes(&axis, g.comp(0));
    let comps = vec![time_convolve(&axis, &q1, &c, z.len()), time_convolve(&axis, &q2, &c, z.len())];
    VectorField::new(grid.clone(), Domain::HalfSpace, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kernel_transforms_match_symbols() {
        let l = 2.0 * PI;
        let axis = Axis1::new((0..16).map(|i| i as f64 * l / 16.0).collect(), l);
        let tr = KernelTransform::new(0.5 * l, &axis.abs_k);
        for &tau in &[1e-4, 0.03, 0.7] {
            let h = tr.even(|s| heat_kernel_1d_periodic(s, tau, l));
            for (a, &k) in axis.abs_k.iter().enumerate() {
                assert!((h[a] - (-k * k * tau).exp()).abs() < 1e-12, "{tau} {k} {}", h[a]);
            }
        }
        for &d in &[1e-3, 0.2, 1.5] {
            let nk = tr.even(|s| newton_kernel_periodic(s, d, l));
            let s1 = tr.odd(|s| newton_kernel_periodic_grad(s, d, l)[0]);
            let c2 = tr.even(|s| newton_kernel_periodic_grad(s, d, l)[1]);
            for (a, &k) in axis.abs_k.iter().enumerate() {
                let (want_n, want_c) = if k == 0.0 { (0.5 * d, 0.5) } else { (-(-k * d).exp() / (2.0 * k), 0.5 * (-k * d).exp()) };
                let want_s = if k == 0.0 { 0.0 } else { 0.5 * (-k * d).exp() };
                assert!((nk[a] - want_n).abs() < 1e-10, "N {d} {k}: {} {want_n}", nk[a]);
                assert!((s1[a] - want_s).abs() < 1e-10, "dsN {d} {k}");
                assert!((c2[a] - want_c).abs() < 1e-10, "dnN {d} {k}");
            }
        }
    }

    #[test]
    fn time_nodes_integrate_singular_weight() {
        // ∫_0^{Δt} τ^{-1/2} dτ = 2√Δt.
        let dt = 0.03;
        let v: f64 = time_nodes(1, dt).iter().map(|(t, w)| w / t.sqrt()).sum();
        assert!((v - 2.0 * dt.sqrt()).abs() < 1e-12);
        let v: f64 = time_nodes(3, dt).iter().map(|(t, w)| w * t).sum();
        assert!((v - 0.5 * dt * dt * (9.0 - 4.0)).abs() < 1e-14);
    }

    #[test]
    fn rejects_oversize_grids() {
        let g = HalfSpaceGrid::uniform(2, 32, 4.0, 17, 0.5, 8).unwrap();
        assert!(matches!(oracle_t2(&BoundaryField::zeros(&g, 1)), Err(Error::OracleSize(_))));
        let g = HalfSpaceGrid::uniform(3, 8, 4.0, 9, 0.5, 4).unwrap();
        assert!(matches!(oracle_t2(&BoundaryField::zeros(&g, 1)), Err(Error::OracleSize(_))));
    }

    #[test]
    fn zero_input_zero_output() {
        let g = HalfSpaceGrid::uniform(2, 8, 4.0, 9, 0.5, 4).unwrap();
        assert_eq!(oracle_t2(&BoundaryField::zeros(&g, 1)).unwrap().max_abs(), 0.0);
        assert_eq!(oracle_w(&BoundaryField::zeros(&g, 2)).unwrap().max_abs(), 0.0);
    }
}
