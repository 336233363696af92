//! Gagliardo seminorms in time of piecewise-linear interpolants.
//!
//! For a series `u` on uniform nodes the double integral
//! `∫_0^T∫_0^T |u(t)−u(s)|^q |t−s|^{−1−σq} ds dt` is split into cell pairs.
//! The same-cell and adjacent-cell contributions are singular on the
//! diagonal and are integrated exactly in `|t−s|` (closed form, and a polar
//! substitution with a closed inner integral respectively); the remaining
//! pairs use tensor Gauss–Legendre rules whose order falls with distance.

use ndarray::{Array3, Axis};

use super::spatial::{decompose, powq, Geometry, SpaceTimeField};
use crate::core::HalfSpaceGrid;
use crate::error::{Error, Result};
use crate::quad::legendre;

/// Spatial norm applied to `f(t) − f(s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpatialNorm {
    Lq,
    /// `Ḃ^s_q` by dyadic blocks, any real `s`.
    Besov(f64),
}

/// `∫_a^b |c0 + c1 θ|^q dθ`.
fn lin_power_integral(c0: f64, c1: f64, a: f64, b: f64, q: f64) -> f64 {
    if c1.abs() <= 1e-300 {
        return powq(c0, q) * (b - a);
    }
    let prim = |x: f64| {
        let l = c0 + c1 * x;
        powq(l, q) * l / ((q + 1.0) * c1)
    };
    prim(b) - prim(a)
}

/// Precomputed rules for one `(dt, σ, q)`.
pub(crate) struct TimeKernel {
    dt: f64,
    q: f64,
    e: f64,
    /// Same-cell factor multiplying `|δ/h|^q`.
    same: f64,
    /// Gauss nodes on `[1, 2]` for the outer adjacent integral.
    adj: Vec<(f64, f64)>,
    rules: Vec<Vec<(f64, f64)>>,
}

const NEAR_ORDER: usize = 3;
const MID_ORDER: usize = 2;
const NEAR_LAG: usize = 3;
const MID_LAG: usize = 8;

impl TimeKernel {
    pub fn new(dt: f64, sigma: f64, q: f64) -> Self {
        let e = q - sigma * q;
        let h = dt;
        let same = 2.0 * h.powf(e + 1.0) / (e * (e + 1.0));
        let adj = legendre(10).into_iter().map(|(x, w)| (1.5 + 0.5 * x, 0.5 * w)).collect();
        let rules = [1, MID_ORDER, NEAR_ORDER]
            .iter()
            .map(|&n| legendre(n).into_iter().map(|(x, w)| (0.5 + 0.5 * x, 0.5 * w)).collect())
            .collect();
        Self { dt, q, e, same, adj, rules }
    }

    fn rule(&self, lag: usize) -> &[(f64, f64)] {
        if lag <= NEAR_LAG {
            &self.rules[2]
        } else if lag <= MID_LAG {
            &self.rules[1]
        } else {
            &self.rules[0]
        }
    }

    /// Adjacent cells with slopes `m1` (earlier) and `m2` (later):
    /// `∫_0^h∫_0^h |m2 x + m1 y|^q (x+y)^{−1−σq} dx dy`.
    fn adjacent(&self, m1: f64, m2: f64) -> f64 {
        let (q, e, h) = (self.q, self.e, self.dt);
        let c0 = m1;
        let c1 = m2 - m1;
        let inner = lin_power_integral(c0, c1, 0.0, 1.0, q) / (e + 1.0);
        let outer: f64 = self
            .adj
            .iter()
            .map(|&(rho, w)| w * rho.powf(e) * lin_power_integral(c0, c1, 1.0 - 1.0 / rho, 1.0 / rho, q))
            .sum();
        h.powf(e + 1.0) * (inner + outer)
    }

    /// The double integral for one series.
    pub fn integral(&self, u: &[f64]) -> f64 {
        let nc = u.len().saturating_sub(1);
        if nc == 0 {
            return 0.0;
        }
        let h = self.dt;
        let q = self.q;
        let slope: Vec<f64> = (0..nc).map(|i| (u[i + 1] - u[i]) / h).collect();
        let mut acc: f64 = slope.iter().map(|m| powq(*m, q) * self.same).sum();
        for i in 0..nc.saturating_sub(1) {
            acc += 2.0 * self.adjacent(slope[i], slope[i + 1]);
        }
        // Interpolated values at each rule's nodes, per cell.
        let vals: Vec<Vec<Vec<f64>>> = self
            .rules
            .iter()
            .map(|r| (0..nc).map(|i| r.iter().map(|(x, _)| u[i] + x * (u[i + 1] - u[i])).collect()).collect())
            .collect();
        let expo = -1.0 - (q - self.e);
        for lag in 2..nc {
            let r = self.rule(lag);
            let ri = if lag <= NEAR_LAG { 2 } else if lag <= MID_LAG { 1 } else { 0 };
            let v = &vals[ri];
            // Kernel values depend only on the node offsets within the pair.
            let ker: Vec<f64> = r
                .iter()
                .flat_map(|(xa, wa)| r.iter().map(move |(xb, wb)| wa * wb * ((lag as f64 + xb - xa) * h).powf(expo)))
                .collect();
            let mut s = 0.0;
            for a in 0..nc - lag {
                let (va, vb) = (&v[a], &v[a + lag]);
                let mut idx = 0;
                for x in va {
                    for y in vb {
                        s += ker[idx] * powq(y - x, q);
                        idx += 1;
                    }
                }
            }
            acc += 2.0 * h * h * s;
        }
        acc
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::Argument(format!("time order must lie in (0, 1), got {sigma}")));
    }
    Ok(())
}

/// Weighted series `(weight, samples over time)` for a spatial norm.
pub(crate) fn weighted_series(
    grid: &HalfSpaceGrid,
    geometry: Geometry,
    arrays: &[Array3<f64>],
    q: f64,
    spatial: SpatialNorm,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let mut out = Vec::new();
    let mut push = |w_of: &dyn Fn(usize) -> f64, a: &Array3<f64>, extra: f64| {
        let nz = a.len_of(Axis(1));
        for (i, lane) in a.lanes(Axis(2)).into_iter().enumerate() {
            out.push((extra * w_of(i % nz), lane.to_vec()));
        }
    };
    match spatial {
        SpatialNorm::Lq => {
            let wz: Vec<f64> = match geometry {
                Geometry::Boundary => vec![1.0],
                Geometry::HalfSpace => grid.vertical_weights(),
                Geometry::WholeSpace => crate::core::Domain::WholeSpace.vertical_weights(grid),
            };
            let area = grid.cell_area();
            for a in arrays {
                push(&|v| area * wz[v], a, 1.0);
            }
        }
        SpatialNorm::Besov(s) => {
            let b = decompose(grid, geometry, arrays, None)?;
            for (j, comps) in &b.blocks {
                let wj = 2f64.powf(*j as f64 * s * q);
                for c in comps {
                    push(&|v| b.layout.weights[v], c, wj);
                }
            }
        }
    }
    Ok(out)
}

/// `(∫_0^T∫_0^T ‖f(t)−f(s)‖_X^q / |t−s|^{1+σq} ds dt)^{1/q}` with `X` the
/// chosen spatial norm and `f` interpolated linearly between time nodes.
pub fn gagliardo_time_norm<F: SpaceTimeField>(f: &F, sigma: f64, q: f64, spatial: SpatialNorm) -> Result<f64> {
    check_sigma(sigma)?;
    super::spatial::check_exponents(0.0, q)?;
    let g = f.grid();
    let series = weighted_series(g, f.geometry(), &f.arrays(), q, spatial)?;
    let k = TimeKernel::new(g.dt(), sigma, q);
    let total: f64 = series.iter().map(|(w, u)| if *w == 0.0 { 0.0 } else { w * k.integral(u) }).sum();
    Ok(total.powf(1.0 / q))
}

/// Gagliardo seminorm of one scalar series on uniform nodes with step `dt`.
pub fn gagliardo_series(u: &[f64], dt: f64, sigma: f64, q: f64) -> Result<f64> {
    check_sigma(sigma)?;
    super::spatial::check_exponents(0.0, q)?;
    Ok(TimeKernel::new(dt, sigma, q).integral(u).powf(1.0 / q))
}
