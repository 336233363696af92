//! Whole-space heat operators: semigroup, trace, `T1`, `T1*` and the volume potential.

use ndarray::{Array3, Axis, Zip};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::core::{BoundaryField, Domain, HalfSpaceGrid, TensorField, VectorField};
use crate::error::{Error, Result};
use crate::special::{phi1, psi_lin};
use crate::transforms::fft::FullWaves;
use crate::transforms::{extend_zero, trace_boundary, AxisState, SpectralField};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn require_whole(u: &VectorField) -> Result<()> {
    if u.domain() != Domain::WholeSpace {
        return Err(Error::Domain("heat operators act on whole-space fields".into()));
    }
    Ok(())
}

/// `Γ_t * h̃` at every time node, from the samples at the first time node.
pub fn heat_semigroup(h: &VectorField) -> Result<VectorField> {
    require_whole(h)?;
    let g = h.grid();
    let w = FullWaves::new(g);
    let times = g.times();
    let s = SpectralField::forward(h, AxisState::Full)?;
    let comps = s
        .into_comps()
        .into_iter()
        .map(|mut c| {
            let init = c.index_axis(Axis(2), 0).to_owned();
            Zip::indexed(&mut c).for_each(|(m, v, k), x| {
                *x = init[[m, v]] * (-w.norm2(m, v) * times[k]).exp();
            });
            c
        })
        .collect();
    SpectralField::from_parts(g, Domain::WholeSpace, AxisState::Full, comps).inverse()
}

/// Wall trace of [`heat_semigroup`].
pub fn heat_trace(h: &VectorField) -> Result<BoundaryField> {
    trace_boundary(&heat_semigroup(h)?)
}

/// Exponential-integrator coefficients for `u' = −λu + f`, `f` piecewise
/// linear in time: `u_{m+1} = E u_m + a f_m + b f_{m+1}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ExpStep {
    pub e: f64,
    pub a: f64,
    pub b: f64,
}

impl ExpStep {
    pub fn new(lambda: f64, dt: f64) -> Self {
        let x = -lambda * dt;
        let p = psi_lin(x);
        Self {
            e: x.exp(),
            a: dt * p,
            b: dt * (phi1(x) - p),
        }
    }

    /// Causal solve with `u_0 = 0`.
    pub fn forward(&self, f: &[Complex64], out: &mut [Complex64]) {
        out[0] = Complex64::new(0.0, 0.0);
        for m in 0..f.len() - 1 {
            out[m + 1] = out[m] * self.e + f[m] * self.a + f[m + 1] * self.b;
        }
    }

    /// `Ω⁻¹AᵀΩ` with trapezoid time weights `w`: the exact discrete adjoint of [`Self::forward`].
    pub fn adjoint(&self, g: &[Complex64], w: &[f64], out: &mut [Complex64]) {
        let n = g.len();
        // z_j = Σ_{m≥j} E^{m−j} w_m g_m
        let mut z_next = Complex64::new(0.0, 0.0);
        for j in (0..n).rev() {
            let z = g[j] * w[j] + z_next * self.e;
            let mut v = z_next * self.a;
            if j >= 1 {
                v += z * self.b;
            }
            out[j] = v / w[j];
            z_next = z;
        }
    }
}

fn t1_spectral(grid: &HalfSpaceGrid, comps: &mut [Array3<Complex64>], adjoint: bool) {
    let w = FullWaves::new(grid);
    let dt = grid.dt();
    let tw = grid.time_weights();
    for c in comps.iter_mut() {
        let (mm, nz, nt) = c.dim();
        let mut lanes: Vec<(usize, Vec<Complex64>)> = (0..mm * nz)
            .map(|i| (i, c.slice(ndarray::s![i / nz, i % nz, ..]).to_vec()))
            .collect();
        lanes.par_iter_mut().for_each(|(i, lane)| {
            let (m, v) = (*i / nz, *i % nz);
            let st = ExpStep::new(w.norm2(m, v), dt);
            let mut out = vec![Complex64::new(0.0, 0.0); nt];
            if adjoint {
                st.adjoint(lane, &tw, &mut out);
            } else {
                st.forward(lane, &mut out);
            }
            *lane = out;
        });
        for (i, lane) in lanes {
            for (k, v) in lane.into_iter().enumerate() {
                c[[i / nz, i % nz, k]] = v;
            }
        }
    }
}

fn t1_generic(f: &VectorField, adjoint: bool) -> Result<VectorField> {
    require_whole(f)?;
    let g = f.grid();
    let mut comps = SpectralField::forward(f, AxisState::Full)?.into_comps();
    t1_spectral(g, &mut comps, adjoint);
    SpectralField::from_parts(g, Domain::WholeSpace, AxisState::Full, comps).inverse()
}

/// `T1 f(t) = ∫_0^t Γ_{t−s} * f(s) ds`, exact in time for piecewise-linear data.
pub fn t1_apply(f: &VectorField) -> Result<VectorField> {
    t1_generic(f, false)
}

/// Discrete adjoint of [`t1_apply`] in the trapezoid space-time inner product.
pub fn t1_star_apply(f: &VectorField) -> Result<VectorField> {
    t1_generic(f, true)
}

/// Spectral coefficients of `ℙ div 𝓕̃` for a whole-space tensor field.
fn projected_divergence(f: &TensorField) -> Result<Vec<Array3<Complex64>>> {
    let g = f.grid();
    let n = g.n();
    let w = FullWaves::new(g);
    let mut hat: Vec<Vec<Array3<Complex64>>> = Vec::with_capacity(n);
    for k in 0..n {
        let row = VectorField::new(g.clone(), Domain::WholeSpace, (0..n).map(|i| f.comp(k, i).clone()).collect())?;
        hat.push(SpectralField::forward(&row, AxisState::Full)?.into_comps());
    }
    let dim = hat[0][0].dim();
    let mut out: Vec<Array3<Complex64>> = (0..n).map(|_| Array3::zeros(dim)).collect();
    let (mm, nz, nt) = dim;
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    for m in 0..mm {
        for v in 0..nz {
            let xi: Vec<f64> = (0..n).map(|c| w.odd(m, v, c)).collect();
            let k2 = w.norm2_odd(m, v);
            for t in 0..nt {
                for i in 0..n {
                    d[i] = (0..n).map(|k| I * xi[k] * hat[k][i][[m, v, t]]).sum();
                }
                let dot: Complex64 = if k2 > 0.0 {
                    (0..n).map(|j| xi[j] * d[j]).sum::<Complex64>() / k2
                } else {
                    Complex64::new(0.0, 0.0)
                };
                for j in 0..n {
                    out[j][[m, v, t]] = d[j] - dot * xi[j];
                }
            }
        }
    }
    Ok(out)
}

/// Volume potential on the whole space, `T1(ℙ div 𝓕̃)` with `𝓕̃` the zero extension.
pub fn volume_potential_whole(f: &TensorField) -> Result<VectorField> {
    let g = f.grid();
    g.require_uniform("volume potential")?;
    let ext = match f.domain() {
        Domain::HalfSpace => extend_zero(f)?,
        Domain::WholeSpace => f.clone(),
        Domain::BoundaryPlane => return Err(Error::Domain("volume potential needs a volume field".into())),
    };
    let mut comps = projected_divergence(&ext)?;
    t1_spectral(g, &mut comps, false);
    SpectralField::from_parts(g, Domain::WholeSpace, AxisState::Full, comps).inverse()
}

/// Volume potential `V` restricted to the half space.
pub fn volume_potential_v(f: &TensorField) -> Result<VectorField> {
    volume_potential_whole(f)?.restrict_half()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::inner3;
    use std::f64::consts::PI;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::new(2, 2.0 * PI, 8, PI, 9, crate::core::Grading::Uniform, 1.0, 10).unwrap()
    }

    #[test]
    fn single_mode_decay() {
        let g = grid();
        let h = VectorField::stationary(&g, Domain::WholeSpace, |x| [x[0].cos(), 0.0, 0.0]);
        let v = heat_semigroup(&h).unwrap();
        for k in 0..g.nt() {
            let expect = (-g.time(k)).exp();
            assert!((v.comp(0)[[0, 3, k]] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn t1_of_constant_in_time_mode() {
        let g = grid();
        // |ξ|² = 1 + 4 = 5.
        let f = VectorField::stationary(&g, Domain::WholeSpace, |x| [x[0].cos() * (2.0 * x[1]).cos(), 0.0, 0.0]);
        let u = t1_apply(&f).unwrap();
        for k in 0..g.nt() {
            let expect = (1.0 - (-5.0 * g.time(k)).exp()) / 5.0;
            assert!((u.comp(0)[[0, 8, k]] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn t1_adjoint_identity() {
        let g = grid();
        let f = VectorField::from_fn(&g, Domain::WholeSpace, |x, t| {
            [x[0].sin() * (x[1]).cos() * t, (2.0 * x[0]).cos() * (x[1] * 2.0).sin() * (1.0 - t), 0.0]
        });
        let h = VectorField::from_fn(&g, Domain::WholeSpace, |x, t| {
            [(x[0] + x[1]).cos() * (3.0 * t).sin(), x[1].sin() * t * t, 0.0]
        });
        let tf = t1_apply(&f).unwrap();
        let ts = t1_star_apply(&h).unwrap();
        let ip = |a: &VectorField, b: &VectorField| -> f64 {
            (0..2)
                .map(|c| inner3(&g, Domain::WholeSpace, &a.comp(c).view(), &b.comp(c).view()))
                .sum()
        };
        let lhs = ip(&tf, &h);
        let rhs = ip(&f, &ts);
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "{lhs} {rhs}");
    }

    #[test]
    fn volume_potential_starts_at_zero() {
        let g = grid();
        let f = TensorField::from_fn(&g, Domain::HalfSpace, |x, t| {
            let e = (-x[1] * x[1]).exp() * (1.0 + t);
            [[x[0].sin() * e, e, 0.0], [0.0, x[0].cos() * e, 0.0], [0.0; 3]]
        });
        let v = volume_potential_v(&f).unwrap();
        let at0 = v.time_slice(0);
        assert!(at0.iter().all(|a| a.iter().all(|x| x.abs() < 1e-15)));
    }
}
