//! Fourier multipliers: Riesz transforms, Helmholtz projection, gradients.

use ndarray::{Array2, Array3, Zip};
use num_complex::Complex64;

use super::fd::VerticalStencil;
use super::fft::{tan_forward, tan_forward2, tan_inverse, tan_inverse2, FullWaves, TanWaves};
use super::spectral::{AxisState, SpectralField};
use crate::core::{BoundaryField, Domain, HalfSpaceGrid, ScalarField, VectorField};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn tan_multiplier(grid: &HalfSpaceGrid, a: &Array3<f64>, sym: impl Fn(&TanWaves, usize) -> Complex64) -> Array3<f64> {
    let w = TanWaves::new(grid);
    let mut f = tan_forward(grid, a);
    for (m, mut row) in f.outer_iter_mut().enumerate() {
        let s = sym(&w, m);
        row.mapv_inplace(|v| v * s);
    }
    tan_inverse(grid, f)
}

fn riesz_symbol(w: &TanWaves, m: usize, axis: usize) -> Complex64 {
    let ko = w.ko[m];
    let r = (ko[0] * ko[0] + ko[1] * ko[1]).sqrt();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        -I * (ko[axis] / r)
    }
}

/// Tangential Riesz transform `R'_a` of `(tangential, vertical, time)` samples.
pub(crate) fn riesz_tan(grid: &HalfSpaceGrid, a: &Array3<f64>, axis: usize) -> Array3<f64> {
    tan_multiplier(grid, a, |w, m| riesz_symbol(w, m, axis))
}

pub(crate) fn riesz_tan2(grid: &HalfSpaceGrid, a: &Array2<f64>, axis: usize) -> Array2<f64> {
    let w = TanWaves::new(grid);
    let mut f = tan_forward2(grid, a);
    for (m, mut row) in f.outer_iter_mut().enumerate() {
        let s = riesz_symbol(&w, m, axis);
        row.mapv_inplace(|v| v * s);
    }
    tan_inverse2(grid, f)
}

/// Tangential derivative `∂_a` (spectral).
pub(crate) fn d_tan(grid: &HalfSpaceGrid, a: &Array3<f64>, axis: usize) -> Array3<f64> {
    tan_multiplier(grid, a, |w, m| I * w.ko[m][axis])
}

/// Fields the Riesz transform `-iξ_a/|ξ|` can act on.
pub trait RieszTarget: Sized {
    fn riesz(&self, axis: usize) -> Result<Self>;
}

impl RieszTarget for BoundaryField {
    fn riesz(&self, axis: usize) -> Result<Self> {
        let g = self.grid();
        if axis + 1 >= g.n() {
            return Err(Error::Argument(format!(
                "boundary Riesz transform needs a tangential axis, got {axis}"
            )));
        }
        let comps = self.comps().iter().map(|c| riesz_tan2(g, c, axis)).collect();
        BoundaryField::new(g.clone(), comps)
    }
}

impl RieszTarget for VectorField {
    /// Whole-space fields use the full symbol on any axis; half-space and
    /// boundary-plane fields only accept tangential axes.
    fn riesz(&self, axis: usize) -> Result<Self> {
        let g = self.grid();
        if axis >= g.n() {
            return Err(Error::Argument(format!("axis {axis} out of range")));
        }
        match self.domain() {
            Domain::WholeSpace => {
                let w = FullWaves::new(g);
                map_full(self, |m, v, c, vals| {
                    let r = w.norm2_odd(m, v).sqrt();
                    if r == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        -I * (w.odd(m, v, axis) / r) * vals[c]
                    }
                })
            }
            _ => {
                if axis + 1 >= g.n() {
                    return Err(Error::Argument(format!(
                        "axis {axis} is not tangential; only whole-space fields transform along x_n"
                    )));
                }
                let comps = self.comps().iter().map(|c| riesz_tan(g, c, axis)).collect();
                VectorField::new(g.clone(), self.domain(), comps)
            }
        }
    }
}

pub fn riesz_apply<F: RieszTarget>(f: &F, axis: usize) -> Result<F> {
    f.riesz(axis)
}

/// Applies a pointwise map on full spectral coefficients:
/// `out_c(m, v, k) = op(m, v, c, [f̂_0, ..., f̂_{n-1}](m, v, k))`.
fn map_full<F>(u: &VectorField, op: F) -> Result<VectorField>
where
    F: Fn(usize, usize, usize, &[Complex64]) -> Complex64,
{
    require_whole(u.domain())?;
    let g = u.grid();
    let n = g.n();
    let s = SpectralField::forward(u, AxisState::Full)?;
    let comps = s.into_comps();
    let (mm, nz, nt) = comps[0].dim();
    let mut out: Vec<Array3<Complex64>> = (0..n).map(|_| Array3::zeros((mm, nz, nt))).collect();
    let mut vals = vec![Complex64::new(0.0, 0.0); n];
    for m in 0..mm {
        for v in 0..nz {
            for k in 0..nt {
                for c in 0..n {
                    vals[c] = comps[c][[m, v, k]];
                }
                for c in 0..n {
                    out[c][[m, v, k]] = op(m, v, c, &vals);
                }
            }
        }
    }
    SpectralField::from_parts(g, Domain::WholeSpace, AxisState::Full, out).inverse()
}

fn require_whole(d: Domain) -> Result<()> {
    if d != Domain::WholeSpace {
        return Err(Error::Domain("operation needs a whole-space field".into()));
    }
    Ok(())
}

/// Helmholtz projection `ℙ = I − ξξᵀ/|ξ|²`, identity on the zero mode.
pub fn helmholtz_project(f: &VectorField) -> Result<VectorField> {
    let w = FullWaves::new(f.grid());
    let n = f.grid().n();
    map_full(f, |m, v, c, vals| {
        let k2 = w.norm2_odd(m, v);
        if k2 == 0.0 {
            return vals[c];
        }
        let dot: Complex64 = (0..n).map(|j| w.odd(m, v, j) * vals[j]).sum();
        vals[c] - dot * (w.odd(m, v, c) / k2)
    })
}

/// Scalar potential with `f = ℙf + ∇ℚf`, symbol `−iξ_j/|ξ|²`, zero mean.
pub fn q_potential(f: &VectorField) -> Result<ScalarField> {
    require_whole(f.domain())?;
    let g = f.grid();
    let n = g.n();
    let w = FullWaves::new(g);
    let s = SpectralField::forward(f, AxisState::Full)?;
    let comps = s.into_comps();
    let (mm, nz, nt) = comps[0].dim();
    let mut out = Array3::<Complex64>::zeros((mm, nz, nt));
    Zip::indexed(&mut out).for_each(|(m, v, k), o| {
        let k2 = w.norm2_odd(m, v);
        if k2 > 0.0 {
            let dot: Complex64 = (0..n).map(|j| w.odd(m, v, j) * comps[j][[m, v, k]]).sum();
            *o = -I * dot / k2;
        }
    });
    SpectralField::from_parts(g, Domain::WholeSpace, AxisState::Full, vec![out]).inverse_scalar()
}

/// Spectral gradient of a whole-space scalar.
pub fn spectral_gradient(psi: &ScalarField) -> Result<VectorField> {
    require_whole(psi.domain())?;
    let g = psi.grid();
    let w = FullWaves::new(g);
    let s = SpectralField::forward_scalar(psi, AxisState::Full)?;
    let c = s.into_comps().pop().unwrap();
    let comps = (0..g.n())
        .map(|a| {
            let mut o = c.clone();
            Zip::indexed(&mut o).for_each(|(m, v, _), x| *x *= I * w.odd(m, v, a));
            o
        })
        .collect();
    SpectralField::from_parts(g, Domain::WholeSpace, AxisState::Full, comps).inverse()
}

/// Spectral divergence of a whole-space vector field.
pub fn spectral_divergence(u: &VectorField) -> Result<ScalarField> {
    require_whole(u.domain())?;
    let g = u.grid();
    let w = FullWaves::new(g);
    let s = SpectralField::forward(u, AxisState::Full)?;
    let comps = s.into_comps();
    let mut out = Array3::<Complex64>::zeros(comps[0].dim());
    Zip::indexed(&mut out).for_each(|(m, v, k), o| {
        *o = (0..g.n()).map(|j| I * w.odd(m, v, j) * comps[j][[m, v, k]]).sum();
    });
    SpectralField::from_parts(g, Domain::WholeSpace, AxisState::Full, vec![out]).inverse_scalar()
}

/// Divergence of a half-space field: spectral in `x'`, fourth-order finite
/// differences in `x_n`.
pub fn divergence_half(u: &VectorField) -> Result<ScalarField> {
    if u.domain() != Domain::HalfSpace {
        return Err(Error::Domain("half-space divergence needs a half-space field".into()));
    }
    let g = u.grid();
    let n = g.n();
    let st = VerticalStencil::first(g.vertical());
    let mut div = st.apply(u.comp(n - 1));
    for a in 0..n - 1 {
        div += &d_tan(g, u.comp(a), a);
    }
    ScalarField::new(g.clone(), Domain::HalfSpace, div)
}

/// Scale for relative divergence: `Σ_ij ‖∂_j u_i‖_{L²}` with the same
/// derivative stencils as [`divergence_half`].
pub(crate) fn gradient_scale_half(u: &VectorField) -> f64 {
    let g = u.grid();
    let n = g.n();
    let st = VerticalStencil::first(g.vertical());
    let mut acc = 0.0;
    for i in 0..n {
        let c = u.comp(i);
        acc += crate::core::lq_array(g, Domain::HalfSpace, &st.apply(c).view(), 2.0);
        for a in 0..n - 1 {
            acc += crate::core::lq_array(g, Domain::HalfSpace, &d_tan(g, c, a).view(), 2.0);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn riesz_of_cosine_is_sine() {
        let g = HalfSpaceGrid::uniform(2, 16, 1.0, 3, 1.0, 2).unwrap();
        let f = BoundaryField::from_fn(&g, 1, |x, _| [x[0].cos(), 0.0, 0.0]);
        let r = riesz_apply(&f, 0).unwrap();
        let e = BoundaryField::from_fn(&g, 1, |x, _| [x[0].sin(), 0.0, 0.0]);
        assert!(r.sub(&e).unwrap().max_abs() < 1e-13);
        let c = BoundaryField::from_fn(&g, 1, |_, _| [3.0, 0.0, 0.0]);
        assert!(riesz_apply(&c, 0).unwrap().max_abs() < 1e-15);
        assert!(riesz_apply(&c, 1).is_err());
    }

    #[test]
    fn projection_of_single_mode() {
        // (sin x_2, 0) is divergence free: ℙ leaves it unchanged.
        let g = HalfSpaceGrid::new(2, 2.0 * PI, 8, PI, 9, crate::core::Grading::Uniform, 1.0, 2).unwrap();
        let f = VectorField::from_fn(&g, Domain::WholeSpace, |x, _| [x[1].sin(), 0.0, 0.0]);
        let p = helmholtz_project(&f).unwrap();
        assert!(p.sub(&f).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn gradient_is_annihilated_and_recovered() {
        let g = HalfSpaceGrid::new(2, 2.0 * PI, 8, PI, 9, crate::core::Grading::Uniform, 1.0, 2).unwrap();
        let psi = ScalarField::from_fn(&g, Domain::WholeSpace, |x, _| x[0].sin() * (2.0 * x[1]).cos());
        let grad = spectral_gradient(&psi).unwrap();
        assert!(helmholtz_project(&grad).unwrap().max_abs() < 1e-13);
        let q = q_potential(&grad).unwrap();
        let err = (q.data() - psi.data()).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn half_space_divergence_of_stream_function_field() {
        let g = HalfSpaceGrid::uniform(2, 16, 4.0, 81, 1.0, 2).unwrap();
        // u = (∂_2 ψ, −∂_1 ψ) with ψ = sin x_1 e^{−x_2²}.
        let u = VectorField::from_fn(&g, Domain::HalfSpace, |x, _| {
            let e = (-x[1] * x[1]).exp();
            [-2.0 * x[1] * x[0].sin() * e, -x[0].cos() * e, 0.0]
        });
        let d = divergence_half(&u).unwrap();
        assert!(d.lq_norm(2.0) / gradient_scale_half(&u) < 1e-5);
    }
}
