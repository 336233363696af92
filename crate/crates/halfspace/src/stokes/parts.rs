//! The four parts of the Stokes solution `u = w + ∇φ + v + V` and the
//! boundary correction `G`.

use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::core::{BoundaryField, Domain, HalfSpaceGrid, ScalarField, VectorField};
use crate::error::{Error, Result};
use crate::potentials::{
    convolve_mode, dn_s_operator, dn_t2_apply_with, heat_semigroup, poisson_array, s_operator, KernelQuadrature,
};
use crate::transforms::fft::{tan_forward2, tan_inverse};
use crate::transforms::{d_tan, extend_solenoidal, riesz_tan, riesz_tan2, trace_boundary, Extension, VerticalStencil};

/// Heat extension `v = Γ_t * h̃` restricted to the half space, with the
/// extension report (jump warning, divergence).
pub fn build_v(h: &VectorField) -> Result<(VectorField, Extension)> {
    let ext = extend_solenoidal(h)?;
    let v = heat_semigroup(&ext.field)?.restrict_half()?;
    Ok((v, ext))
}

/// `ψ = g_n − v_n|wall − V_n|wall`.
pub fn normal_defect(g: &BoundaryField, v: &VectorField, vol: &VectorField) -> Result<Array2<f64>> {
    let n = g.grid().n();
    let tv = trace_boundary(v)?;
    let tw = trace_boundary(vol)?;
    Ok(&(&g.comp_or_zero(n - 1) - tv.comp(n - 1)) - tw.comp(n - 1))
}

/// `∇φ = (P_{x_n}R'ψ, P_{x_n}ψ)` built from Poisson extensions, never by
/// differencing `φ`.
pub fn build_grad_phi(g: &BoundaryField, v: &VectorField, vol: &VectorField) -> Result<VectorField> {
    let grid = g.grid();
    let n = grid.n();
    let psi = normal_defect(g, v, vol)?;
    let mut comps: Vec<Array3<f64>> = (0..n - 1)
        .map(|a| poisson_array(grid, &riesz_tan2(grid, &psi, a)))
        .collect();
    comps.push(poisson_array(grid, &psi));
    VectorField::new(grid.clone(), Domain::HalfSpace, comps)
}

/// `G = (G', 0)` with `G' = g' − v'|wall − V'|wall − R'ψ`.
#[allow(non_snake_case)]
pub fn build_G(g: &BoundaryField, v: &VectorField, vol: &VectorField) -> Result<BoundaryField> {
    let grid = g.grid();
    let n = grid.n();
    let psi = normal_defect(g, v, vol)?;
    let tv = trace_boundary(v)?;
    let tw = trace_boundary(vol)?;
    let mut comps: Vec<Array2<f64>> = (0..n - 1)
        .map(|a| &(&(&g.comp_or_zero(a) - tv.comp(a)) - tw.comp(a)) - &riesz_tan2(grid, &psi, a))
        .collect();
    comps.push(Array2::zeros((grid.tan_len(), grid.nt())));
    BoundaryField::new(grid.clone(), comps)
}

fn check_tangential(g: &BoundaryField) -> Result<()> {
    let n = g.grid().n();
    if g.ncomp() == n {
        let m = g.comp(n - 1).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m > 0.0 {
            return Err(Error::Argument(format!(
                "layer potential needs vanishing normal data, got max |G_n| = {m:.3e}"
            )));
        }
    }
    Ok(())
}

/// Tables for the Stokes layer potential on one grid.
pub struct LayerPotential {
    pub quad: KernelQuadrature,
    smoothed: Vec<Array2<f64>>,
}

impl LayerPotential {
    pub fn new(grid: &HalfSpaceGrid) -> Self {
        let quad = KernelQuadrature::new(grid);
        let smoothed = (0..quad.frequencies().len())
            .into_par_iter()
            .map(|r| quad.smoothed_normal_table(r))
            .collect();
        Self { quad, smoothed }
    }

    /// Layer potential `w` with wall value `G'` and zero normal trace.
    ///
    /// Per tangential mode, with `D = ∂_n T2` and `ζ` the vertical kernel of
    /// `∫_0^{x_n} e^{-|ξ'|(x_n−y_n)} D(·) dy_n`:
    /// `ŵ_i = −2D Ĝ_i + (2ξ_i/|ξ'|) ζ(ξ·Ĝ)`, `ŵ_n = 2i ζ(ξ·Ĝ)`.
    /// This is `w' = −2∂_nT2G' + 4∇'𝓢f`, `w_n = −2R'·∂_nT2G' + 4∂_n𝓢f` with
    /// `f = ∇'·∂_nT2G'`, where the `N̂(0)` term of `∂_n𝓢` cancels the Riesz term.
    pub fn apply(&self, g: &BoundaryField) -> Result<VectorField> {
        check_tangential(g)?;
        let grid = g.grid();
        let n = grid.n();
        let nz = grid.n_vert();
        let nt = grid.nt();
        let modes = &self.quad.modes;
        let gh: Vec<Array2<Complex64>> = (0..n - 1).map(|a| tan_forward2(grid, &g.comp_or_zero(a))).collect();
        let mut out: Vec<Array3<Complex64>> = (0..n).map(|_| Array3::zeros((grid.tan_len(), nz, nt))).collect();
        let per_mode: Vec<Vec<Array2<Complex64>>> = (0..grid.tan_len())
            .into_par_iter()
            .map(|m| {
                let r = modes.of_mode[m];
                let k = modes.ks[r];
                let xi = modes.waves.ko[m];
                let mut comps = Vec::with_capacity(n);
                let mut c = Array2::<Complex64>::zeros((nz, nt));
                if k > 0.0 {
                    let h: Vec<Complex64> = (0..nt)
                        .map(|t| (0..n - 1).map(|a| gh[a][[m, t]] * xi[a]).sum())
                        .collect();
                    convolve_mode(&self.smoothed[r], &h, &mut c.view_mut());
                }
                for (a, ga) in gh.iter().enumerate() {
                    let mut d = Array2::<Complex64>::zeros((nz, nt));
                    convolve_mode(self.quad.normal_table(r), &ga.row(m).to_vec(), &mut d.view_mut());
                    d.mapv_inplace(|v| v * -2.0);
                    if k > 0.0 {
                        d.scaled_add(Complex64::new(2.0 * xi[a] / k, 0.0), &c);
                    }
                    comps.push(d);
                }
                comps.push(c.mapv(|v| v * Complex64::new(0.0, 2.0)));
                comps
            })
            .collect();
        for (m, comps) in per_mode.into_iter().enumerate() {
            for (i, c) in comps.into_iter().enumerate() {
                out[i].index_axis_mut(Axis(0), m).assign(&c);
            }
        }
        let comps = out.into_iter().map(|c| tan_inverse(grid, c)).collect();
        VectorField::new(grid.clone(), Domain::HalfSpace, comps)
    }
}

/// Layer potential `w` for tangential boundary data `G`.
pub fn build_w(g: &BoundaryField) -> Result<VectorField> {
    LayerPotential::new(g.grid()).apply(g)
}

/// The same potential assembled by composing operators: `T2`, a
/// fourth-order vertical difference for `∂_n`, tangential Riesz transforms
/// and `𝓢`. Its error is that of the vertical stencil; kept as a
/// cross-check of [`build_w`].
pub fn build_w_composed(g: &BoundaryField) -> Result<VectorField> {
    check_tangential(g)?;
    let grid = g.grid();
    let n = grid.n();
    let q = KernelQuadrature::new(grid);
    let t2 = crate::potentials::t2_apply_with(&q, g)?;
    let st = VerticalStencil::first(grid.vertical());
    let d: Vec<Array3<f64>> = (0..n - 1).map(|a| st.apply(t2.comp(a))).collect();
    let mut f = Array3::zeros(d[0].dim());
    for (a, da) in d.iter().enumerate() {
        f += &d_tan(grid, da, a);
    }
    let f = ScalarField::new(grid.clone(), Domain::HalfSpace, f)?;
    let s = s_operator(&f)?;
    let ds = dn_s_operator(&f)?;
    let mut comps: Vec<Array3<f64>> = (0..n - 1)
        .map(|a| &d[a] * -2.0 + &(d_tan(grid, s.data(), a) * 4.0))
        .collect();
    let mut wn = ds.data() * 4.0;
    for (a, da) in d.iter().enumerate() {
        wn -= &(riesz_tan(grid, da, a) * 2.0);
    }
    comps.push(wn);
    VectorField::new(grid.clone(), Domain::HalfSpace, comps)
}

/// `∂_n T2` of the tangential data, exposed for estimate studies.
pub fn layer_normal_derivative(q: &KernelQuadrature, g: &BoundaryField) -> Result<VectorField> {
    dn_t2_apply_with(q, g)
}
