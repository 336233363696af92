//! `𝓢f(x) = ∫_0^{x_n} ∫ N(x'−y', x_n−y_n) f(y) dy' dy_n`.

use ndarray::{ArrayView1, Axis};
use num_complex::Complex64;
use rayon::prelude::*;

use super::modes::RadialModes;
use crate::core::{Domain, ScalarField};
use crate::error::{Error, Result};
use crate::special::{phi1, psi_lin};
use crate::transforms::fft::{tan_forward, tan_inverse};

/// `∫_0^{z_j} e^{-k(z_j−y)} f(y) dy` at every node, exact for `f` linear
/// between nodes.
pub(crate) fn exp_cumulative(z: &[f64], k: f64, f: ArrayView1<Complex64>) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); z.len()];
    for j in 1..z.len() {
        let h = z[j] - z[j - 1];
        let x = -k * h;
        let p = psi_lin(x);
        let seg = f[j] * (h * (phi1(x) - p)) + f[j - 1] * (h * p);
        out[j] = out[j - 1] * x.exp() + seg;
    }
    out
}

/// `∫_0^{z_j} (z_j − y)/2 · f(y) dy`, exact for `f` linear between nodes.
fn zero_mode(z: &[f64], f: ArrayView1<Complex64>) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); z.len()];
    let mut i0 = Complex64::new(0.0, 0.0);
    let mut i1 = Complex64::new(0.0, 0.0);
    for j in 1..z.len() {
        let (a, b) = (z[j - 1], z[j]);
        let h = b - a;
        i0 += (f[j - 1] + f[j]) * (0.5 * h);
        i1 += (f[j - 1] * (2.0 * a + b) + f[j] * (a + 2.0 * b)) * (h / 6.0);
        out[j] = (i0 * b - i1) * 0.5;
    }
    out
}

/// Per-mode `𝓢` with symbol `N̂(ξ', z) = −e^{-|ξ'||z|}/(2|ξ'|)` (zero mode `|z|/2`).
pub(crate) fn s_mode(z: &[f64], k: f64, f: ArrayView1<Complex64>) -> Vec<Complex64> {
    if k == 0.0 {
        zero_mode(z, f)
    } else {
        exp_cumulative(z, k, f).into_iter().map(|v| v * (-0.5 / k)).collect()
    }
}

/// Applies `𝓢` to a half-space scalar at every time node.
pub fn s_operator(f: &ScalarField) -> Result<ScalarField> {
    if f.domain() != Domain::HalfSpace {
        return Err(Error::Domain("S acts on half-space fields".into()));
    }
    let g = f.grid();
    let modes = RadialModes::new(g);
    let z = g.vertical();
    let mut fh = tan_forward(g, f.data());
    fh.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(m, mut plane)| {
        let k = modes.k(m);
        for mut col in plane.axis_iter_mut(Axis(1)) {
            let s = s_mode(z, k, col.view());
            for (c, v) in col.iter_mut().zip(s) {
                *c = v;
            }
        }
    });
    ScalarField::new(g.clone(), Domain::HalfSpace, tan_inverse(g, fh))
}

/// Normal derivative of `𝓢f`: `∫_0^{x_n} ∂_n N̂ f dy_n + N̂(0) f`, with
/// `∂_n N̂(z) = ½e^{-kz}`; the second term vanishes for the zero mode.
pub fn dn_s_operator(f: &ScalarField) -> Result<ScalarField> {
    if f.domain() != Domain::HalfSpace {
        return Err(Error::Domain("S acts on half-space fields".into()));
    }
    let g = f.grid();
    let modes = RadialModes::new(g);
    let z = g.vertical();
    let mut fh = tan_forward(g, f.data());
    fh.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(m, mut plane)| {
        let k = modes.k(m);
        for mut col in plane.axis_iter_mut(Axis(1)) {
            let e = exp_cumulative(z, k, col.view());
            let s: Vec<Complex64> = if k == 0.0 {
                e.into_iter().map(|v| v * 0.5).collect()
            } else {
                e.into_iter().zip(col.iter()).map(|(v, fv)| v * 0.5 - fv * (0.5 / k)).collect()
            };
            for (c, v) in col.iter_mut().zip(s) {
                *c = v;
            }
        }
    });
    ScalarField::new(g.clone(), Domain::HalfSpace, tan_inverse(g, fh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::HalfSpaceGrid;
    use crate::transforms::VerticalStencil;

    #[test]
    fn vanishes_at_wall() {
        let g = HalfSpaceGrid::uniform(2, 16, 3.0, 31, 1.0, 2).unwrap();
        let f = ScalarField::from_fn(&g, Domain::HalfSpace, |x, t| x[0].cos() * (-x[1]).exp() * (1.0 + t) + 0.3);
        let s = s_operator(&f).unwrap();
        assert!(s.data().index_axis(Axis(1), 0).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn mode_identity_second_derivative() {
        // For one mode, (∂_z² − k²)𝓢f = f/2 − f'/(2k).
        let n = 801;
        let z: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 / (n - 1) as f64).collect();
        let k = 3.0;
        let f: Vec<Complex64> = z.iter().map(|&y| Complex64::new((y * 1.3).sin() + y, 0.0)).collect();
        let s = s_mode(&z, k, ndarray::ArrayView1::from(&f));
        let h = z[1] - z[0];
        let j = 400;
        let d2 = (s[j + 1] - s[j] * 2.0 + s[j - 1]) / (h * h);
        let fp = 1.3 * (z[j] * 1.3).cos() + 1.0;
        let rhs = f[j] * 0.5 - Complex64::new(fp / (2.0 * k), 0.0);
        assert!((d2 - s[j] * (k * k) - rhs).norm() < 1e-4);
    }

    #[test]
    fn normal_derivative_matches_stencil() {
        let g = HalfSpaceGrid::uniform(2, 8, 2.0, 201, 1.0, 2).unwrap();
        let f = ScalarField::from_fn(&g, Domain::HalfSpace, |x, _| x[0].sin() * (x[1] * 2.0).cos() + 1.0);
        let s = s_operator(&f).unwrap();
        let ds = dn_s_operator(&f).unwrap();
        let st = VerticalStencil::first(g.vertical()).apply(s.data());
        let err = (&st - ds.data()).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(err < 1e-4, "{err}");
    }
}
