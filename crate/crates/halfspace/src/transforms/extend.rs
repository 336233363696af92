//! Extensions to the whole space and traces on the wall.

use ndarray::{s, Array3, Axis};

use super::fd::VerticalStencil;
use super::ops::{divergence_half, gradient_scale_half};
use crate::core::{lq_array, BoundaryField, Domain, HalfSpaceGrid, TensorField, VectorField};
use crate::error::{Error, Result};

/// Relative divergence accepted on top of the vertical stencil error.
pub const DIV_TOL: f64 = 1e-8;

/// Result of [`extend_solenoidal`].
#[derive(Clone, Debug)]
pub struct Extension {
    pub field: VectorField,
    /// Relative half-space divergence of the input.
    pub divergence: f64,
    /// Largest jump of the normal component across the wall, `2 max|h_n(x',0)|`.
    pub jump: f64,
    pub warning: Option<String>,
}

fn reflect(grid: &HalfSpaceGrid, a: &Array3<f64>, sign: f64) -> Array3<f64> {
    let nv = grid.n_vert();
    let (m, _, nt) = a.dim();
    let mut out = Array3::zeros((m, 2 * nv - 1, nt));
    out.slice_mut(s![.., nv - 1.., ..]).assign(a);
    for i in 1..nv {
        let src = a.index_axis(Axis(1), i).mapv(|v| sign * v);
        out.index_axis_mut(Axis(1), nv - 1 - i).assign(&src);
    }
    out
}

/// Relative divergence of a half-space field and the threshold it must meet:
/// [`DIV_TOL`] plus the gap between fourth- and second-order vertical
/// derivatives of `h_n`, which bounds the stencil's own truncation error.
pub fn divergence_check(h: &VectorField) -> Result<(f64, f64)> {
    let g = h.grid();
    let scale = gradient_scale_half(h);
    if scale == 0.0 {
        return Ok((0.0, DIV_TOL));
    }
    let div = divergence_half(h)?.lq_norm(2.0) / scale;
    let hn = h.comp(g.n() - 1);
    let d4 = VerticalStencil::first(g.vertical()).apply(hn);
    let d2 = VerticalStencil::new(g.vertical(), 1, 3).apply(hn);
    let est = lq_array(g, Domain::HalfSpace, &(&d4 - &d2).view(), 2.0) / scale;
    Ok((div, DIV_TOL + est))
}

/// Reflection extension: tangential components even in `x_n`, the normal
/// component odd. A nonzero wall value of `h_n` makes the extension jump;
/// this is reported as a warning, not an error.
pub fn extend_solenoidal(h: &VectorField) -> Result<Extension> {
    if h.domain() != Domain::HalfSpace {
        return Err(Error::Domain("solenoidal extension needs a half-space field".into()));
    }
    let g = h.grid();
    let n = g.n();
    let (div, tol) = divergence_check(h)?;
    if div > tol {
        return Err(Error::NotSolenoidal(div));
    }
    let comps = (0..n)
        .map(|c| reflect(g, h.comp(c), if c == n - 1 { -1.0 } else { 1.0 }))
        .collect();
    let jump = 2.0
        * h.comp(n - 1)
            .index_axis(Axis(1), 0)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
    let warning = (jump > 0.0).then(|| {
        format!("normal component does not vanish on the wall; odd reflection jumps by up to {jump:.3e}")
    });
    Ok(Extension {
        field: VectorField::new(g.clone(), Domain::WholeSpace, comps)?,
        divergence: div,
        jump,
        warning,
    })
}

fn zero_below(grid: &HalfSpaceGrid, a: &Array3<f64>) -> Array3<f64> {
    let nv = grid.n_vert();
    let (m, _, nt) = a.dim();
    let mut out = Array3::zeros((m, 2 * nv - 1, nt));
    out.slice_mut(s![.., nv - 1.., ..]).assign(a);
    out
}

/// Zero extension of a half-space tensor field to `x_n < 0`.
pub fn extend_zero(f: &TensorField) -> Result<TensorField> {
    if f.domain() != Domain::HalfSpace {
        return Err(Error::Domain("zero extension needs a half-space field".into()));
    }
    let g = f.grid();
    let n = g.n();
    let comps = (0..n)
        .map(|k| (0..n).map(|i| zero_below(g, f.comp(k, i))).collect())
        .collect();
    TensorField::new(g.clone(), Domain::WholeSpace, comps)
}

/// Zero extension of a half-space vector field.
pub fn extend_zero_vector(u: &VectorField) -> Result<VectorField> {
    if u.domain() != Domain::HalfSpace {
        return Err(Error::Domain("zero extension needs a half-space field".into()));
    }
    let g = u.grid();
    VectorField::new(
        g.clone(),
        Domain::WholeSpace,
        u.comps().iter().map(|c| zero_below(g, c)).collect(),
    )
}

/// Samples on the wall node `x_n = 0`.
pub fn trace_boundary(f: &VectorField) -> Result<BoundaryField> {
    let g = f.grid();
    let j = match f.domain() {
        Domain::HalfSpace => {
            if g.vertical()[0] != 0.0 {
                return Err(Error::Grid("first vertical node is not on the wall".into()));
            }
            0
        }
        Domain::WholeSpace => g.n_vert() - 1,
        Domain::BoundaryPlane => 0,
    };
    BoundaryField::new(
        g.clone(),
        f.comps().iter().map(|c| c.index_axis(Axis(1), j).to_owned()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::ops::spectral_divergence;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::uniform(2, 16, 6.0, 97, 1.0, 2).unwrap()
    }

    #[test]
    fn zero_in_zero_out() {
        let g = grid();
        let e = extend_solenoidal(&VectorField::zeros(&g, Domain::HalfSpace)).unwrap();
        assert_eq!(e.field.max_abs(), 0.0);
        assert!(e.warning.is_none());
    }

    #[test]
    fn reflected_stream_field_stays_solenoidal() {
        let g = grid();
        // ψ = sin x_1 · x_2 e^{−x_2²} is odd in x_2, so h = ∇^⊥ψ reflects smoothly.
        let h = VectorField::from_fn(&g, Domain::HalfSpace, |x, _| {
            let (z, e) = (x[1], (-x[1] * x[1]).exp());
            [x[0].sin() * (1.0 - 2.0 * z * z) * e, -x[0].cos() * z * e, 0.0]
        });
        let e = extend_solenoidal(&h).unwrap();
        assert!(e.warning.is_none());
        let div = spectral_divergence(&e.field).unwrap();
        let rel = div.lq_norm(2.0) / e.field.lq_norm(2.0);
        assert!(rel < 1e-12, "{rel}");
        assert_eq!(e.field.restrict_half().unwrap(), h);
        let tr = trace_boundary(&e.field).unwrap();
        assert_eq!(tr.comp(0), &h.comp(0).index_axis(Axis(1), 0).to_owned());
    }

    #[test]
    fn jump_is_twice_the_wall_value() {
        let g = grid();
        // ψ = sin x_1 e^{−x_2²} gives h_2 = −cos x_1 on the wall.
        let h = VectorField::from_fn(&g, Domain::HalfSpace, |x, _| {
            let e = (-x[1] * x[1]).exp();
            [-2.0 * x[1] * x[0].sin() * e, -x[0].cos() * e, 0.0]
        });
        let e = extend_solenoidal(&h).unwrap();
        assert!(e.warning.is_some());
        assert!((e.jump - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_compressible_field() {
        let g = grid();
        let h = VectorField::from_fn(&g, Domain::HalfSpace, |x, _| [x[0].sin() * (-x[1] * x[1]).exp(), 0.0, 0.0]);
        assert!(matches!(extend_solenoidal(&h), Err(Error::NotSolenoidal(_))));
    }

    #[test]
    fn zero_extension_keeps_norm() {
        let g = grid();
        let f = TensorField::from_fn(&g, Domain::HalfSpace, |x, t| {
            let e = (-x[1]).exp() * (1.0 + t);
            [[e, 0.0, 0.0], [0.5 * e, x[0].cos() * e, 0.0], [0.0; 3]]
        });
        let z = extend_zero(&f).unwrap();
        // Trapezoid weight at the wall doubles on the whole axis, so compare a field vanishing there.
        let f0 = TensorField::from_fn(&g, Domain::HalfSpace, |x, _| {
            let e = x[1] * (-x[1]).exp();
            [[e, 0.0, 0.0], [0.0, e, 0.0], [0.0; 3]]
        });
        let z0 = extend_zero(&f0).unwrap();
        assert!((z0.lq_norm(3.0) - f0.lq_norm(3.0)).abs() < 1e-12 * f0.lq_norm(3.0));
        assert_eq!(z.comp(1, 1).index_axis(Axis(1), 0).iter().fold(0.0f64, |m, v| m.max(v.abs())), 0.0);
    }
}
