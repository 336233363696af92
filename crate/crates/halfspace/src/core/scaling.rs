use super::field::{BoundaryField, TensorField, VectorField};
use crate::error::{Error, Result};

/// Parabolic rescaling `h_λ(x) = λh(λx)`, `g_λ(x,t) = λg(λx, λ²t)`.
///
/// The rescaled samples live on `grid.scaled(λ)`: node `x/λ` of the new
/// grid carries `λ` times the value at node `x` of the old one. No
/// resampling is needed, so the map is exact and composes exactly.
pub fn parabolic_scale(h: &VectorField, g: &BoundaryField, lambda: f64) -> Result<(VectorField, BoundaryField)> {
    if h.grid() != g.grid() {
        return Err(Error::Shape("initial and boundary data live on different grids".into()));
    }
    Ok((scale_vector(h, lambda)?, scale_boundary(g, lambda)?))
}

/// `u_λ(x,t) = λu(λx, λ²t)`.
pub fn scale_vector(u: &VectorField, lambda: f64) -> Result<VectorField> {
    let grid = u.grid().scaled(lambda)?;
    VectorField::new(grid, u.domain(), u.comps().iter().map(|c| c * lambda).collect())
}

pub fn scale_boundary(g: &BoundaryField, lambda: f64) -> Result<BoundaryField> {
    let grid = g.grid().scaled(lambda)?;
    BoundaryField::new(grid, g.comps().iter().map(|c| c * lambda).collect())
}

/// Force potentials scale like `u ⊗ u`: `𝓕_λ(x,t) = λ²𝓕(λx, λ²t)`.
pub fn scale_tensor(f: &TensorField, lambda: f64) -> Result<TensorField> {
    let grid = f.grid().scaled(lambda)?;
    let n = grid.n();
    let comps = (0..n)
        .map(|k| (0..n).map(|i| f.comp(k, i) * (lambda * lambda)).collect())
        .collect();
    TensorField::new(grid, f.domain(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Domain, HalfSpaceGrid};

    fn bump(z: f64) -> f64 {
        (-z * z).exp()
    }

    #[test]
    fn identity_at_one() {
        let g = HalfSpaceGrid::uniform(2, 8, 4.0, 9, 1.0, 4).unwrap();
        let h = VectorField::stationary(&g, Domain::HalfSpace, |x| [x[0].sin() * bump(x[1]), 0.0, 0.0]);
        let b = BoundaryField::from_fn(&g, 2, |x, t| [x[0].cos() * t, 0.0, 0.0]);
        let (hs, bs) = parabolic_scale(&h, &b, 1.0).unwrap();
        assert_eq!(hs, h);
        assert_eq!(bs, b);
        assert!(parabolic_scale(&h, &b, 0.0).is_err());
    }

    #[test]
    fn matches_direct_formula() {
        let g = HalfSpaceGrid::uniform(2, 8, 4.0, 9, 1.0, 4).unwrap();
        let f = |x: &[f64]| [x[0].sin() * bump(x[1]), 0.0, 0.0];
        let h = VectorField::stationary(&g, Domain::HalfSpace, f);
        let hs = scale_vector(&h, 2.0).unwrap();
        let direct = VectorField::stationary(hs.grid(), Domain::HalfSpace, |x| {
            [2.0 * (2.0 * x[0]).sin() * bump(2.0 * x[1]), 0.0, 0.0]
        });
        let err = hs.sub(&direct).unwrap().max_abs();
        assert!(err < 1e-14, "{err}");
    }

    #[test]
    fn composition() {
        let g = HalfSpaceGrid::uniform(3, 4, 2.0, 5, 1.0, 3).unwrap();
        let b = BoundaryField::from_fn(&g, 3, |x, t| [x[0].cos() + t, x[1].sin(), 0.5]);
        let two = scale_boundary(&scale_boundary(&b, 2.0).unwrap(), 0.25).unwrap();
        let one = scale_boundary(&b, 0.5).unwrap();
        assert!(two.sub(&one).unwrap().max_abs() < 1e-14);
        let lhs = two.grid();
        let rhs = one.grid();
        assert!((lhs.period() - rhs.period()).abs() < 1e-13);
        assert!((lhs.t_final() - rhs.t_final()).abs() < 1e-13);
    }
}
