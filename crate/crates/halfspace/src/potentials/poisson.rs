use ndarray::{Array2, Array3};
use num_complex::Complex64;

use super::modes::RadialModes;
use crate::core::{BoundaryField, Domain, HalfSpaceGrid, ScalarField};
use crate::error::{Error, Result};
use crate::transforms::fft::{tan_forward2, tan_inverse};

/// Harmonic extension `P_{x_n}f` of `(tangential, time)` samples, symbol `e^{-|ξ'|x_n}`.
pub(crate) fn poisson_array(grid: &HalfSpaceGrid, f: &Array2<f64>) -> Array3<f64> {
    let modes = RadialModes::new(grid);
    let fh = tan_forward2(grid, f);
    let z = grid.vertical();
    let (m, nt) = fh.dim();
    let mut out = Array3::<Complex64>::zeros((m, z.len(), nt));
    for idx in 0..m {
        let k = modes.k(idx);
        for (j, &zj) in z.iter().enumerate() {
            let e = (-k * zj).exp();
            for t in 0..nt {
                out[[idx, j, t]] = fh[[idx, t]] * e;
            }
        }
    }
    tan_inverse(grid, out)
}

/// Poisson extension of a single-component boundary field into the half space.
pub fn poisson_apply(f: &BoundaryField) -> Result<ScalarField> {
    if f.ncomp() != 1 {
        return Err(Error::Shape(format!(
            "Poisson extension acts on one component, got {}",
            f.ncomp()
        )));
    }
    let g = f.grid();
    ScalarField::new(g.clone(), Domain::HalfSpace, poisson_array(g, f.comp(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Axis;

    #[test]
    fn cosine_decays_exponentially() {
        let g = HalfSpaceGrid::uniform(2, 16, 3.0, 13, 1.0, 2).unwrap();
        let f = BoundaryField::from_fn(&g, 1, |x, _| [x[0].cos(), 0.0, 0.0]);
        let p = poisson_apply(&f).unwrap();
        let e = ScalarField::from_fn(&g, Domain::HalfSpace, |x, _| x[0].cos() * (-x[1]).exp());
        let err = (p.data() - e.data()).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(err < 1e-14);
    }

    #[test]
    fn constants_and_traces() {
        let g = HalfSpaceGrid::uniform(3, 8, 3.0, 5, 1.0, 2).unwrap();
        let c = BoundaryField::from_fn(&g, 1, |_, _| [2.5, 0.0, 0.0]);
        let p = poisson_apply(&c).unwrap();
        assert!(p.data().iter().all(|v| (v - 2.5).abs() < 1e-14));
        let f = BoundaryField::from_fn(&g, 1, |x, t| [(x[0] + 2.0 * x[1]).sin() * (1.0 + t), 0.0, 0.0]);
        let p = poisson_apply(&f).unwrap();
        let wall = p.data().index_axis(Axis(1), 0).to_owned();
        let err = (&wall - f.comp(0)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(err < 1e-14);
    }
}
