use ndarray::Array3;
use num_complex::Complex64;

use super::fft::{full_forward, full_inverse, tan_forward, tan_inverse};
use crate::core::{Domain, HalfSpaceGrid, ScalarField, VectorField};
use crate::error::{Error, Result};

/// Which axes of a [`SpectralField`] are in Fourier space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisState {
    /// Tangential axes only; vertical and time stay physical.
    Tangential,
    /// Tangential and reflected vertical axes (whole-space fields only).
    Full,
}

/// Fourier representation of a field, one complex array per component
/// indexed `(mode, vertical, time)`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: HalfSpaceGrid,
    domain: Domain,
    axes: AxisState,
    comps: Vec<Array3<Complex64>>,
}

impl SpectralField {
    pub fn forward(u: &VectorField, axes: AxisState) -> Result<Self> {
        Self::from_arrays(u.grid(), u.domain(), u.comps(), axes)
    }

    pub fn forward_scalar(f: &ScalarField, axes: AxisState) -> Result<Self> {
        Self::from_arrays(f.grid(), f.domain(), std::slice::from_ref(f.data()), axes)
    }

    fn from_arrays(grid: &HalfSpaceGrid, domain: Domain, arrays: &[Array3<f64>], axes: AxisState) -> Result<Self> {
        let comps = match axes {
            AxisState::Tangential => arrays.iter().map(|a| tan_forward(grid, a)).collect(),
            AxisState::Full => {
                if domain != Domain::WholeSpace {
                    return Err(Error::Domain("full transform needs a whole-space field".into()));
                }
                grid.require_uniform("full spatial transform")?;
                arrays.iter().map(|a| full_forward(grid, a)).collect()
            }
        };
        Ok(Self {
            grid: grid.clone(),
            domain,
            axes,
            comps,
        })
    }

    /// Wraps already transformed component arrays.
    pub(crate) fn from_parts(
        grid: &HalfSpaceGrid,
        domain: Domain,
        axes: AxisState,
        comps: Vec<Array3<Complex64>>,
    ) -> Self {
        Self {
            grid: grid.clone(),
            domain,
            axes,
            comps,
        }
    }

    pub fn grid(&self) -> &HalfSpaceGrid {
        &self.grid
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    pub fn axes(&self) -> AxisState {
        self.axes
    }
    pub fn comp(&self, i: usize) -> &Array3<Complex64> {
        &self.comps[i]
    }
    pub fn comps(&self) -> &[Array3<Complex64>] {
        &self.comps
    }
    pub(crate) fn into_comps(self) -> Vec<Array3<Complex64>> {
        self.comps
    }

    fn inverse_arrays(self) -> Vec<Array3<f64>> {
        let grid = self.grid;
        match self.axes {
            AxisState::Tangential => self.comps.into_iter().map(|c| tan_inverse(&grid, c)).collect(),
            AxisState::Full => self.comps.into_iter().map(|c| full_inverse(&grid, c)).collect(),
        }
    }

    pub fn inverse(self) -> Result<VectorField> {
        let (grid, domain) = (self.grid.clone(), self.domain);
        VectorField::new(grid, domain, self.inverse_arrays())
    }

    pub fn inverse_scalar(self) -> Result<ScalarField> {
        if self.comps.len() != 1 {
            return Err(Error::Shape("scalar inverse needs exactly one component".into()));
        }
        let (grid, domain) = (self.grid.clone(), self.domain);
        let a = self.inverse_arrays().pop().unwrap();
        ScalarField::new(grid, domain, a)
    }

    /// Largest violation of `f̂(−ξ) = conj f̂(ξ)` over the tangential modes
    /// (and vertical modes on full transforms).
    pub fn hermitian_defect(&self) -> f64 {
        let nn = self.grid.n_tan();
        let n = self.grid.n();
        let neg = |i: usize, len: usize| (len - i) % len;
        let mut worst = 0.0f64;
        for c in &self.comps {
            let (m, nz, nt) = c.dim();
            for idx in 0..m {
                let midx = if n == 2 {
                    neg(idx, nn)
                } else {
                    neg(idx / nn, nn) * nn + neg(idx % nn, nn)
                };
                for v in 0..nz {
                    let mv = match self.axes {
                        AxisState::Tangential => v,
                        AxisState::Full => neg(v, nz),
                    };
                    for k in 0..nt {
                        let d = (c[[idx, v, k]] - c[[midx, mv, k]].conj()).norm();
                        worst = worst.max(d);
                    }
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_symmetry() {
        let g = HalfSpaceGrid::uniform(2, 8, 3.0, 7, 1.0, 3).unwrap();
        let u = VectorField::from_fn(&g, Domain::WholeSpace, |x, t| {
            let b = (-x[1] * x[1]).exp();
            [x[0].sin() * b * (1.0 + t), (2.0 * x[0]).cos() * b * x[1], 0.0]
        });
        let s = SpectralField::forward(&u, AxisState::Full).unwrap();
        assert!(s.hermitian_defect() < 1e-12);
        let back = s.inverse().unwrap();
        // The periodic copy of the first vertical node differs from the sampled last node.
        let nz = 2 * g.n_vert() - 2;
        for c in 0..2 {
            let a = u.comp(c);
            let b = back.comp(c);
            for ((i, j, k), v) in a.indexed_iter() {
                if j < nz {
                    assert!((v - b[[i, j, k]]).abs() < 1e-12 * (1.0 + v.abs()));
                }
            }
        }
        let t = SpectralField::forward(&u, AxisState::Tangential).unwrap();
        let back = t.inverse().unwrap();
        assert!(back.sub(&u).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn full_transform_rejects_half_space() {
        let g = HalfSpaceGrid::uniform(2, 8, 3.0, 7, 1.0, 3).unwrap();
        let u = VectorField::zeros(&g, Domain::HalfSpace);
        assert!(SpectralField::forward(&u, AxisState::Full).is_err());
    }
}
