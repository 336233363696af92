//! Littlewood–Paley decomposition in space.

use ndarray::{s, Array2, Array3, Axis};
use num_complex::Complex64;

use super::partition::DyadicPartition;
use crate::core::{BoundaryField, Domain, HalfSpaceGrid, ScalarField, VectorField};
use crate::error::{Error, Result};
use crate::transforms::fft::{full_forward, full_inverse, tan_forward, tan_inverse, FullWaves, TanWaves};

/// Spatial support of a field as seen by the norm engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// The boundary torus `ℝ^{n−1}_per`.
    Boundary,
    /// The half space; spectral norms use the even reflection.
    HalfSpace,
    /// The reflected box `ℝ^{n−1}_per × [−X, X]`.
    WholeSpace,
}

/// Anything the norm engine can measure: components sampled as
/// `(tangential, vertical, time)` arrays.
pub trait SpaceTimeField {
    fn grid(&self) -> &HalfSpaceGrid;
    fn geometry(&self) -> Geometry;
    fn arrays(&self) -> Vec<Array3<f64>>;
}

fn geometry_of(d: Domain) -> Geometry {
    match d {
        Domain::HalfSpace => Geometry::HalfSpace,
        Domain::WholeSpace => Geometry::WholeSpace,
        Domain::BoundaryPlane => Geometry::Boundary,
    }
}

impl SpaceTimeField for BoundaryField {
    fn grid(&self) -> &HalfSpaceGrid {
        BoundaryField::grid(self)
    }
    fn geometry(&self) -> Geometry {
        Geometry::Boundary
    }
    fn arrays(&self) -> Vec<Array3<f64>> {
        self.comps().iter().map(|c| c.clone().insert_axis(Axis(1))).collect()
    }
}

impl SpaceTimeField for VectorField {
    fn grid(&self) -> &HalfSpaceGrid {
        VectorField::grid(self)
    }
    fn geometry(&self) -> Geometry {
        geometry_of(self.domain())
    }
    fn arrays(&self) -> Vec<Array3<f64>> {
        self.comps().to_vec()
    }
}

impl SpaceTimeField for ScalarField {
    fn grid(&self) -> &HalfSpaceGrid {
        ScalarField::grid(self)
    }
    fn geometry(&self) -> Geometry {
        geometry_of(self.domain())
    }
    fn arrays(&self) -> Vec<Array3<f64>> {
        vec![self.data().clone()]
    }
}

/// Even reflection of a half-space array onto the whole axis.
pub(crate) fn reflect_even(a: &Array3<f64>) -> Array3<f64> {
    let (m, nv, nt) = a.dim();
    let mut out = Array3::zeros((m, 2 * nv - 1, nt));
    out.slice_mut(s![.., nv - 1.., ..]).assign(a);
    for i in 1..nv {
        out.index_axis_mut(Axis(1), nv - 1 - i).assign(&a.index_axis(Axis(1), i));
    }
    out
}

/// Spectral layout of one geometry: frequency magnitudes per `(mode, vertical)`
/// and the spatial quadrature weight per vertical index of the physical samples.
pub(crate) struct Layout {
    pub geometry: Geometry,
    pub mags: Array2<f64>,
    pub weights: Vec<f64>,
}

impl Layout {
    pub fn new(grid: &HalfSpaceGrid, geometry: Geometry) -> Result<Self> {
        let area = grid.cell_area();
        match geometry {
            Geometry::Boundary => {
                let w = TanWaves::new(grid);
                let mags = Array2::from_shape_fn((grid.tan_len(), 1), |(m, _)| w.norm(m));
                Ok(Self { geometry, mags, weights: vec![area] })
            }
            Geometry::HalfSpace | Geometry::WholeSpace => {
                grid.require_uniform("spectral Besov norms")?;
                let w = FullWaves::new(grid);
                let nz = 2 * grid.n_vert() - 2;
                let mags = Array2::from_shape_fn((grid.tan_len(), nz), |(m, v)| w.norm2(m, v).sqrt());
                // The reflected box counts each half-space point twice.
                let half = if geometry == Geometry::HalfSpace { 0.5 } else { 1.0 };
                Ok(Self { geometry, mags, weights: vec![half * area * grid.dz(); nz] })
            }
        }
    }

    pub fn partition(&self) -> Result<DyadicPartition> {
        let (lo, hi) = self
            .mags
            .iter()
            .filter(|k| **k > 0.0)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &k| (lo.min(k), hi.max(k)));
        if hi == 0.0 {
            return Err(Error::Argument("no nonzero frequencies on this grid".into()));
        }
        DyadicPartition::covering(lo, hi)
    }

    pub fn forward(&self, grid: &HalfSpaceGrid, a: &Array3<f64>) -> Array3<Complex64> {
        match self.geometry {
            Geometry::Boundary => tan_forward(grid, a),
            Geometry::HalfSpace => full_forward(grid, &reflect_even(a)),
            Geometry::WholeSpace => full_forward(grid, a),
        }
    }

    /// Inverse transform onto the sample layout used by `weights`.
    pub fn inverse(&self, grid: &HalfSpaceGrid, c: Array3<Complex64>) -> Array3<f64> {
        match self.geometry {
            Geometry::Boundary => tan_inverse(grid, c),
            _ => {
                let nz = c.len_of(Axis(1));
                full_inverse(grid, c).slice_move(s![.., ..nz, ..])
            }
        }
    }
}

pub(crate) fn powq(x: f64, q: f64) -> f64 {
    if q == 2.0 {
        x * x
    } else {
        x.abs().powf(q)
    }
}

/// Dyadic blocks `Δ_j f` of every component, in the sample layout.
pub(crate) struct Blocks {
    pub layout: Layout,
    pub blocks: Vec<(i32, Vec<Array3<f64>>)>,
}

pub(crate) fn decompose(
    grid: &HalfSpaceGrid,
    geometry: Geometry,
    arrays: &[Array3<f64>],
    part: Option<&DyadicPartition>,
) -> Result<Blocks> {
    if arrays.is_empty() || arrays[0].is_empty() {
        return Err(Error::Argument("empty field".into()));
    }
    let layout = Layout::new(grid, geometry)?;
    let part = match part {
        Some(p) => p.clone(),
        None => layout.partition()?,
    };
    let hats: Vec<Array3<Complex64>> = arrays.iter().map(|a| layout.forward(grid, a)).collect();
    let mut blocks = Vec::with_capacity(part.len());
    for j in part.blocks() {
        let win = layout.mags.mapv(|k| part.window(j, k));
        if win.iter().all(|w| *w == 0.0) {
            continue;
        }
        let comps = hats
            .iter()
            .map(|h| {
                let mut c = h.clone();
                for ((m, v, _), x) in c.indexed_iter_mut() {
                    *x *= win[[m, v]];
                }
                layout.inverse(grid, c)
            })
            .collect();
        blocks.push((j, comps));
    }
    Ok(Blocks { layout, blocks })
}

/// `Σ_j 2^{jsq} ‖Δ_j f(t_k)‖_q^q` per time node of the given arrays.
pub(crate) fn block_sums(
    grid: &HalfSpaceGrid,
    geometry: Geometry,
    arrays: &[Array3<f64>],
    s: f64,
    q: f64,
    part: Option<&DyadicPartition>,
) -> Result<Vec<f64>> {
    let b = decompose(grid, geometry, arrays, part)?;
    let nt = arrays[0].len_of(Axis(2));
    let mut out = vec![0.0; nt];
    for (j, comps) in &b.blocks {
        let wj = (2f64).powf(*j as f64 * s * q);
        for c in comps {
            for ((_, v, k), x) in c.indexed_iter() {
                out[k] += wj * b.layout.weights[v] * powq(*x, q);
            }
        }
    }
    Ok(out)
}

pub(crate) fn check_exponents(s: f64, q: f64) -> Result<()> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::Argument(format!("integrability exponent must lie in (1, inf), got {q}")));
    }
    if !s.is_finite() || s.abs() > 8.0 {
        return Err(Error::Argument(format!("smoothness {s} outside the resolvable band")));
    }
    Ok(())
}

/// `‖f‖_{L^q(0,T; Ḃ^s_q)}` with `Ḃ^s_q = Ḃ^s_{q,q}` realized by the dyadic
/// windows; the zero frequency is excluded (homogeneous norm).
pub fn lp_norm<F: SpaceTimeField>(f: &F, s: f64, q: f64, part: Option<&DyadicPartition>) -> Result<f64> {
    check_exponents(s, q)?;
    let sums = block_sums(f.grid(), f.geometry(), &f.arrays(), s, q, part)?;
    let wt = f.grid().time_weights();
    Ok(sums.iter().zip(&wt).map(|(a, w)| a * w).sum::<f64>().powf(1.0 / q))
}

/// `‖f(·, t_k)‖_{Ḃ^s_q}` at one time node.
pub fn lp_norm_at<F: SpaceTimeField>(f: &F, k: usize, s: f64, q: f64, part: Option<&DyadicPartition>) -> Result<f64> {
    check_exponents(s, q)?;
    let g = f.grid();
    if k >= g.nt() {
        return Err(Error::Argument(format!("time index {k} out of range")));
    }
    let arrays: Vec<Array3<f64>> = f.arrays().iter().map(|a| a.slice(s![.., .., k..k + 1]).to_owned()).collect();
    let sums = block_sums(g, f.geometry(), &arrays, s, q, part)?;
    Ok(sums[0].powf(1.0 / q))
}

/// Per-time-node `‖f(·, t_k)‖_{Ḃ^s_q}`.
pub fn lp_norm_profile<F: SpaceTimeField>(f: &F, s: f64, q: f64, part: Option<&DyadicPartition>) -> Result<Vec<f64>> {
    check_exponents(s, q)?;
    let sums = block_sums(f.grid(), f.geometry(), &f.arrays(), s, q, part)?;
    Ok(sums.into_iter().map(|a| a.powf(1.0 / q)).collect())
}

/// `‖f(·, t_k)‖_{Ḃ^s_q(ℝ^{n−1})}` for `−1 + 1/q < s < 0`.
pub fn negative_order_norm(f: &BoundaryField, k: usize, s: f64, q: f64) -> Result<f64> {
    if !(s < 0.0 && s > -1.0 + 1.0 / q) {
        return Err(Error::Argument(format!(
            "negative order {s} outside ({}, 0) for q = {q}",
            -1.0 + 1.0 / q
        )));
    }
    lp_norm_at(f, k, s, q, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Grading;
    use std::f64::consts::PI;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::new(2, 2.0 * PI, 16, PI, 17, Grading::Uniform, 1.0, 4).unwrap()
    }

    #[test]
    fn single_mode_one_block() {
        // |ξ| = 4 sits at the centre of block 2.
        let g = grid();
        let f = BoundaryField::from_fn(&g, 1, |x, _| [(4.0 * x[0]).cos(), 0.0, 0.0]);
        let s = 0.7;
        let v = lp_norm_at(&f, 0, s, 2.0, None).unwrap();
        let l2 = (PI as f64).sqrt();
        assert!((v - 2f64.powf(2.0 * s) * l2).abs() < 1e-12, "{v}");
    }

    #[test]
    fn between_blocks_splits_by_window() {
        // |ξ| = 3: log₂3 lies between blocks 1 and 2.
        let g = grid();
        let f = BoundaryField::from_fn(&g, 1, |x, _| [(3.0 * x[0]).sin(), 0.0, 0.0]);
        let (s, q) = (0.5, 3.0);
        let v = lp_norm_at(&f, 0, s, q, None).unwrap();
        let x = 3f64.log2();
        let lq = |c: f64| -> f64 {
            // ‖c sin 3x‖_q^q on [0, 2π] by the grid rule, exact for this trigonometric power.
            let n = 16;
            (0..n).map(|i| (c * (3.0 * 2.0 * PI * i as f64 / n as f64).sin()).abs().powf(q)).sum::<f64>() * 2.0 * PI / n as f64
        };
        let expect: f64 = [1, 2]
            .iter()
            .map(|&j| 2f64.powf(j as f64 * s * q) * lq(super::super::partition::chi(x - j as f64)))
            .sum();
        assert!((v - expect.powf(1.0 / q)).abs() < 1e-12 * v);
    }

    #[test]
    fn negative_window_enforced() {
        let g = grid();
        let f = BoundaryField::zeros(&g, 1);
        assert!(negative_order_norm(&f, 0, -0.8, 2.0).is_err());
        assert!(negative_order_norm(&f, 0, 0.1, 2.0).is_err());
        assert_eq!(negative_order_norm(&f, 0, -0.3, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn single_mode_at_two_gets_weight() {
        let g = grid();
        let f = BoundaryField::from_fn(&g, 1, |x, _| [(2.0 * x[0]).cos(), 0.0, 0.0]);
        let s = -0.25;
        let v = negative_order_norm(&f, 0, s, 2.0).unwrap();
        assert!((v - 2f64.powf(s) * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn half_space_reflection_matches_whole_even_field() {
        let g = grid();
        let h = VectorField::from_fn(&g, Domain::HalfSpace, |x, _| [x[0].cos() * (2.0 * x[1]).cos(), 0.0, 0.0]);
        let w = VectorField::from_fn(&g, Domain::WholeSpace, |x, _| [x[0].cos() * (2.0 * x[1]).cos(), 0.0, 0.0]);
        let a = lp_norm(&h, 0.4, 2.5, None).unwrap();
        let b = lp_norm(&w, 0.4, 2.5, None).unwrap();
        assert!((a * 2f64.powf(1.0 / 2.5) - b).abs() < 1e-12 * b);
    }

    #[test]
    fn homogeneity() {
        let g = grid();
        let f = BoundaryField::from_fn(&g, 2, |x, t| [x[0].sin() * t + (3.0 * x[0]).cos(), (5.0 * x[0]).sin(), 0.0]);
        let a = lp_norm(&f, 0.3, 1.7, None).unwrap();
        let b = lp_norm(&f.scaled(-3.0), 0.3, 1.7, None).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
    }
}
