use ndarray::{s, Array2, Array3, ArrayView2, ArrayView3, Axis, Zip};
use serde::{Deserialize, Serialize};

use super::grid::HalfSpaceGrid;
use crate::error::{Error, Result};

/// Where a field lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Vertical nodes `0..=X`.
    HalfSpace,
    /// Reflected vertical axis `-X..=X`.
    WholeSpace,
    /// Single vertical node at the wall.
    BoundaryPlane,
}

impl Domain {
    pub fn vertical_len(self, grid: &HalfSpaceGrid) -> usize {
        match self {
            Domain::HalfSpace => grid.n_vert(),
            Domain::WholeSpace => 2 * grid.n_vert() - 1,
            Domain::BoundaryPlane => 1,
        }
    }

    pub fn vertical_nodes(self, grid: &HalfSpaceGrid) -> Vec<f64> {
        match self {
            Domain::HalfSpace => grid.vertical().to_vec(),
            Domain::WholeSpace => grid.whole_vertical(),
            Domain::BoundaryPlane => vec![0.0],
        }
    }

    /// Trapezoid weights along the vertical axis. On a uniform whole-space
    /// axis this coincides with the periodic rectangle rule.
    pub fn vertical_weights(self, grid: &HalfSpaceGrid) -> Vec<f64> {
        match self {
            Domain::HalfSpace => grid.vertical_weights(),
            Domain::WholeSpace => super::grid::trapezoid_weights(&grid.whole_vertical()),
            Domain::BoundaryPlane => vec![1.0],
        }
    }
}

pub(crate) fn field_shape(grid: &HalfSpaceGrid, domain: Domain) -> (usize, usize, usize) {
    (grid.tan_len(), domain.vertical_len(grid), grid.nt())
}

/// Spatial point with `n` entries `(x', x_n)`.
pub(crate) fn point(grid: &HalfSpaceGrid, tan: usize, z: f64) -> [f64; 3] {
    let p = grid.tan_point(tan);
    if grid.n() == 2 {
        [p[0], z, 0.0]
    } else {
        [p[0], p[1], z]
    }
}

fn sample<F: Fn(&[f64], f64) -> f64>(grid: &HalfSpaceGrid, domain: Domain, f: F) -> Array3<f64> {
    let (m, nz, nt) = field_shape(grid, domain);
    let z = domain.vertical_nodes(grid);
    let n = grid.n();
    let mut a = Array3::zeros((m, nz, nt));
    for ((i, j, k), v) in a.indexed_iter_mut() {
        let x = point(grid, i, z[j]);
        *v = f(&x[..n], grid.time(k));
    }
    a
}

fn check_shape(grid: &HalfSpaceGrid, domain: Domain, a: &ArrayView3<f64>, what: &str) -> Result<()> {
    let expect = field_shape(grid, domain);
    if a.dim() != expect {
        return Err(Error::Shape(format!("{what}: expected {expect:?}, got {:?}", a.dim())));
    }
    Ok(())
}

/// Weighted `L^q` norm of one space-time array with the domain's quadrature.
pub(crate) fn lq_array(grid: &HalfSpaceGrid, domain: Domain, a: &ArrayView3<f64>, q: f64) -> f64 {
    let wz = domain.vertical_weights(grid);
    let wt = grid.time_weights();
    let area = grid.cell_area();
    let mut acc = 0.0;
    for ((_, j, k), v) in a.indexed_iter() {
        acc += wz[j] * wt[k] * v.abs().powf(q);
    }
    (area * acc).powf(1.0 / q)
}

/// Scalar function on a half-space, whole-space or boundary grid over all time nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: HalfSpaceGrid,
    domain: Domain,
    data: Array3<f64>,
}

impl ScalarField {
    pub fn new(grid: HalfSpaceGrid, domain: Domain, data: Array3<f64>) -> Result<Self> {
        check_shape(&grid, domain, &data.view(), "scalar field")?;
        Ok(Self { grid, domain, data })
    }

    pub fn zeros(grid: &HalfSpaceGrid, domain: Domain) -> Self {
        let data = Array3::zeros(field_shape(grid, domain));
        Self {
            grid: grid.clone(),
            domain,
            data,
        }
    }

    /// Samples `f(x, t)` with `x = (x', x_n)`.
    pub fn from_fn<F: Fn(&[f64], f64) -> f64>(grid: &HalfSpaceGrid, domain: Domain, f: F) -> Self {
        Self {
            grid: grid.clone(),
            domain,
            data: sample(grid, domain, f),
        }
    }

    pub fn grid(&self) -> &HalfSpaceGrid {
        &self.grid
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    pub fn data(&self) -> &Array3<f64> {
        &self.data
    }
    pub fn into_data(self) -> Array3<f64> {
        self.data
    }

    pub fn lq_norm(&self, q: f64) -> f64 {
        lq_array(&self.grid, self.domain, &self.data.view(), q)
    }
}

/// Vector field with `n` components of shape `(tangential, vertical, time)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    grid: HalfSpaceGrid,
    domain: Domain,
    comps: Vec<Array3<f64>>,
}

impl VectorField {
    pub fn new(grid: HalfSpaceGrid, domain: Domain, comps: Vec<Array3<f64>>) -> Result<Self> {
        if comps.len() != grid.n() {
            return Err(Error::Shape(format!(
                "vector field needs {} components, got {}",
                grid.n(),
                comps.len()
            )));
        }
        for c in &comps {
            check_shape(&grid, domain, &c.view(), "vector component")?;
        }
        Ok(Self { grid, domain, comps })
    }

    pub fn zeros(grid: &HalfSpaceGrid, domain: Domain) -> Self {
        let comps = (0..grid.n()).map(|_| Array3::zeros(field_shape(grid, domain))).collect();
        Self {
            grid: grid.clone(),
            domain,
            comps,
        }
    }

    /// Samples `f(x, t)`; only the first `n` returned entries are used.
    pub fn from_fn<F: Fn(&[f64], f64) -> [f64; 3]>(grid: &HalfSpaceGrid, domain: Domain, f: F) -> Self {
        let (m, nz, nt) = field_shape(grid, domain);
        let z = domain.vertical_nodes(grid);
        let n = grid.n();
        let mut comps: Vec<Array3<f64>> = (0..n).map(|_| Array3::zeros((m, nz, nt))).collect();
        for i in 0..m {
            for (j, &zj) in z.iter().enumerate() {
                let x = point(grid, i, zj);
                for k in 0..nt {
                    let v = f(&x[..n], grid.time(k));
                    for (c, comp) in comps.iter_mut().enumerate() {
                        comp[[i, j, k]] = v[c];
                    }
                }
            }
        }
        Self {
            grid: grid.clone(),
            domain,
            comps,
        }
    }

    /// Time-independent field, the same samples at every time node. Initial
    /// data are stored this way and read from the first time node.
    pub fn stationary<F: Fn(&[f64]) -> [f64; 3]>(grid: &HalfSpaceGrid, domain: Domain, f: F) -> Self {
        let (m, nz, nt) = field_shape(grid, domain);
        let z = domain.vertical_nodes(grid);
        let n = grid.n();
        let mut comps: Vec<Array3<f64>> = (0..n).map(|_| Array3::zeros((m, nz, nt))).collect();
        for i in 0..m {
            for (j, &zj) in z.iter().enumerate() {
                let x = point(grid, i, zj);
                let v = f(&x[..n]);
                for (c, comp) in comps.iter_mut().enumerate() {
                    comp.slice_mut(s![i, j, ..]).fill(v[c]);
                }
            }
        }
        Self {
            grid: grid.clone(),
            domain,
            comps,
        }
    }

    pub fn grid(&self) -> &HalfSpaceGrid {
        &self.grid
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    pub fn comp(&self, i: usize) -> &Array3<f64> {
        &self.comps[i]
    }
    pub fn comps(&self) -> &[Array3<f64>] {
        &self.comps
    }
    pub fn into_comps(self) -> Vec<Array3<f64>> {
        self.comps
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::Shape("vector fields live on different grids or domains".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        Ok(Self {
            grid: self.grid.clone(),
            domain: self.domain,
            comps,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect();
        Ok(Self {
            grid: self.grid.clone(),
            domain: self.domain,
            comps,
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            domain: self.domain,
            comps: self.comps.iter().map(|a| a * c).collect(),
        }
    }

    /// Componentwise `L^q` norm over space and time: `(Σ_i ∫∫ |u_i|^q)^{1/q}`.
    pub fn lq_norm(&self, q: f64) -> f64 {
        self.comps
            .iter()
            .map(|c| lq_array(&self.grid, self.domain, &c.view(), q).powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Restriction of a whole-space field to `x_n ≥ 0`.
    pub fn restrict_half(&self) -> Result<Self> {
        if self.domain != Domain::WholeSpace {
            return Err(Error::Domain("restriction needs a whole-space field".into()));
        }
        let nv = self.grid.n_vert();
        let comps = self
            .comps
            .iter()
            .map(|c| c.slice(s![.., nv - 1.., ..]).to_owned())
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            domain: Domain::HalfSpace,
            comps,
        })
    }

    /// Values at one time node, shape `(tangential, vertical)` per component.
    pub fn time_slice(&self, k: usize) -> Vec<Array2<f64>> {
        self.comps.iter().map(|c| c.index_axis(Axis(2), k).to_owned()).collect()
    }
}

/// Second-order tensor field `F_{ki}`; the divergence acts on the first index.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField {
    grid: HalfSpaceGrid,
    domain: Domain,
    comps: Vec<Vec<Array3<f64>>>,
}

impl TensorField {
    pub fn new(grid: HalfSpaceGrid, domain: Domain, comps: Vec<Vec<Array3<f64>>>) -> Result<Self> {
        let n = grid.n();
        if comps.len() != n || comps.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("tensor field needs {n}x{n} components")));
        }
        for c in comps.iter().flatten() {
            check_shape(&grid, domain, &c.view(), "tensor component")?;
        }
        Ok(Self { grid, domain, comps })
    }

    pub fn zeros(grid: &HalfSpaceGrid, domain: Domain) -> Self {
        let n = grid.n();
        let comps = (0..n)
            .map(|_| (0..n).map(|_| Array3::zeros(field_shape(grid, domain))).collect())
            .collect();
        Self {
            grid: grid.clone(),
            domain,
            comps,
        }
    }

    /// Samples `f(x, t)` returning the row-major `n×n` block of a 3×3 array.
    pub fn from_fn<F: Fn(&[f64], f64) -> [[f64; 3]; 3]>(grid: &HalfSpaceGrid, domain: Domain, f: F) -> Self {
        let n = grid.n();
        let mut out = Self::zeros(grid, domain);
        let z = domain.vertical_nodes(grid);
        let (m, _, nt) = field_shape(grid, domain);
        for i in 0..m {
            for (j, &zj) in z.iter().enumerate() {
                let x = point(grid, i, zj);
                for k in 0..nt {
                    let v = f(&x[..n], grid.time(k));
                    for a in 0..n {
                        for b in 0..n {
                            out.comps[a][b][[i, j, k]] = v[a][b];
                        }
                    }
                }
            }
        }
        out
    }

    pub fn grid(&self) -> &HalfSpaceGrid {
        &self.grid
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    /// Component `F_{ki}`.
    pub fn comp(&self, k: usize, i: usize) -> &Array3<f64> {
        &self.comps[k][i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(|c| c.iter().all(|v| *v == 0.0))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            domain: self.domain,
            comps: self
                .comps
                .iter()
                .map(|r| r.iter().map(|a| a * c).collect())
                .collect(),
        }
    }

    pub fn lq_norm(&self, q: f64) -> f64 {
        self.comps
            .iter()
            .flatten()
            .map(|c| lq_array(&self.grid, self.domain, &c.view(), q).powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }
}

/// Functions on the boundary plane over time, up to `n` components of shape
/// `(tangential, time)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryField {
    grid: HalfSpaceGrid,
    comps: Vec<Array2<f64>>,
}

impl BoundaryField {
    pub fn new(grid: HalfSpaceGrid, comps: Vec<Array2<f64>>) -> Result<Self> {
        if comps.is_empty() || comps.len() > grid.n() {
            return Err(Error::Shape(format!(
                "boundary field needs 1..={} components, got {}",
                grid.n(),
                comps.len()
            )));
        }
        let expect = (grid.tan_len(), grid.nt());
        for c in &comps {
            if c.dim() != expect {
                return Err(Error::Shape(format!(
                    "boundary component: expected {expect:?}, got {:?}",
                    c.dim()
                )));
            }
        }
        Ok(Self { grid, comps })
    }

    pub fn zeros(grid: &HalfSpaceGrid, ncomp: usize) -> Self {
        Self {
            grid: grid.clone(),
            comps: (0..ncomp).map(|_| Array2::zeros((grid.tan_len(), grid.nt()))).collect(),
        }
    }

    /// Samples `f(x', t)`; only the first `ncomp` returned entries are used.
    pub fn from_fn<F: Fn(&[f64], f64) -> [f64; 3]>(grid: &HalfSpaceGrid, ncomp: usize, f: F) -> Self {
        let mut out = Self::zeros(grid, ncomp);
        let d = grid.n() - 1;
        for i in 0..grid.tan_len() {
            let p = grid.tan_point(i);
            for k in 0..grid.nt() {
                let v = f(&p[..d], grid.time(k));
                for c in 0..ncomp {
                    out.comps[c][[i, k]] = v[c];
                }
            }
        }
        out
    }

    pub fn grid(&self) -> &HalfSpaceGrid {
        &self.grid
    }
    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }
    pub fn comp(&self, i: usize) -> &Array2<f64> {
        &self.comps[i]
    }
    pub fn comps(&self) -> &[Array2<f64>] {
        &self.comps
    }
    pub fn into_comps(self) -> Vec<Array2<f64>> {
        self.comps
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.comps.len() != other.comps.len() {
            return Err(Error::Shape("boundary fields have different grids or component counts".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            comps: self.comps.iter().map(|a| a * c).collect(),
        }
    }

    /// Componentwise `L^q` norm over the boundary plane and time.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let wt = self.grid.time_weights();
        let area = self.grid.cell_area();
        let mut acc = 0.0;
        for c in &self.comps {
            for ((_, k), v) in c.indexed_iter() {
                acc += wt[k] * v.abs().powf(q);
            }
        }
        (area * acc).powf(1.0 / q)
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest magnitude at the initial time node.
    pub fn initial_max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.column(0).to_vec())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Component `i`, or zeros when the field stores fewer components.
    pub fn comp_or_zero(&self, i: usize) -> Array2<f64> {
        self.comps
            .get(i)
            .cloned()
            .unwrap_or_else(|| Array2::zeros((self.grid.tan_len(), self.grid.nt())))
    }

    /// Pads with zero components up to `n`.
    pub fn padded(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            comps: (0..self.grid.n()).map(|i| self.comp_or_zero(i)).collect(),
        }
    }
}

/// Discrete `L²` inner product of two arrays on the same domain.
pub fn inner3(grid: &HalfSpaceGrid, domain: Domain, a: &ArrayView3<f64>, b: &ArrayView3<f64>) -> f64 {
    let wz = domain.vertical_weights(grid);
    let wt = grid.time_weights();
    let mut acc = 0.0;
    Zip::indexed(a).and(b).for_each(|(_, j, k), x, y| acc += wz[j] * wt[k] * x * y);
    acc * grid.cell_area()
}

/// Discrete `L²` inner product on the boundary plane over time.
pub fn inner2(grid: &HalfSpaceGrid, a: &ArrayView2<f64>, b: &ArrayView2<f64>) -> f64 {
    let wt = grid.time_weights();
    let mut acc = 0.0;
    Zip::indexed(a).and(b).for_each(|(_, k), x, y| acc += wt[k] * x * y);
    acc * grid.cell_area()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::uniform(2, 8, 2.0, 5, 1.0, 4).unwrap()
    }

    #[test]
    fn shapes_are_checked() {
        let g = grid();
        assert!(ScalarField::new(g.clone(), Domain::HalfSpace, Array3::zeros((8, 5, 5))).is_ok());
        assert!(ScalarField::new(g.clone(), Domain::WholeSpace, Array3::zeros((8, 5, 5))).is_err());
        assert!(VectorField::new(g.clone(), Domain::HalfSpace, vec![Array3::zeros((8, 5, 5))]).is_err());
        assert!(BoundaryField::new(g, vec![Array2::zeros((8, 4))]).is_err());
    }

    #[test]
    fn restriction_keeps_upper_half() {
        let g = grid();
        let f = VectorField::from_fn(&g, Domain::WholeSpace, |x, _| [x[1], 0.0, 0.0]);
        let h = f.restrict_half().unwrap();
        let col: Vec<f64> = (0..5).map(|j| h.comp(0)[[0, j, 0]]).collect();
        assert_eq!(col, g.vertical().to_vec());
    }

    #[test]
    fn add_rejects_mismatch() {
        let g = grid();
        let a = VectorField::zeros(&g, Domain::HalfSpace);
        let b = VectorField::zeros(&g, Domain::WholeSpace);
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn lq_norm_of_constant() {
        let g = grid();
        let f = ScalarField::from_fn(&g, Domain::HalfSpace, |_, _| 2.0);
        let vol = g.period() * g.height() * g.t_final();
        assert!((f.lq_norm(2.0) - 2.0 * vol.sqrt()).abs() < 1e-12);
    }
}
