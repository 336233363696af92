use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertical node distribution on `[0, X]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grading {
    Uniform,
    /// Spacing grows by `ratio` from one cell to the next, starting at the wall.
    Geometric { ratio: f64 },
}

/// Discretization of `ℝ^{n-1}_per × [0, X] × [0, T]`.
///
/// Tangential axes are a torus of period `period` with `n_tan` nodes per
/// axis. The vertical axis carries `n_vert` nodes with the first at the
/// wall. Time carries `n_time` uniform steps, so `n_time + 1` nodes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfSpaceGrid {
    n: usize,
    period: f64,
    n_tan: usize,
    height: f64,
    n_vert: usize,
    grading: Grading,
    t_final: f64,
    n_time: usize,
    #[serde(skip)]
    vert: Vec<f64>,
}

impl HalfSpaceGrid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        period: f64,
        n_tan: usize,
        height: f64,
        n_vert: usize,
        grading: Grading,
        t_final: f64,
        n_time: usize,
    ) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::Grid(format!("dimension must be 2 or 3, got {n}")));
        }
        if n_tan < 2 || n_vert < 2 || n_time < 2 {
            return Err(Error::Grid(format!(
                "need at least 2 samples per axis (n_tan={n_tan}, n_vert={n_vert}, n_time={n_time})"
            )));
        }
        for (name, v) in [("period", period), ("height", height), ("t_final", t_final)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Grid(format!("{name} must be positive, got {v}")));
            }
        }
        let vert = vertical_nodes(height, n_vert, grading)?;
        Ok(Self {
            n,
            period,
            n_tan,
            height,
            n_vert,
            grading,
            t_final,
            n_time,
            vert,
        })
    }

    /// Uniform grid with `L = 2π`, handy for tests and examples.
    pub fn uniform(n: usize, n_tan: usize, height: f64, n_vert: usize, t_final: f64, n_time: usize) -> Result<Self> {
        Self::new(
            n,
            2.0 * std::f64::consts::PI,
            n_tan,
            height,
            n_vert,
            Grading::Uniform,
            t_final,
            n_time,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn period(&self) -> f64 {
        self.period
    }
    pub fn n_tan(&self) -> usize {
        self.n_tan
    }
    pub fn height(&self) -> f64 {
        self.height
    }
    pub fn n_vert(&self) -> usize {
        self.n_vert
    }
    pub fn grading(&self) -> Grading {
        self.grading
    }
    pub fn t_final(&self) -> f64 {
        self.t_final
    }
    pub fn n_time(&self) -> usize {
        self.n_time
    }

    /// Number of time nodes, `n_time + 1`.
    pub fn nt(&self) -> usize {
        self.n_time + 1
    }

    /// Number of tangential nodes on the boundary plane, `n_tan^{n-1}`.
    pub fn tan_len(&self) -> usize {
        self.n_tan.pow((self.n - 1) as u32)
    }

    pub fn tan_shape(&self) -> Vec<usize> {
        vec![self.n_tan; self.n - 1]
    }

    pub fn dx(&self) -> f64 {
        self.period / self.n_tan as f64
    }

    /// Area element of one tangential cell.
    pub fn cell_area(&self) -> f64 {
        self.dx().powi((self.n - 1) as i32)
    }

    /// Tangential coordinates of flattened node `idx` (second entry unused for n = 2).
    pub fn tan_point(&self, idx: usize) -> [f64; 2] {
        let dx = self.dx();
        if self.n == 2 {
            [idx as f64 * dx, 0.0]
        } else {
            [(idx / self.n_tan) as f64 * dx, (idx % self.n_tan) as f64 * dx]
        }
    }

    pub fn vertical(&self) -> &[f64] {
        &self.vert
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.grading, Grading::Uniform)
    }

    /// Uniform vertical spacing. Only meaningful on uniform grids.
    pub fn dz(&self) -> f64 {
        self.height / (self.n_vert - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.n_time as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.nt()).map(|k| self.time(k)).collect()
    }

    /// Reflected vertical axis `[-X, X]` with `2 n_vert - 1` nodes.
    pub fn whole_vertical(&self) -> Vec<f64> {
        let mut z: Vec<f64> = self.vert.iter().rev().map(|v| -v).collect();
        z.extend_from_slice(&self.vert[1..]);
        z
    }

    /// Trapezoid weights on the vertical nodes.
    pub fn vertical_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.vert)
    }

    /// Trapezoid weights on the time nodes.
    pub fn time_weights(&self) -> Vec<f64> {
        let dt = self.dt();
        let mut w = vec![dt; self.nt()];
        w[0] = 0.5 * dt;
        w[self.n_time] = 0.5 * dt;
        w
    }

    pub(crate) fn require_uniform(&self, what: &str) -> Result<()> {
        if self.is_uniform() {
            Ok(())
        } else {
            Err(Error::Grid(format!("{what} needs a uniform vertical axis")))
        }
    }

    /// Grid with every axis refined by a factor of two. Geometric grading
    /// uses the square-root ratio so the old nodes are kept.
    pub fn refined(&self) -> Self {
        let grading = match self.grading {
            Grading::Uniform => Grading::Uniform,
            Grading::Geometric { ratio } => Grading::Geometric { ratio: ratio.sqrt() },
        };
        Self::new(
            self.n,
            self.period,
            2 * self.n_tan,
            self.height,
            2 * (self.n_vert - 1) + 1,
            grading,
            self.t_final,
            2 * self.n_time,
        )
        .expect("refinement of a valid grid is valid")
    }

    /// Grid seen by parabolically rescaled data: lengths shrink by `λ`,
    /// time by `λ²`, node counts unchanged.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Argument(format!("scaling factor must be positive, got {lambda}")));
        }
        Self::new(
            self.n,
            self.period / lambda,
            self.n_tan,
            self.height / lambda,
            self.n_vert,
            self.grading,
            self.t_final / (lambda * lambda),
            self.n_time,
        )
    }
}

fn vertical_nodes(height: f64, n_vert: usize, grading: Grading) -> Result<Vec<f64>> {
    let cells = n_vert - 1;
    let mut z = Vec::with_capacity(n_vert);
    match grading {
        Grading::Uniform => {
            let h = height / cells as f64;
            z.extend((0..n_vert).map(|i| i as f64 * h));
        }
        Grading::Geometric { ratio } => {
            if !(ratio.is_finite() && ratio > 0.0) {
                return Err(Error::Grid(format!("grading ratio must be positive, got {ratio}")));
            }
            if (ratio - 1.0).abs() < 1e-14 {
                return vertical_nodes(height, n_vert, Grading::Uniform);
            }
            let h1 = height * (ratio - 1.0) / (ratio.powi(cells as i32) - 1.0);
            let mut acc = 0.0;
            let mut h = h1;
            z.push(0.0);
            for _ in 1..cells {
                acc += h;
                z.push(acc);
                h *= ratio;
            }
            z.push(height);
        }
    }
    z[n_vert - 1] = height;
    if z.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid("vertical nodes are not strictly increasing".into()));
    }
    Ok(z)
}

pub(crate) fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = x[i + 1] - x[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    w
}
