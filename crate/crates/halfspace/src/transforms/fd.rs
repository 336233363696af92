//! Finite-difference derivatives along the (possibly graded) vertical axis.

use ndarray::{Array3, Axis};

/// Fornberg weights for the `order`-th derivative at `x0` from `nodes`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Five-point stencils (fourth order for first derivatives): centered in
/// the interior, one-sided at the ends.
#[derive(Clone, Debug)]
pub struct VerticalStencil {
    start: Vec<usize>,
    weights: Vec<Vec<f64>>,
}

impl VerticalStencil {
    pub fn new(nodes: &[f64], order: usize, width: usize) -> Self {
        let n = nodes.len();
        let width = width.min(n);
        let half = width / 2;
        let mut start = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let s = i.saturating_sub(half).min(n - width);
            start.push(s);
            weights.push(fornberg_weights(nodes[i], &nodes[s..s + width], order));
        }
        Self { start, weights }
    }

    /// Fourth-order first derivative.
    pub fn first(nodes: &[f64]) -> Self {
        Self::new(nodes, 1, 5)
    }

    /// Derivative at node `i` of the column `f`.
    pub fn at(&self, i: usize, f: impl Fn(usize) -> f64) -> f64 {
        let s = self.start[i];
        self.weights[i].iter().enumerate().map(|(j, w)| w * f(s + j)).sum()
    }

    /// Derivative along axis 1 of `(tangential, vertical, time)` samples.
    pub fn apply(&self, a: &Array3<f64>) -> Array3<f64> {
        let mut out = Array3::zeros(a.dim());
        for (mut o, col) in out.lanes_mut(Axis(1)).into_iter().zip(a.lanes(Axis(1))) {
            for i in 0..col.len() {
                o[i] = self.at(i, |j| col[j]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_weights() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn fourth_order_on_graded_nodes() {
        let err = |n: usize| {
            let z: Vec<f64> = (0..n).map(|i| (i as f64 / (n - 1) as f64).powi(2)).collect();
            let st = VerticalStencil::first(&z);
            (0..n)
                .map(|i| (st.at(i, |j| z[j].sin()) - z[i].cos()).abs())
                .fold(0.0f64, f64::max)
        };
        let ratio = err(21) / err(41);
        assert!(ratio > 12.0, "{ratio}");
    }
}
