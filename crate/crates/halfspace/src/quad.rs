//! Gauss rules on intervals, composite and geometrically graded panels.

use std::num::NonZeroUsize;

use gauss_quad::{GaussHermite, GaussLegendre};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn legendre(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).unwrap();
    GaussLegendre::new(n).as_node_weight_pairs().to_vec()
}

/// Gauss–Hermite nodes and weights for the weight `e^{-x²}`.
pub fn hermite(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).unwrap();
    GaussHermite::new(n).as_node_weight_pairs().to_vec()
}

/// Precomputed Legendre rule mapped to arbitrary intervals.
#[derive(Clone, Debug)]
pub struct Rule {
    pairs: Vec<(f64, f64)>,
}

impl Rule {
    pub fn new(n: usize) -> Self {
        Self { pairs: legendre(n) }
    }

    /// Nodes and weights on `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.pairs.iter().map(move |&(x, w)| (m + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Sum over the panels delimited by `breaks`.
    pub fn composite<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        breaks
            .windows(2)
            .map(|p| self.integrate(p[0], p[1], &mut f))
            .sum()
    }

    /// Nodes and weights over all panels delimited by `breaks`.
    pub fn composite_nodes(&self, breaks: &[f64]) -> Vec<(f64, f64)> {
        breaks.windows(2).flat_map(|p| self.on(p[0], p[1]).collect::<Vec<_>>()).collect()
    }
}

/// Breakpoints on `[a, b]` shrinking geometrically by `ratio` toward `a`;
/// the first panel has width `(b−a)·ratio^{levels}`.
pub fn graded_breaks(a: f64, b: f64, levels: usize, ratio: f64) -> Vec<f64> {
    let mut out = vec![a];
    for l in (0..levels).rev() {
        out.push(a + (b - a) * ratio.powi(l as i32 + 1));
    }
    out.push(b);
    out
}

/// Breakpoints graded toward both ends of `[a, b]`.
pub fn graded_breaks_both(a: f64, b: f64, levels: usize, ratio: f64) -> Vec<f64> {
    let m = 0.5 * (a + b);
    let mut left = graded_breaks(a, m, levels, ratio);
    let right = graded_breaks(b, m, levels, ratio);
    left.pop();
    left.extend(right.into_iter().rev());
    left
}

/// Uniform breakpoints.
pub fn uniform_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_is_exact_for_polynomials() {
        let r = Rule::new(5);
        let v = r.integrate(0.0, 2.0, |x| x.powi(9));
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-11);
    }

    #[test]
    fn graded_rule_handles_endpoint_singularity() {
        let r = Rule::new(12);
        let b = graded_breaks(0.0, 1.0, 40, 0.3);
        let v = r.composite(&b, |x| 1.0 / x.sqrt());
        assert!((v - 2.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn graded_both_is_increasing() {
        let b = graded_breaks_both(-1.0, 3.0, 6, 0.5);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(b[0], -1.0);
        assert_eq!(*b.last().unwrap(), 3.0);
    }

    #[test]
    fn hermite_integrates_gaussian_moment() {
        let v: f64 = hermite(10).iter().map(|(x, w)| w * x * x).sum();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }
}
