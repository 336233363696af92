use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smoothness and integrability exponents of the anisotropic Besov class
/// `Ḃ^{α,α/2}_q`, with the auxiliary pair `(β, p)` used for the force.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesovIndex {
    pub n: usize,
    pub alpha: f64,
    pub q: f64,
    pub beta: Option<f64>,
    pub p: Option<f64>,
}

const CRITICAL_TOL: f64 = 1e-12;

impl BesovIndex {
    pub fn new(n: usize, alpha: f64, q: f64) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::Index(format!("dimension must be 2 or 3, got {n}")));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::Index(format!("alpha must lie in (0, 2), got {alpha}")));
        }
        if !(q > 1.0 && q.is_finite()) {
            return Err(Error::Index(format!("q must lie in (1, inf), got {q}")));
        }
        Ok(Self {
            n,
            alpha,
            q,
            beta: None,
            p: None,
        })
    }

    /// Critical index `q = (n+2)/(α+1)`.
    pub fn critical(n: usize, alpha: f64) -> Result<Self> {
        Self::new(n, alpha, (n as f64 + 2.0) / (alpha + 1.0))
    }

    /// Attaches `(β, p)` after checking the force constraints.
    pub fn with_force(mut self, beta: f64, p: f64) -> Result<Self> {
        self.check_force(beta, p)?;
        self.beta = Some(beta);
        self.p = Some(p);
        Ok(self)
    }

    pub fn is_critical(&self) -> bool {
        (self.q - (self.n as f64 + 2.0) / (self.alpha + 1.0)).abs() <= CRITICAL_TOL
    }

    pub fn check_force(&self, beta: f64, p: f64) -> Result<()> {
        let (a, q) = (self.alpha, self.q);
        let nn = self.n as f64 + 2.0;
        let gap = 1.0 - a + beta - nn * (1.0 / p - 1.0 / q);
        let ok = p > 1.0 && p <= q && 0.0 < beta && beta < a && a <= beta + 1.0 && beta + 1.0 < 2.0;
        if !ok || gap.abs() > 1e-10 {
            return Err(Error::Index(format!(
                "(beta, p) = ({beta}, {p}) violates the force constraints for alpha = {a}, q = {q} (balance {gap:.3e})"
            )));
        }
        Ok(())
    }

    /// Auxiliary pair: the stored one, else `p = (1 + min(q, (n+2)/2))/2`
    /// with `β` from the balance relation, else the midpoint of the
    /// admissible range of `1/p − 1/q`.
    pub fn aux(&self) -> Result<(f64, f64)> {
        if let (Some(b), Some(p)) = (self.beta, self.p) {
            return Ok((b, p));
        }
        let nn = self.n as f64 + 2.0;
        let (a, q) = (self.alpha, self.q);
        let p = 0.5 * (1.0 + q.min(nn / 2.0));
        let beta = a - 1.0 + nn * (1.0 / p - 1.0 / q);
        if self.check_force(beta, p).is_ok() {
            return Ok((beta, p));
        }
        let lo = (1.0 - a).max(0.0) / nn;
        let hi = (1.0 / nn).min((2.0 - a) / nn).min(1.0 - 1.0 / q);
        if lo >= hi {
            return Err(Error::Index(format!("no admissible (beta, p) for alpha = {a}, q = {q}")));
        }
        let delta = 0.5 * (lo + hi);
        let p = 1.0 / (delta + 1.0 / q);
        let beta = a - 1.0 + nn * delta;
        self.check_force(beta, p)?;
        Ok((beta, p))
    }

    /// Spatial order of the initial data class, `α − 2/q`.
    pub fn initial_order(&self) -> f64 {
        self.alpha - 2.0 / self.q
    }

    /// Spatial order of the boundary data class, `α − 1/q`.
    pub fn boundary_order(&self) -> f64 {
        self.alpha - 1.0 / self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_flag() {
        let i = BesovIndex::critical(2, 1.0).unwrap();
        assert_eq!(i.q, 2.0);
        assert!(i.is_critical());
        assert!(!BesovIndex::new(2, 1.0, 2.5).unwrap().is_critical());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(BesovIndex::new(2, 2.0, 2.0).is_err());
        assert!(BesovIndex::new(2, 0.5, 1.0).is_err());
        assert!(BesovIndex::new(4, 0.5, 2.0).is_err());
    }

    #[test]
    fn default_pair_satisfies_balance() {
        for n in [2, 3] {
            for a in [0.5, 1.0, 1.5] {
                let i = BesovIndex::critical(n, a).unwrap();
                let (b, p) = i.aux().unwrap();
                assert!(i.check_force(b, p).is_ok(), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn fallback_pair_for_half_order() {
        // The default p = 1.5 gives β = 0.5 = α here, so the midpoint is used.
        let i = BesovIndex::critical(2, 0.5).unwrap();
        let (b, p) = i.aux().unwrap();
        assert!((b - 0.25).abs() < 1e-12);
        let delta = (0.125 + 0.25) / 2.0;
        assert!((p - 1.0 / (delta + 0.375)).abs() < 1e-12);
    }

    #[test]
    fn explicit_pair_is_validated() {
        let i = BesovIndex::critical(2, 1.0).unwrap();
        assert!(i.with_force(0.9, 2.5).is_err());
        let nn: f64 = 4.0;
        let p = 1.6;
        let beta = nn * (1.0 / p - 0.5);
        assert!(i.with_force(beta, p).is_ok());
    }
}
