use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smooth dyadic windows `φ_j(ξ) = χ(log₂|ξ| − j)` with
/// `χ(x) = cos²(π/2 · ν(|x|))` on `|x| < 1`, `ν(u) = u − sin(2πu)/2π`.
///
/// Neighbouring windows overlap on one octave and sum to one, so the
/// windows `j_min..=j_max` partition unity on `[2^{j_min}, 2^{j_max}]`.
/// Block indices are absolute, which makes the norms exactly covariant
/// under frequency doubling.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicPartition {
    pub j_min: i32,
    pub j_max: i32,
}

fn nu(u: f64) -> f64 {
    u - (2.0 * PI * u).sin() / (2.0 * PI)
}

/// Profile of one window in octave units.
pub fn chi(x: f64) -> f64 {
    let a = x.abs();
    if a >= 1.0 {
        0.0
    } else {
        (0.5 * PI * nu(a)).cos().powi(2)
    }
}

impl DyadicPartition {
    pub fn new(j_min: i32, j_max: i32) -> Result<Self> {
        if j_min > j_max {
            return Err(Error::Argument(format!("empty partition {j_min}..={j_max}")));
        }
        Ok(Self { j_min, j_max })
    }

    /// Windows covering the nonzero frequencies in `[k_min, k_max]`.
    pub fn covering(k_min: f64, k_max: f64) -> Result<Self> {
        if !(k_min > 0.0 && k_max >= k_min && k_max.is_finite()) {
            return Err(Error::Argument(format!("bad frequency band [{k_min}, {k_max}]")));
        }
        Self::new(k_min.log2().floor() as i32, k_max.log2().ceil() as i32)
    }

    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    pub fn len(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Weight of block `j` at frequency magnitude `k`; zero at `k = 0`.
    pub fn window(&self, j: i32, k: f64) -> f64 {
        if k <= 0.0 {
            return 0.0;
        }
        let x = k.log2();
        // The outermost blocks absorb the tails.
        if (j == self.j_min && x <= j as f64) || (j == self.j_max && x >= j as f64) {
            return 1.0;
        }
        chi(x - j as f64)
    }

    /// Blocks with a nonzero window at `k`.
    pub fn active(&self, k: f64) -> impl Iterator<Item = (i32, f64)> + '_ {
        let x = if k > 0.0 { k.log2() } else { f64::NEG_INFINITY };
        let lo = (x.floor() as i32).max(self.j_min);
        let hi = (x.ceil() as i32).min(self.j_max);
        let range = if k > 0.0 { lo..=hi } else { 1..=0 };
        range.map(move |j| (j, self.window(j, k))).filter(|(_, w)| *w > 0.0)
    }

    /// `max |Σ_j φ_j(k) − 1|` over the given frequencies, zero excluded.
    pub fn unity_defect(&self, ks: &[f64]) -> f64 {
        ks.iter()
            .filter(|k| **k > 0.0)
            .map(|&k| (self.blocks().map(|j| self.window(j, k)).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn profile_values() {
        assert_eq!(chi(0.0), 1.0);
        assert!((chi(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(chi(1.0), 0.0);
        assert_eq!(chi(-1.3), 0.0);
    }

    #[test]
    fn single_block_at_powers_of_two() {
        let p = DyadicPartition::new(-3, 6).unwrap();
        let act: Vec<_> = p.active(4.0).collect();
        assert_eq!(act, vec![(2, 1.0)]);
    }

    proptest! {
        #[test]
        fn partition_of_unity(k in 0.01f64..500.0) {
            let p = DyadicPartition::covering(0.01, 500.0).unwrap();
            let s: f64 = p.blocks().map(|j| p.window(j, k)).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
            let a: f64 = p.active(k).map(|(_, w)| w).sum();
            prop_assert!((a - 1.0).abs() < 1e-12);
        }

        #[test]
        fn tails_absorbed(k in 1e-6f64..1e6) {
            let p = DyadicPartition::new(-2, 3).unwrap();
            let s: f64 = p.blocks().map(|j| p.window(j, k)).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
