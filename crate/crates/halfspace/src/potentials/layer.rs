//! Closed-form time integrals of the single-layer heat kernel.
//!
//! For one tangential frequency `k = |ξ'|` the kernel of `T2` is
//! `K(z, τ) = (4πτ)^{-1/2} e^{-z²/4τ - k²τ}`. Against data that are constant
//! on each time step its integrals over `[τ₁, τ₂]` are differences of
//! error functions. With `a = z²/4`, `b = k²`, `c = zk/2` and
//! `u± = √(bτ) ± √(a/τ)`,
//!
//! `∫K dτ = (4√b)^{-1} [e^{2c} erf(u+) + e^{-2c} erf(u−)]`,
//! `∂_z ∫K dτ = ¼ [e^{2c} erf(u+) − e^{-2c} erf(u−)]`.
//!
//! Both are evaluated through `e^{-bτ-a/τ} erfcx(|u±|)` so that the large
//! factors `e^{±2c}` never appear.

use std::f64::consts::PI;

use crate::special::{erfc, erfcx};

#[derive(Clone, Copy)]
struct Parts {
    /// `e^{2c} erfc(u+) = e^{-bτ-a/τ} erfcx(u+)`
    a: f64,
    /// `e^{-bτ-a/τ} erfcx(|u−|)`
    b: f64,
    /// Sign of `u−`.
    pos: bool,
}

impl Parts {
    fn new(z: f64, k: f64, tau: f64) -> Self {
        if tau <= 0.0 {
            // Limits τ → 0⁺ at z > 0; the wall value is taken as the limit z → 0⁺.
            return Self { a: 0.0, b: 0.0, pos: false };
        }
        let sb = k * tau.sqrt();
        let sa = z / (2.0 * tau.sqrt());
        let g = (-k * k * tau - z * z / (4.0 * tau)).exp();
        let um = sb - sa;
        Self {
            a: g * erfcx(sb + sa),
            b: g * erfcx(um.abs()),
            pos: um >= 0.0,
        }
    }
}

/// Increment of `e^{-2c} erf(u−)` from `p1` to `p2`. Writing it as
/// `±(e^{-2c} − b)` keeps the large-`c` factor out of same-sign differences.
fn diff_q(p1: Parts, p2: Parts, z: f64, k: f64) -> f64 {
    match (p1.pos, p2.pos) {
        (true, true) => p1.b - p2.b,
        (false, false) => p2.b - p1.b,
        (false, true) => 2.0 * (-z * k).exp() - p1.b - p2.b,
        (true, false) => -2.0 * (-z * k).exp() + p1.b + p2.b,
    }
}

/// `∫_{τ₁}^{τ₂} (4πτ)^{-1/2} e^{-z²/4τ - k²τ} dτ`, for `z ≥ 0`, `0 ≤ τ₁ ≤ τ₂`.
pub fn layer_increment(z: f64, k: f64, tau1: f64, tau2: f64) -> f64 {
    if k == 0.0 {
        return f0(z, tau2) - f0(z, tau1);
    }
    let (p1, p2) = (Parts::new(z, k, tau1), Parts::new(z, k, tau2));
    ((p1.a - p2.a) + diff_q(p1, p2, z, k)) / (4.0 * k)
}

/// `∂_z` of [`layer_increment`]. At `z = 0` this is the one-sided limit
/// from above, so the step touching `τ = 0` carries the jump `−½`.
pub fn layer_normal_increment(z: f64, k: f64, tau1: f64, tau2: f64) -> f64 {
    if k == 0.0 {
        return g0(z, tau2) - g0(z, tau1);
    }
    let (p1, p2) = (Parts::new(z, k, tau1), Parts::new(z, k, tau2));
    0.25 * ((p1.a - p2.a) - diff_q(p1, p2, z, k))
}

/// `∫_0^τ (4πs)^{-1/2} e^{-a/s} ds` with `a = z²/4`.
fn f0(z: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let sa = 0.5 * z;
    (tau / PI).sqrt() * (-(sa * sa) / tau).exp() - sa * erfc(sa / tau.sqrt())
}

fn g0(z: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    -0.5 * erfc(z / (2.0 * tau.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{graded_breaks, Rule};

    fn kernel(z: f64, k: f64, tau: f64) -> f64 {
        (4.0 * PI * tau).powf(-0.5) * (-z * z / (4.0 * tau) - k * k * tau).exp()
    }

    fn brute(z: f64, k: f64, t1: f64, t2: f64) -> f64 {
        // σ = √τ removes the endpoint singularity.
        let r = Rule::new(30);
        let b = graded_breaks(t1.sqrt(), t2.sqrt(), 20, 0.5);
        r.composite(&b, |s| 2.0 * s * kernel(z, k, s * s))
    }

    #[test]
    fn wall_value_at_zero_mode() {
        let t: f64 = 0.7;
        assert!((layer_increment(0.0, 0.0, 0.0, t) - (t / PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn matches_quadrature() {
        for &(z, k) in &[(0.0, 1.0), (0.3, 2.0), (1.5, 0.5), (0.05, 10.0), (2.0, 0.0), (0.8, 30.0)] {
            for &(t1, t2) in &[(0.0, 0.1), (0.1, 0.2), (0.5, 1.3)] {
                let a = layer_increment(z, k, t1, t2);
                let b = brute(z, k, t1, t2);
                assert!((a - b).abs() < 1e-13 * b.abs().max(1e-3), "z={z} k={k} [{t1},{t2}]: {a} vs {b}");
            }
        }
    }

    #[test]
    fn normal_derivative_matches_difference_quotient() {
        for &(z, k) in &[(0.3, 2.0), (1.5, 0.5), (0.7, 0.0), (0.2, 12.0)] {
            for &(t1, t2) in &[(0.0, 0.1), (0.1, 0.2)] {
                let h = 1e-5;
                let fd = (layer_increment(z + h, k, t1, t2) - layer_increment(z - h, k, t1, t2)) / (2.0 * h);
                let ex = layer_normal_increment(z, k, t1, t2);
                assert!((fd - ex).abs() < 1e-8, "z={z} k={k}: {fd} vs {ex}");
            }
        }
    }

    #[test]
    fn wall_jump_is_one_half() {
        for k in [0.0, 1.0, 7.0] {
            assert!((layer_normal_increment(0.0, k, 0.0, 0.05) + 0.5).abs() < 1e-15);
            assert!(layer_normal_increment(0.0, k, 0.05, 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn huge_exponents_stay_finite() {
        let v = layer_increment(8.0, 200.0, 0.01, 0.02);
        assert!(v.is_finite() && v >= 0.0);
        let d = layer_normal_increment(8.0, 200.0, 0.0, 0.02);
        assert!(d.is_finite());
    }
}
