//! Error-function variants and exponential integrator weights.

use std::f64::consts::PI;

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

const ERFCX_SWITCH: f64 = 4.0;

/// Scaled complementary error function `e^{x²} erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < ERFCX_SWITCH {
        if x < -26.0 {
            return f64::INFINITY;
        }
        return (x * x).exp() * libm::erfc(x);
    }
    // Continued fraction 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (f * PI.sqrt())
}

/// `φ₁(x) = (eˣ − 1)/x`, with `φ₁(0) = 1`.
pub fn phi1(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.exp_m1() / x
    }
}

/// `ψ(x) = (eˣ(x − 1) + 1)/x²`, with `ψ(0) = 1/2`.
///
/// Over `[0,1]`, `∫ u e^{xu} du = ψ(x)` and `∫ (1 − u) e^{xu} du = φ₁(x) − ψ(x)`.
pub fn psi_lin(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // Σ_{m≥2} (m−1)/m! x^{m−2}
        let mut term = 0.5; // (m−1)/m! at m = 2
        let mut sum = 0.0;
        let mut m = 2.0;
        let mut xp = 1.0;
        while m < 40.0 {
            sum += term * xp;
            let next = m; // (m)/(m+1)! = term·m/((m−1)(m+1))
            term *= next / ((m - 1.0) * (m + 1.0));
            xp *= x;
            m += 1.0;
            if (term * xp).abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (x.exp() * (x - 1.0) + 1.0) / (x * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfcx_branches_join() {
        let below = (ERFCX_SWITCH * ERFCX_SWITCH).exp() * libm::erfc(ERFCX_SWITCH);
        let above = erfcx(ERFCX_SWITCH);
        assert!((below - above).abs() / above < 1e-13);
    }

    #[test]
    fn erfcx_asymptotics() {
        // erfcx(x) ≈ 1/(x√π)(1 − 1/(2x²) + 3/(4x⁴)) for large x.
        let x: f64 = 1e3;
        let approx = (1.0 - 0.5 / (x * x) + 0.75 / x.powi(4)) / (x * PI.sqrt());
        assert!((erfcx(x) - approx).abs() / approx < 1e-14);
        assert!((erfcx(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn psi_series_matches_closed_form() {
        for x in [-0.9, -0.3, 0.2, 0.95] {
            let direct = (f64::exp(x) * (x - 1.0) + 1.0) / (x * x);
            assert!((psi_lin(x) - direct).abs() < 1e-14, "{x}");
        }
        assert_eq!(psi_lin(0.0), 0.5);
    }

    #[test]
    fn hat_weights_integrate_exponential() {
        // ∫_0^1 e^{xu} du = φ₁(x); the two hats split it.
        let x = -3.7;
        let total = psi_lin(x) + (phi1(x) - psi_lin(x));
        assert!((total - x.exp_m1() / x).abs() < 1e-15);
        // ∫_0^1 u e^{xu} du by Simpson on a fine grid.
        let n = 2000;
        let h = 1.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let s = i as f64 * h;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * s * (x * s).exp();
        }
        acc *= h / 3.0;
        assert!((acc - psi_lin(x)).abs() < 1e-12);
    }
}
