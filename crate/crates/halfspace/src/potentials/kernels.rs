//! Pointwise kernels: heat and Newton kernels and their periodic versions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Heat kernel `(4πt)^{-n/2} e^{-|x|²/4t}`, zero for `t ≤ 0`.
pub fn heat_kernel(x: &[f64], t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    (4.0 * PI * t).powf(-(x.len() as f64) / 2.0) * (-r2 / (4.0 * t)).exp()
}

/// Newton kernel with `ΔN = δ`: `ln|x|/(2π)` for n = 2, `−1/(4π|x|)` for n = 3.
pub fn newton_kernel(x: &[f64]) -> Result<f64> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::Argument("Newton kernel is singular at the origin".into()));
    }
    match x.len() {
        2 => Ok(r.ln() / (2.0 * PI)),
        3 => Ok(-1.0 / (4.0 * PI * r)),
        n => Err(Error::Argument(format!("Newton kernel needs n = 2 or 3, got {n}"))),
    }
}

/// One-dimensional heat kernel periodized over period `l` by summing images.
pub fn heat_kernel_1d_periodic(s: f64, t: f64, l: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s = s.rem_euclid(l);
    let reach = (40.0 * t).sqrt() / l + 2.0;
    let nmax = reach.ceil() as i64;
    let c = 1.0 / (4.0 * PI * t).sqrt();
    (-nmax..=nmax)
        .map(|n| {
            let y = s - n as f64 * l;
            c * (-y * y / (4.0 * t)).exp()
        })
        .sum()
}

/// Poisson kernel of the strip-periodic half plane (period `l` in `s`).
pub fn poisson_kernel_periodic(s: f64, z: f64, l: f64) -> f64 {
    let a = 2.0 * PI / l;
    (a * z).sinh() / (l * ((a * z).cosh() - (a * s).cos()))
}

/// Newton kernel of `ℝ/lℤ × ℝ`: `ln(2cosh(2πz/l) − 2cos(2πs/l))/(4π)`.
pub fn newton_kernel_periodic(s: f64, z: f64, l: f64) -> f64 {
    let a = 2.0 * PI / l;
    let az = (a * z).abs();
    // ln(2cosh u − 2cos v) = u + ln(1 − 2e^{-u}cos v + e^{-2u}) avoids overflow.
    let e = (-az).exp();
    (az + (1.0 - 2.0 * e * (a * s).cos() + e * e).ln()) / (4.0 * PI)
}

/// Gradient `(∂_s, ∂_z)` of [`newton_kernel_periodic`].
pub fn newton_kernel_periodic_grad(s: f64, z: f64, l: f64) -> [f64; 2] {
    let a = 2.0 * PI / l;
    let den = (a * z).cosh() - (a * s).cos();
    [a * (a * s).sin() / (4.0 * PI * den), a * (a * z).sinh() / (4.0 * PI * den)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_kernel_basics() {
        assert_eq!(heat_kernel(&[0.3, 0.1], 0.0), 0.0);
        assert_eq!(heat_kernel(&[0.3, 0.1], -1.0), 0.0);
        assert!((heat_kernel(&[0.0, 0.0], 1.0) - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((heat_kernel(&[0.0, 0.0, 0.0], 1.0) - (4.0 * PI).powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn newton_kernel_values() {
        assert_eq!(newton_kernel(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((newton_kernel(&[0.0, 1.0, 0.0]).unwrap() + 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!(newton_kernel(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn newton_kernel_is_discretely_harmonic() {
        let h = 1e-2;
        for n in [2usize, 3] {
            let x = [0.7, -0.4, 0.5];
            let x = &x[..n];
            let mut lap = -2.0 * n as f64 * newton_kernel(x).unwrap();
            for i in 0..n {
                let mut p = x.to_vec();
                p[i] += h;
                lap += newton_kernel(&p).unwrap();
                p[i] -= 2.0 * h;
                lap += newton_kernel(&p).unwrap();
            }
            lap /= h * h;
            assert!(lap.abs() < 1e-3, "n={n} lap={lap}");
        }
    }

    #[test]
    fn periodic_newton_matches_free_kernel_near_origin() {
        let l = 2.0 * PI;
        let (s, z) = (1e-3, 2e-3);
        let free = newton_kernel(&[s, z]).unwrap();
        let per = newton_kernel_periodic(s, z, l);
        // The difference is smooth and equals ln(2π/l)/(2π) at the origin.
        assert!((per - free - (2.0 * PI / l).ln() / (2.0 * PI)).abs() < 1e-5);
    }

    #[test]
    fn periodic_poisson_kernel_has_unit_mass() {
        let l = 3.0;
        let n = 400;
        let mass: f64 = (0..n)
            .map(|i| poisson_kernel_periodic(i as f64 * l / n as f64, 0.5, l) * l / n as f64)
            .sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodic_heat_kernel_has_unit_mass() {
        let l = 2.0;
        let n = 200;
        let mass: f64 = (0..n)
            .map(|i| heat_kernel_1d_periodic(i as f64 * l / n as f64, 0.3, l) * l / n as f64)
            .sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }
}
