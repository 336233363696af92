//! Weak formulations tested against divergence-free fields that vanish on
//! the wall and at the final time.
//!
//! For `u_t − Δu + ∇p = div 𝓕`, `u|_{wall} = g`, `u(0) = h`, integration by
//! parts against such `Φ` gives
//! `−∫∫ u·(ΔΦ + Φ_t) = −∫∫ 𝓕:∇Φ + ∫ h·Φ(0) + ∫∫ g·∂_nΦ`,
//! with `𝓕:∇Φ = Σ 𝓕_{ki} ∂_kΦ_i`. The Navier–Stokes form takes `𝓕 = −u⊗u`.

use serde::{Deserialize, Serialize};

use crate::core::{BoundaryField, HalfSpaceGrid, TensorField, VectorField};
use crate::error::{Error, Result};

/// `Φ = θ(t) (∂_nψ e_1 − ∂_1ψ e_n)` with `ψ = cos(k·x' + phase) z² e^{−s z²}`
/// and `θ(t) = (1 − t/T)²`. The profile makes `Φ` vanish on the wall while
/// `∂_nΦ` does not, so every term of the weak form is exercised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    /// Integer wave numbers along the tangential axes.
    pub modes: [i32; 2],
    pub phase: f64,
    /// Gaussian rate `s` of the vertical profile.
    pub decay: f64,
}

/// Values of `Φ` and the derived quantities at one space-time point.
struct Sample {
    phi: [f64; 3],
    /// `ΔΦ + Φ_t`
    heat: [f64; 3],
    /// `∂_kΦ_i` at `[k][i]`
    grad: [[f64; 3]; 3],
}

/// `B = z²e^{−sz²}` and its first three derivatives.
fn profile(z: f64, s: f64) -> [f64; 4] {
    let e = (-s * z * z).exp();
    let z2 = z * z;
    [
        z2 * e,
        (2.0 * z - 2.0 * s * z * z2) * e,
        (2.0 - 10.0 * s * z2 + 4.0 * s * s * z2 * z2) * e,
        (-24.0 * s * z + 36.0 * s * s * z * z2 - 8.0 * s * s * s * z * z2 * z2) * e,
    ]
}

impl TestFunction {
    pub fn new(modes: [i32; 2], phase: f64, decay: f64) -> Self {
        Self { modes, phase, decay }
    }

    fn wave(&self, grid: &HalfSpaceGrid) -> [f64; 2] {
        let c = 2.0 * std::f64::consts::PI / grid.period();
        [c * self.modes[0] as f64, c * self.modes[1] as f64]
    }

    /// Rejects functions that are not admissible on `grid`.
    pub fn validate(&self, grid: &HalfSpaceGrid) -> Result<()> {
        if grid.n() == 2 && self.modes[1] != 0 {
            return Err(Error::TestFunction("second tangential mode must be 0 for n = 2".into()));
        }
        if !(self.decay > 0.0 && self.decay.is_finite()) {
            return Err(Error::TestFunction(format!("decay must be positive, got {}", self.decay)));
        }
        let x = grid.height();
        let top = profile(x, self.decay).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let peak = 1.0 / (std::f64::consts::E * self.decay);
        if top > 1e-10 * peak {
            return Err(Error::TestFunction(format!(
                "profile does not vanish below the top of the box (relative {:.1e})",
                top / peak
            )));
        }
        let nyq = grid.n_tan() as i32 / 2;
        if self.modes.iter().any(|m| m.abs() >= nyq) {
            return Err(Error::TestFunction(format!("modes {:?} not resolved by {} points", self.modes, grid.n_tan())));
        }
        // Wall values and divergence from the analytic partials.
        let t = grid.t_final() * 0.3;
        let mut wall = 0.0f64;
        let mut div = 0.0f64;
        let mut size = 0.0f64;
        for m in 0..grid.tan_len() {
            let p = grid.tan_point(m);
            for &z in &[0.0, 0.5, 1.0, 2.0] {
                let s = self.sample(grid, &p, z, t);
                let d: f64 = (0..grid.n()).map(|i| s.grad[i][i]).sum();
                div = div.max(d.abs());
                size = size.max(s.grad.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs())));
                if z == 0.0 {
                    wall = wall.max(s.phi.iter().fold(0.0f64, |a, v| a.max(v.abs())));
                }
            }
        }
        if wall > 1e-10 || div > 1e-10 * size.max(1.0) {
            return Err(Error::TestFunction(format!("wall value {wall:.1e}, divergence {div:.1e}")));
        }
        Ok(())
    }

    fn sample(&self, grid: &HalfSpaceGrid, xp: &[f64; 2], z: f64, t: f64) -> Sample {
        let n = grid.n();
        let k = self.wave(grid);
        let arg = k[0] * xp[0] + k[1] * xp[1] + self.phase;
        let (c, sn) = (arg.cos(), arg.sin());
        let k2 = k[0] * k[0] + k[1] * k[1];
        let tf = grid.t_final();
        let th = (1.0 - t / tf).powi(2);
        let dth = -2.0 * (1.0 - t / tf) / tf;
        let [b0, b1, b2, b3] = profile(z, self.decay);
        // C = cos(arg), C_1 = ∂_1C = −k₁ sin(arg).
        let c1 = -k[0] * sn;
        let zn = n - 1;
        let mut phi = [0.0; 3];
        phi[0] = th * c * b1;
        phi[zn] = -th * c1 * b0;
        let mut heat = [0.0; 3];
        heat[0] = th * (-k2 * c * b1 + c * b3) + dth * c * b1;
        heat[zn] = -th * (-k2 * c1 * b0 + c1 * b2) - dth * c1 * b0;
        let mut grad = [[0.0; 3]; 3];
        for a in 0..n - 1 {
            // ∂_aC = −k_a sin, ∂_aC_1 = −k₁k_a cos.
            grad[a][0] = th * (-k[a] * sn) * b1;
            grad[a][zn] = -th * (-k[0] * k[a] * c) * b0;
        }
        grad[zn][0] = th * c * b2;
        grad[zn][zn] = -th * c1 * b1;
        Sample { phi, heat, grad }
    }

    /// `∂_nΦ` on the wall.
    fn wall_normal(&self, grid: &HalfSpaceGrid, xp: &[f64; 2], t: f64) -> [f64; 3] {
        self.sample(grid, xp, 0.0, t).grad[grid.n() - 1]
    }
}

/// Six admissible members with distinct modes, phases and profiles.
pub fn standard_family(grid: &HalfSpaceGrid) -> Vec<TestFunction> {
    let floor = 40.0 / grid.height().powi(2);
    let d = |s: f64| s.max(floor);
    let m2 = |a: i32| if grid.n() == 3 { a } else { 0 };
    vec![
        TestFunction::new([1, 0], 0.0, d(1.0)),
        TestFunction::new([1, m2(1)], 0.5 * std::f64::consts::PI, d(0.7)),
        TestFunction::new([2, 0], 0.3, d(1.5)),
        TestFunction::new([0, m2(1)], 1.1, d(0.8)),
        TestFunction::new([3, m2(2)], -0.4, d(2.0)),
        TestFunction::new([2, m2(1)], 2.0, d(1.2)),
    ]
}

/// The four terms of the weak form for one test function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct WeakTerms {
    /// `−∫∫ u·(ΔΦ + Φ_t)`
    pub lhs: f64,
    /// `−∫∫ 𝓕:∇Φ`
    pub force: f64,
    /// `∫ h·Φ(0)`
    pub initial: f64,
    /// `∫∫ g·∂_nΦ`
    pub boundary: f64,
    /// Sum of absolute contributions, the floor for the relative gap.
    #[serde(skip)]
    mass: f64,
}

impl WeakTerms {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.force - self.initial - self.boundary).abs()
    }

    pub fn scale(&self) -> f64 {
        [self.lhs, self.force, self.initial, self.boundary]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1e-6 * self.mass)
    }
}

/// Weak-form gap of one test function, relative to the largest term, with a
/// Richardson estimate of the quadrature error on the same scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakGap {
    pub test: TestFunction,
    pub terms: WeakTerms,
    pub gap: f64,
    pub tolerance: f64,
}

/// Trapezoid weights on every `stride`-th node.
fn strided_weights(nodes: &[f64], stride: usize) -> Vec<f64> {
    let mut w = vec![0.0; nodes.len()];
    let last = nodes.len() - 1;
    let mut i = 0;
    while i < last {
        let j = (i + stride).min(last);
        let h = nodes[j] - nodes[i];
        w[i] += 0.5 * h;
        w[j] += 0.5 * h;
        i = j;
    }
    w
}

enum Force<'a> {
    None,
    Tensor(&'a TensorField),
    Convective,
}

fn weak_terms(
    test: &TestFunction,
    u: &VectorField,
    h: &VectorField,
    g: &BoundaryField,
    force: &Force,
    stride: usize,
) -> WeakTerms {
    let grid = u.grid();
    let n = grid.n();
    let z = grid.vertical();
    let times = grid.times();
    let wz = strided_weights(z, stride);
    let wt = strided_weights(&times, stride);
    let area = grid.cell_area();
    let gc: Vec<_> = (0..n).map(|i| g.comp_or_zero(i)).collect();
    let mut terms = WeakTerms::default();
    for m in 0..grid.tan_len() {
        let xp = grid.tan_point(m);
        for (k, &t) in times.iter().enumerate() {
            if wt[k] == 0.0 && k != 0 {
                continue;
            }
            for (j, &zj) in z.iter().enumerate() {
                if wz[j] == 0.0 && !(k == 0 && j % stride == 0) {
                    continue;
                }
                let s = test.sample(grid, &xp, zj, t);
                let w = area * wz[j] * wt[k];
                let uv: Vec<f64> = (0..n).map(|i| u.comp(i)[[m, j, k]]).collect();
                let c = w * (0..n).map(|i| uv[i] * s.heat[i]).sum::<f64>();
                terms.lhs -= c;
                terms.mass += c.abs();
                let fg: f64 = match force {
                    Force::None => 0.0,
                    Force::Tensor(f) => (0..n)
                        .flat_map(|a| (0..n).map(move |i| (a, i)))
                        .map(|(a, i)| f.comp(a, i)[[m, j, k]] * s.grad[a][i])
                        .sum(),
                    Force::Convective => -(0..n)
                        .flat_map(|a| (0..n).map(move |i| (a, i)))
                        .map(|(a, i)| uv[a] * uv[i] * s.grad[a][i])
                        .sum::<f64>(),
                };
                terms.force -= w * fg;
                terms.mass += (w * fg).abs();
                if k == 0 {
                    let c = area * wz[j] * (0..n).map(|i| h.comp(i)[[m, j, 0]] * s.phi[i]).sum::<f64>();
                    terms.initial += c;
                    terms.mass += c.abs();
                }
            }
            let dn = test.wall_normal(grid, &xp, t);
            let c = area * wt[k] * (0..n).map(|i| gc[i][[m, k]] * dn[i]).sum::<f64>();
            terms.boundary += c;
            terms.mass += c.abs();
        }
    }
    terms
}

fn check_inputs(u: &VectorField, h: &VectorField, g: &BoundaryField, family: &[TestFunction]) -> Result<()> {
    let grid = u.grid();
    if h.grid() != grid || g.grid() != grid {
        return Err(Error::Grid("weak form inputs live on different grids".into()));
    }
    if (grid.n_vert() - 1) % 2 != 0 || grid.n_time() % 2 != 0 {
        return Err(Error::Grid("weak form tolerance needs even cell counts in x_n and t".into()));
    }
    for t in family {
        t.validate(grid)?;
    }
    Ok(())
}

fn gaps(
    u: &VectorField,
    h: &VectorField,
    g: &BoundaryField,
    force: Force,
    family: &[TestFunction],
) -> Result<Vec<WeakGap>> {
    check_inputs(u, h, g, family)?;
    Ok(family
        .iter()
        .map(|t| {
            let fine = weak_terms(t, u, h, g, &force, 1);
            let coarse = weak_terms(t, u, h, g, &force, 2);
            let scale = fine.scale();
            let rich = [
                fine.lhs - coarse.lhs,
                fine.force - coarse.force,
                fine.initial - coarse.initial,
                fine.boundary - coarse.boundary,
            ]
            .iter()
            .map(|d| d.abs() / 3.0)
            .sum::<f64>();
            let (gap, tolerance) = if scale > 0.0 { (fine.gap() / scale, rich / scale) } else { (0.0, 0.0) };
            WeakGap {
                test: t.clone(),
                terms: fine,
                gap,
                tolerance,
            }
        })
        .collect())
}

/// Weak Stokes gaps for `u` with data `(h, g, 𝓕)`.
pub fn weak_stokes_gaps(
    u: &VectorField,
    h: &VectorField,
    g: &BoundaryField,
    force: Option<&TensorField>,
    family: &[TestFunction],
) -> Result<Vec<WeakGap>> {
    let f = match force {
        Some(f) => Force::Tensor(f),
        None => Force::None,
    };
    gaps(u, h, g, f, family)
}

/// Weak Navier–Stokes gaps with the convective flux `−u⊗u`.
pub fn weak_ns_gaps(u: &VectorField, h: &VectorField, g: &BoundaryField, family: &[TestFunction]) -> Result<Vec<WeakGap>> {
    gaps(u, h, g, Force::Convective, family)
}

/// Largest relative weak Navier–Stokes gap over the family.
pub fn weak_ns_residual(u: &VectorField, h: &VectorField, g: &BoundaryField, family: &[TestFunction]) -> Result<f64> {
    Ok(weak_ns_gaps(u, h, g, family)?.iter().fold(0.0, |m, r| m.max(r.gap)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Domain, Grading};
    use std::f64::consts::PI;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::new(2, 2.0 * PI, 16, 8.0, 65, Grading::Uniform, 0.5, 16).unwrap()
    }

    #[test]
    fn profile_derivatives() {
        let s = 0.9;
        let z = 0.7;
        let e = 1e-5;
        let p = profile(z, s);
        let (pp, pm) = (profile(z + e, s), profile(z - e, s));
        for d in 0..3 {
            let fd = (pp[d] - pm[d]) / (2.0 * e);
            assert!((fd - p[d + 1]).abs() < 1e-8, "{d}");
        }
    }

    #[test]
    fn standard_family_is_admissible() {
        let g = grid();
        for t in standard_family(&g) {
            t.validate(&g).unwrap();
        }
        let g3 = HalfSpaceGrid::new(3, 2.0 * PI, 8, 8.0, 33, Grading::Uniform, 0.5, 8).unwrap();
        for t in standard_family(&g3) {
            t.validate(&g3).unwrap();
        }
    }

    #[test]
    fn rejects_bad_test_functions() {
        let g = grid();
        assert!(TestFunction::new([1, 0], 0.0, 0.01).validate(&g).is_err());
        assert!(TestFunction::new([1, 1], 0.0, 1.0).validate(&g).is_err());
        assert!(TestFunction::new([9, 0], 0.0, 1.0).validate(&g).is_err());
    }

    #[test]
    fn zero_fields_zero_residual() {
        let g = grid();
        let z = VectorField::zeros(&g, Domain::HalfSpace);
        let b = BoundaryField::zeros(&g, 2);
        assert_eq!(weak_ns_residual(&z, &z, &b, &standard_family(&g)).unwrap(), 0.0);
    }

    #[test]
    fn exact_heat_flow_satisfies_weak_form() {
        // Parallel shear u = (U(z, t), 0) with U_t = U_zz and zero pressure.
        let g = grid();
        let uf = |z: f64, t: f64| (-(z * z) / (4.0 * (t + 0.25))).exp() / (t + 0.25).sqrt();
        let u = VectorField::from_fn(&g, Domain::HalfSpace, |x, t| [uf(x[1], t), 0.0, 0.0]);
        let h = VectorField::stationary(&g, Domain::HalfSpace, |x| [uf(x[1], 0.0), 0.0, 0.0]);
        let b = BoundaryField::from_fn(&g, 2, |_, t| [uf(0.0, t), 0.0, 0.0]);
        let fam = vec![
            TestFunction::new([0, 0], 0.0, 1.0),
            TestFunction::new([0, 0], 0.0, 0.6),
            TestFunction::new([1, 0], 0.0, 1.0),
        ];
        for r in weak_stokes_gaps(&u, &h, &b, None, &fam).unwrap() {
            assert!(r.gap < r.tolerance.max(1e-6), "{r:?}");
            if r.test.modes[0] != 0 {
                // Orthogonal to the shear: every term vanishes.
                assert!(r.gap < 1e-6, "{r:?}");
                continue;
            }
            let t = r.terms;
            let flipped = (t.lhs - t.initial + t.boundary).abs() / t.scale();
            assert!(flipped > 0.5, "{r:?}");
        }
    }
}
