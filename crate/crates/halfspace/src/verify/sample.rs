//! Seeded band-limited random fields.
//!
//! Every sample is an analytic function with Gaussian-random mode amplitudes,
//! so the same seed yields the same continuous field on any grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::core::{BoundaryField, Domain, HalfSpaceGrid, ScalarField, TensorField, VectorField};

/// Spectral content of a random sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BandSpec {
    /// Largest tangential wave number (in units of `2π/L`); the zero mode is excluded.
    pub modes: usize,
    /// Number of temporal components.
    pub time_modes: usize,
    /// Number of vertical Gaussian bumps.
    pub bumps: usize,
    /// Force every sample to vanish at `t = 0`.
    pub vanish_at_start: bool,
}

impl Default for BandSpec {
    fn default() -> Self {
        Self {
            modes: 3,
            time_modes: 2,
            bumps: 2,
            vanish_at_start: false,
        }
    }
}

#[derive(Clone, Debug)]
struct Term {
    wave: [f64; 2],
    phase: f64,
    amp: f64,
    omega: f64,
    tphase: f64,
}

/// Random scalar function `f(x', t) = Σ a cos(k·x' + φ) τ(t)`.
#[derive(Clone, Debug)]
struct Series {
    terms: Vec<Term>,
    vanish: bool,
}

impl Series {
    fn new(rng: &mut ChaCha8Rng, grid: &HalfSpaceGrid, spec: &BandSpec) -> Self {
        let k0 = 2.0 * std::f64::consts::PI / grid.period();
        let m = spec.modes.max(1) as i64;
        let mut waves = Vec::new();
        for a in -m..=m {
            for b in -m..=m {
                if grid.n() == 2 && b != 0 {
                    continue;
                }
                // Half of the lattice, without the origin: ±k give the same cosine.
                if (a, b) <= (0, 0) || a * a + b * b > m * m {
                    continue;
                }
                waves.push([a as f64 * k0, b as f64 * k0]);
            }
        }
        let mut terms = Vec::new();
        for w in waves {
            for p in 0..spec.time_modes.max(1) {
                terms.push(Term {
                    wave: w,
                    phase: rng.gen_range(0.0..std::f64::consts::TAU),
                    amp: rng.sample(StandardNormal),
                    omega: (p as f64 + 0.5) * std::f64::consts::PI / grid.t_final(),
                    tphase: rng.gen_range(0.0..std::f64::consts::TAU),
                });
            }
        }
        Self {
            terms,
            vanish: spec.vanish_at_start,
        }
    }

    fn eval(&self, x: &[f64], t: f64) -> f64 {
        let x2 = if x.len() > 2 { x[1] } else { 0.0 };
        self.terms
            .iter()
            .map(|tm| {
                let time = if self.vanish {
                    (tm.omega * t).sin()
                } else {
                    (tm.omega * t + tm.tphase).cos()
                };
                tm.amp * (tm.wave[0] * x[0] + tm.wave[1] * x2 + tm.phase).cos() * time
            })
            .sum()
    }
}

/// Sum of Gaussian bumps in `x_n`, decayed to round-off at `|x_n| = X`.
#[derive(Clone, Debug)]
struct Profile {
    bumps: Vec<(f64, f64, f64)>,
}

impl Profile {
    fn new(rng: &mut ChaCha8Rng, grid: &HalfSpaceGrid, spec: &BandSpec, whole: bool) -> Self {
        let x = grid.height();
        let width = 0.1 * x;
        let bumps = (0..spec.bumps.max(1))
            .map(|_| {
                let lo = if whole { -0.25 * x } else { 0.0 };
                let c = rng.gen_range(lo..0.25 * x);
                let w = width * rng.gen_range(0.7..1.3);
                (rng.sample::<f64, _>(StandardNormal), c, w)
            })
            .collect();
        Self { bumps }
    }

    fn eval(&self, z: f64) -> f64 {
        self.bumps.iter().map(|(a, c, w)| a * (-((z - c) / w).powi(2)).exp()).sum()
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random boundary data with `ncomp` independent components.
pub fn random_boundary(grid: &HalfSpaceGrid, ncomp: usize, spec: &BandSpec, seed: u64) -> BoundaryField {
    let mut r = rng(seed);
    let series: Vec<Series> = (0..ncomp).map(|_| Series::new(&mut r, grid, spec)).collect();
    BoundaryField::from_fn(grid, ncomp, |x, t| {
        let mut v = [0.0; 3];
        for (i, s) in series.iter().enumerate() {
            v[i] = s.eval(x, t);
        }
        v
    })
}

fn space_time(r: &mut ChaCha8Rng, grid: &HalfSpaceGrid, spec: &BandSpec, whole: bool) -> (Series, Profile) {
    (Series::new(r, grid, spec), Profile::new(r, grid, spec, whole))
}

fn eval_st(st: &(Series, Profile), x: &[f64], t: f64) -> f64 {
    let z = x[x.len() - 1];
    st.0.eval(x, t) * st.1.eval(z)
}

pub fn random_scalar(grid: &HalfSpaceGrid, domain: Domain, spec: &BandSpec, seed: u64) -> ScalarField {
    let mut r = rng(seed);
    let st = space_time(&mut r, grid, spec, domain == Domain::WholeSpace);
    ScalarField::from_fn(grid, domain, |x, t| eval_st(&st, x, t))
}

pub fn random_vector(grid: &HalfSpaceGrid, domain: Domain, spec: &BandSpec, seed: u64) -> VectorField {
    let mut r = rng(seed);
    let parts: Vec<_> = (0..grid.n())
        .map(|_| space_time(&mut r, grid, spec, domain == Domain::WholeSpace))
        .collect();
    VectorField::from_fn(grid, domain, |x, t| {
        let mut v = [0.0; 3];
        for (i, p) in parts.iter().enumerate() {
            v[i] = eval_st(p, x, t);
        }
        v
    })
}

pub fn random_tensor(grid: &HalfSpaceGrid, domain: Domain, spec: &BandSpec, seed: u64) -> TensorField {
    let mut r = rng(seed);
    let n = grid.n();
    let parts: Vec<Vec<_>> = (0..n)
        .map(|_| (0..n).map(|_| space_time(&mut r, grid, spec, domain == Domain::WholeSpace)).collect())
        .collect();
    TensorField::from_fn(grid, domain, |x, t| {
        let mut v = [[0.0; 3]; 3];
        for (k, row) in parts.iter().enumerate() {
            for (i, p) in row.iter().enumerate() {
                v[k][i] = eval_st(p, x, t);
            }
        }
        v
    })
}

/// Random divergence-free initial data vanishing on the wall:
/// `h = (∂_nψ, −∂_1ψ)` (n = 2) or `(∂_nψ, ∂_nχ, −∂_1ψ − ∂_2χ)` (n = 3) with
/// potentials `cos(k·x' + φ) x_n² e^{−s x_n²}`.
pub fn random_solenoidal(grid: &HalfSpaceGrid, spec: &BandSpec, seed: u64) -> VectorField {
    solenoidal(grid, spec, seed, true)
}

/// Divergence-free field whose normal component does not vanish on the wall:
/// the same construction with potentials `cos(k·x' + φ) e^{−s x_n²}`.
pub fn random_solenoidal_open(grid: &HalfSpaceGrid, spec: &BandSpec, seed: u64) -> VectorField {
    solenoidal(grid, spec, seed, false)
}

fn solenoidal(grid: &HalfSpaceGrid, spec: &BandSpec, seed: u64, closed: bool) -> VectorField {
    let mut r = rng(seed);
    let floor = 40.0 / grid.height().powi(2);
    let pots: Vec<(Series, Vec<(f64, f64)>)> = (0..grid.n() - 1)
        .map(|_| {
            let s = Series::new(&mut r, grid, spec);
            let prof = (0..spec.bumps.max(1))
                .map(|_| (r.sample::<f64, _>(StandardNormal), floor * r.gen_range(1.0..2.5)))
                .collect();
            (s, prof)
        })
        .collect();
    let n = grid.n();
    VectorField::stationary(grid, Domain::HalfSpace, |x| {
        let z = x[n - 1];
        let x2 = if n == 3 { x[1] } else { 0.0 };
        let mut v = [0.0; 3];
        for (a, (series, prof)) in pots.iter().enumerate() {
            let (b, db) = prof.iter().fold((0.0, 0.0), |(b, db), &(c, s)| {
                let e = (-s * z * z).exp();
                if closed {
                    (b + c * z * z * e, db + c * (2.0 * z - 2.0 * s * z * z * z) * e)
                } else {
                    (b + c * e, db - 2.0 * c * s * z * e)
                }
            });
            for tm in &series.terms {
                let arg = tm.wave[0] * x[0] + tm.wave[1] * x2 + tm.phase;
                v[a] += tm.amp * arg.cos() * db;
                v[n - 1] += tm.amp * tm.wave[a] * arg.sin() * b;
            }
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::divergence_check;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::uniform(2, 16, 6.0, 33, 0.5, 8).unwrap()
    }

    #[test]
    fn same_seed_same_function_on_any_grid() {
        let g = grid();
        let a = random_boundary(&g, 1, &BandSpec::default(), 7);
        let b = random_boundary(&g.refined(), 1, &BandSpec::default(), 7);
        for m in 0..g.tan_len() {
            for k in 0..g.nt() {
                assert_eq!(a.comp(0)[[m, k]], b.comp(0)[[2 * m, 2 * k]]);
            }
        }
        let c = random_boundary(&g, 1, &BandSpec::default(), 8);
        assert_ne!(a.comp(0), c.comp(0));
    }

    #[test]
    fn no_mean_mode() {
        let g = grid();
        let a = random_boundary(&g, 1, &BandSpec::default(), 3);
        for k in 0..g.nt() {
            assert!(a.comp(0).column(k).sum().abs() < 1e-10);
        }
    }

    #[test]
    fn vanishing_start() {
        let g = grid();
        let spec = BandSpec {
            vanish_at_start: true,
            ..BandSpec::default()
        };
        let a = random_vector(&g, Domain::HalfSpace, &spec, 3);
        assert!(a.time_slice(0).iter().all(|s| s.iter().all(|v| *v == 0.0)));
    }

    #[test]
    fn solenoidal_sample_is_divergence_free_and_vanishes_on_wall() {
        for n in [2, 3] {
            let g = HalfSpaceGrid::uniform(n, 16, 6.0, 49, 0.5, 2).unwrap();
            let h = random_solenoidal(&g, &BandSpec::default(), 11);
            let (div, thr) = divergence_check(&h).unwrap();
            assert!(div < thr, "{n}: {div} {thr}");
            let wall = h.time_slice(0);
            assert!(wall.iter().all(|c| c.column(0).iter().all(|v| v.abs() < 1e-14)));
            assert!(h.max_abs() > 0.0);
        }
    }
}
