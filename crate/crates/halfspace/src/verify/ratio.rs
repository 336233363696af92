//! Operator-ratio studies: sampled `‖Tf‖_out / ‖f‖_in` under grid refinement.

use ndarray::Axis;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::besov::{aniso_norm, besov_st_norm, gagliardo_time_norm, lp_norm, lp_norm_at, negative_order_norm, SpatialNorm};
use crate::core::{BesovIndex, BoundaryField, Domain, HalfSpaceGrid, VectorField};
use crate::error::{Error, Result};
use crate::potentials::{heat_semigroup, heat_trace, poisson_apply, t1_apply, t2_apply, volume_potential_whole};
use crate::stokes::build_w;

use super::sample::{random_boundary, random_solenoidal_open, random_tensor, random_vector, BandSpec};

/// Inputs whose norm falls below this are skipped.
const UNDERFLOW: f64 = 1e-250;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioTarget {
    /// `T1: Ḃ^{α−2,α/2−1}_q → Ḃ^{α,α/2}_q` on the whole space.
    T1,
    /// `T2: Ḃ^{α−1−1/q,(α−1)/2−1/2q}_q(wall) → Ḃ^{α,α/2}_q(ℝ^n_+)`.
    T2,
    /// `Γ_t*: Ḃ^{α−2/q}_q(ℝ^n) → Ḃ^{α,α/2}_q(ℝ^n × ℝ_+)`.
    HeatSemigroup,
    /// `Γ_t*·|wall: Ḃ^{α−2/q}_q(ℝ^n) → Ḃ^{α−1/q,α/2−1/2q}_q(wall)`.
    HeatTrace,
    /// `T1ℙ div: L^p(Ḃ^β_p) → Ḃ^{α,α/2}_q` at the auxiliary pair.
    VolumePotential,
    /// `P: Ḃ^{−1/q}_q(wall) → L^q(ℝ^n_+)`.
    PoissonLq,
    /// `P: Ḃ^{α−1/q}_q(wall) → Ḃ^α_q(ℝ^n_+)`.
    PoissonBesov,
    /// `u ↦ u_n|wall: L^q_σ(ℝ^n_+) → Ḃ^{−1/q}_q(wall)`.
    NormalTrace,
    /// `P: L^q(Ḃ^{α−1/q}_q) ∩ Ḃ^{α/2}_q(Ḃ^{−1/q}_q) → Ḃ^{α,α/2}_q(ℝ^n_+)`.
    PoissonTime,
    /// `g ↦ w: Ḃ^{α−1/q,α/2−1/2q}_{q(0)} → Ḃ^{α,α/2}_q(ℝ^n_+)`.
    StokesLayer,
}

impl RatioTarget {
    pub const ALL: [RatioTarget; 10] = [
        RatioTarget::T1,
        RatioTarget::T2,
        RatioTarget::HeatSemigroup,
        RatioTarget::HeatTrace,
        RatioTarget::VolumePotential,
        RatioTarget::PoissonLq,
        RatioTarget::PoissonBesov,
        RatioTarget::NormalTrace,
        RatioTarget::PoissonTime,
        RatioTarget::StokesLayer,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RatioTarget::T1 => "t1",
            RatioTarget::T2 => "t2",
            RatioTarget::HeatSemigroup => "heat_semigroup",
            RatioTarget::HeatTrace => "heat_trace",
            RatioTarget::VolumePotential => "volume_potential",
            RatioTarget::PoissonLq => "poisson_lq",
            RatioTarget::PoissonBesov => "poisson_besov",
            RatioTarget::NormalTrace => "normal_trace",
            RatioTarget::PoissonTime => "poisson_time",
            RatioTarget::StokesLayer => "stokes_layer",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

/// Ratios of one target on one grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioLevel {
    pub n_tan: usize,
    pub n_vert: usize,
    pub n_time: usize,
    /// `(seed, ratio)` for every sample that was not skipped.
    pub ratios: Vec<(u64, f64)>,
    /// Seeds whose input norm underflowed.
    pub skipped: Vec<u64>,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioStudy {
    pub target: RatioTarget,
    pub alpha: f64,
    pub q: f64,
    pub levels: Vec<RatioLevel>,
    /// Largest relative change of the max ratio between consecutive levels.
    pub drift: f64,
}

/// `‖f(·, t_0)‖_{L^q}` of a volume or boundary field at the first time node.
fn initial_lq(grid: &HalfSpaceGrid, domain: Domain, comps: &[ndarray::Array3<f64>], q: f64) -> f64 {
    let wz = domain.vertical_weights(grid);
    let area = grid.cell_area();
    let mut acc = 0.0;
    for c in comps {
        for ((_, j), v) in c.index_axis(Axis(2), 0).indexed_iter() {
            acc += area * wz[j] * v.abs().powf(q);
        }
    }
    acc.powf(1.0 / q)
}

fn one_comp(g: &BoundaryField, c: usize) -> Result<BoundaryField> {
    BoundaryField::new(g.grid().clone(), vec![g.comp_or_zero(c)])
}

/// `(‖f‖_in, ‖Tf‖_out)` for one seeded sample.
pub fn sample_ratio(target: RatioTarget, grid: &HalfSpaceGrid, index: &BesovIndex, spec: &BandSpec, seed: u64) -> Result<(f64, f64)> {
    let (a, q) = (index.alpha, index.q);
    let vanishing = BandSpec {
        vanish_at_start: true,
        ..*spec
    };
    match target {
        RatioTarget::T1 => {
            let f = random_vector(grid, Domain::WholeSpace, spec, seed);
            Ok((besov_st_norm(&f, a - 2.0, q)?, aniso_norm(&t1_apply(&f)?, a, q)?))
        }
        RatioTarget::T2 => {
            let g = random_boundary(grid, 1, &vanishing, seed);
            Ok((besov_st_norm(&g, a - 1.0 - 1.0 / q, q)?, aniso_norm(&t2_apply(&g)?, a, q)?))
        }
        RatioTarget::HeatSemigroup => {
            let h = random_vector(grid, Domain::WholeSpace, spec, seed);
            Ok((lp_norm_at(&h, 0, index.initial_order(), q, None)?, aniso_norm(&heat_semigroup(&h)?, a, q)?))
        }
        RatioTarget::HeatTrace => {
            let h = random_vector(grid, Domain::WholeSpace, spec, seed);
            Ok((
                lp_norm_at(&h, 0, index.initial_order(), q, None)?,
                besov_st_norm(&heat_trace(&h)?, index.boundary_order(), q)?,
            ))
        }
        RatioTarget::VolumePotential => {
            let (beta, p) = index.aux()?;
            let f = random_tensor(grid, Domain::WholeSpace, spec, seed);
            let n = grid.n();
            let mut input = 0.0;
            for k in 0..n {
                let row = VectorField::new(grid.clone(), Domain::WholeSpace, (0..n).map(|i| f.comp(k, i).clone()).collect())?;
                input += lp_norm(&row, beta, p, None)?.powf(p);
            }
            Ok((input.powf(1.0 / p), aniso_norm(&volume_potential_whole(&f)?, a, q)?))
        }
        RatioTarget::PoissonLq => {
            let f = random_boundary(grid, 1, spec, seed);
            let u = poisson_apply(&f)?;
            Ok((
                negative_order_norm(&f, 0, -1.0 / q, q)?,
                initial_lq(grid, Domain::HalfSpace, std::slice::from_ref(u.data()), q),
            ))
        }
        RatioTarget::PoissonBesov => {
            let f = random_boundary(grid, 1, spec, seed);
            Ok((lp_norm_at(&f, 0, index.boundary_order(), q, None)?, lp_norm_at(&poisson_apply(&f)?, 0, a, q, None)?))
        }
        RatioTarget::NormalTrace => {
            let u = random_solenoidal_open(grid, spec, seed);
            let n = grid.n();
            let un = crate::transforms::trace_boundary(&u)?;
            Ok((
                initial_lq(grid, Domain::HalfSpace, u.comps(), q),
                negative_order_norm(&one_comp(&un, n - 1)?, 0, -1.0 / q, q)?,
            ))
        }
        RatioTarget::PoissonTime => {
            let f = random_boundary(grid, 1, spec, seed);
            let input = lp_norm(&f, index.boundary_order(), q, None)?
                + gagliardo_time_norm(&f, 0.5 * a, q, SpatialNorm::Besov(-1.0 / q))?;
            Ok((input, aniso_norm(&poisson_apply(&f)?, a, q)?))
        }
        RatioTarget::StokesLayer => {
            let g = random_boundary(grid, grid.n() - 1, &vanishing, seed);
            Ok((besov_st_norm(&g, index.boundary_order(), q)?, aniso_norm(&build_w(&g)?, a, q)?))
        }
    }
}

fn level(target: RatioTarget, grid: &HalfSpaceGrid, index: &BesovIndex, spec: &BandSpec, seeds: &[u64]) -> Result<RatioLevel> {
    let results: Vec<Result<(u64, f64, f64)>> = seeds
        .par_iter()
        .map(|&s| sample_ratio(target, grid, index, spec, s).map(|(i, o)| (s, i, o)))
        .collect();
    let mut ratios = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        let (s, i, o) = r?;
        if !(i.is_finite() && i > UNDERFLOW) {
            skipped.push(s);
        } else {
            ratios.push((s, o / i));
        }
    }
    let max_ratio = ratios.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    Ok(RatioLevel {
        n_tan: grid.n_tan(),
        n_vert: grid.n_vert(),
        n_time: grid.n_time(),
        ratios,
        skipped,
        max_ratio,
    })
}

/// Samples `samples` seeds from `seed` on `base` and on `refinements`
/// successive 2× refinements of every axis.
pub fn operator_ratio_study(
    target: RatioTarget,
    base: &HalfSpaceGrid,
    index: &BesovIndex,
    spec: &BandSpec,
    seed: u64,
    samples: usize,
    refinements: usize,
) -> Result<RatioStudy> {
    if samples == 0 {
        return Err(Error::Argument("a ratio study needs at least one sample".into()));
    }
    let seeds: Vec<u64> = (0..samples as u64).map(|s| seed + s).collect();
    let mut grid = base.clone();
    let mut levels = Vec::with_capacity(refinements + 1);
    for r in 0..=refinements {
        if r > 0 {
            grid = grid.refined();
        }
        levels.push(level(target, &grid, index, spec, &seeds)?);
    }
    let drift = levels
        .windows(2)
        .map(|w| (w[1].max_ratio - w[0].max_ratio).abs() / w[0].max_ratio)
        .fold(0.0, f64::max);
    Ok(RatioStudy {
        target,
        alpha: index.alpha,
        q: index.q,
        levels,
        drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> HalfSpaceGrid {
        HalfSpaceGrid::uniform(2, 16, 6.0, 17, 0.5, 8).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for t in RatioTarget::ALL {
            assert_eq!(RatioTarget::from_name(t.name()), Some(t));
        }
        assert_eq!(RatioTarget::from_name("nope"), None);
    }

    #[test]
    fn ratios_are_homogeneous() {
        // Scaling the input by 10 scales both norms by 10.
        let g = grid();
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        let f = random_boundary(&g, 1, &BandSpec::default(), 4);
        let f10 = BoundaryField::new(g.clone(), vec![f.comp(0).mapv(|v| 10.0 * v)]).unwrap();
        let r1 = aniso_norm(&crate::potentials::poisson_apply(&f).unwrap(), 0.5, idx.q).unwrap()
            / lp_norm_at(&f, 0, idx.boundary_order(), idx.q, None).unwrap();
        let r10 = aniso_norm(&crate::potentials::poisson_apply(&f10).unwrap(), 0.5, idx.q).unwrap()
            / lp_norm_at(&f10, 0, idx.boundary_order(), idx.q, None).unwrap();
        assert!((r1 - r10).abs() < 1e-12 * r1);
    }

    #[test]
    fn max_ratio_grows_with_samples() {
        let g = grid();
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        let spec = BandSpec::default();
        let small = operator_ratio_study(RatioTarget::PoissonLq, &g, &idx, &spec, 1, 3, 0).unwrap();
        let large = operator_ratio_study(RatioTarget::PoissonLq, &g, &idx, &spec, 1, 6, 0).unwrap();
        assert!(large.levels[0].max_ratio >= small.levels[0].max_ratio);
        assert_eq!(&large.levels[0].ratios[..3], &small.levels[0].ratios[..]);
    }

    #[test]
    fn every_target_yields_finite_ratios() {
        let g = grid();
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        for t in RatioTarget::ALL {
            let (i, o) = sample_ratio(t, &g, &idx, &BandSpec::default(), 9).unwrap();
            assert!(i > 0.0 && i.is_finite() && o > 0.0 && o.is_finite(), "{t:?}: {i} {o}");
        }
    }
}
