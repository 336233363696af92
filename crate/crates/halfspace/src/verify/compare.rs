//! Fast spectral paths against the direct-quadrature oracles.

use ndarray::{ArrayView, Dimension};
use serde::{Deserialize, Serialize};

use crate::core::{Domain, HalfSpaceGrid};
use crate::error::Result;
use crate::potentials::{heat_trace, s_operator, t2_apply};
use crate::stokes::build_w;

use super::oracle::{oracle_heat_trace, oracle_s, oracle_t2, oracle_w, OracleKind};
use super::sample::{random_boundary, random_scalar, random_vector, BandSpec};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleComparison {
    pub kind: OracleKind,
    pub seed: u64,
    /// `‖fast − oracle‖_2 / ‖oracle‖_2` over all nodes.
    pub rel_gap: f64,
    pub oracle_norm: f64,
}

#[derive(Default)]
struct Acc {
    diff: f64,
    norm: f64,
}

impl Acc {
    fn add<D: Dimension>(&mut self, fast: ArrayView<f64, D>, oracle: ArrayView<f64, D>) {
        for (a, b) in fast.iter().zip(oracle.iter()) {
            self.diff += (a - b).powi(2);
            self.norm += b * b;
        }
    }

    fn rel(&self) -> f64 {
        if self.norm == 0.0 {
            self.diff.sqrt()
        } else {
            (self.diff / self.norm).sqrt()
        }
    }
}

/// Compare one fast operator with its oracle on a seeded random input.
pub fn compare_with_oracle(grid: &HalfSpaceGrid, kind: OracleKind, spec: &BandSpec, seed: u64) -> Result<OracleComparison> {
    let mut acc = Acc::default();
    match kind {
        OracleKind::T2 => {
            let g = random_boundary(grid, 1, spec, seed);
            let o = oracle_t2(&g)?;
            let f = t2_apply(&g)?;
            for (a, b) in f.comps().iter().zip(o.comps()) {
                acc.add(a.view(), b.view());
            }
        }
        OracleKind::HeatTrace => {
            let ext = random_vector(grid, Domain::WholeSpace, spec, seed);
            let o = oracle_heat_trace(&ext)?;
            let f = heat_trace(&ext)?;
            for (a, b) in f.comps().iter().zip(o.comps()) {
                acc.add(a.view(), b.view());
            }
        }
        OracleKind::Kij => {
            let g = random_boundary(grid, 1, spec, seed);
            let o = oracle_w(&g)?;
            let f = build_w(&g)?;
            for (a, b) in f.comps().iter().zip(o.comps()) {
                acc.add(a.view(), b.view());
            }
        }
        OracleKind::S => {
            let x = random_scalar(grid, Domain::HalfSpace, spec, seed);
            let o = oracle_s(&x)?;
            let f = s_operator(&x)?;
            acc.add(f.data().view(), o.data().view());
        }
    }
    Ok(OracleComparison {
        kind,
        seed,
        rel_gap: acc.rel(),
        oracle_norm: acc.norm.sqrt(),
    })
}

/// Every oracle on `samples` seeds starting at `seed`.
pub fn oracle_suite(grid: &HalfSpaceGrid, spec: &BandSpec, seed: u64, samples: usize) -> Result<Vec<OracleComparison>> {
    let mut out = Vec::new();
    for kind in OracleKind::ALL {
        for s in 0..samples as u64 {
            out.push(compare_with_oracle(grid, kind, spec, seed + s)?);
        }
    }
    Ok(out)
}
