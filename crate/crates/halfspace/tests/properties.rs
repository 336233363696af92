use halfspace::besov::data_norm_M0;
use halfspace::core::{inner3, parabolic_scale, BesovIndex, Domain, HalfSpaceGrid, IterationTrace, VectorField};
use halfspace::potentials::{heat_trace, t1_apply, t1_star_apply};
use halfspace::stokes::compat_defect;
use halfspace::transforms::{extend_solenoidal, helmholtz_project};
use halfspace::verify::{random_boundary, random_solenoidal, random_vector, BandSpec};
use proptest::prelude::*;

fn grid() -> HalfSpaceGrid {
    HalfSpaceGrid::uniform(2, 16, 8.0, 33, 0.5, 8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn projection_is_idempotent(seed in 0u64..1_000_000) {
        let g = grid();
        let f = random_vector(&g, Domain::WholeSpace, &BandSpec::default(), seed);
        let p = helmholtz_project(&f).unwrap();
        let pp = helmholtz_project(&p).unwrap();
        prop_assert!(pp.sub(&p).unwrap().lq_norm(2.0) <= 1e-13 * f.lq_norm(2.0));
    }

    #[test]
    fn t1_pair_is_adjoint(seed in 0u64..1_000_000) {
        let g = grid();
        let spec = BandSpec::default();
        let f = random_vector(&g, Domain::WholeSpace, &spec, seed);
        let h = random_vector(&g, Domain::WholeSpace, &spec, seed + 1);
        let ip = |a: &VectorField, b: &VectorField| -> f64 {
            (0..2).map(|c| inner3(&g, Domain::WholeSpace, &a.comp(c).view(), &b.comp(c).view())).sum()
        };
        let lhs = ip(&t1_apply(&f).unwrap(), &h);
        let rhs = ip(&f, &t1_star_apply(&h).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1e-300));
    }

    #[test]
    fn heat_trace_data_are_compatible(seed in 0u64..1_000_000) {
        let g = grid();
        let idx = BesovIndex::critical(2, 0.5).unwrap();
        let h = random_solenoidal(&g, &BandSpec::default(), seed);
        let gtr = heat_trace(&extend_solenoidal(&h).map_err(|e| TestCaseError::fail(e.to_string()))?.field).unwrap();
        let c = compat_defect(&h, &gtr, &idx).unwrap();
        prop_assert_eq!(c.defect.max_abs(), 0.0);
    }

    #[test]
    fn critical_data_norm_is_scale_free(seed in 0u64..1_000, up in proptest::bool::ANY) {
        let g = grid();
        let idx = BesovIndex::critical(2, 1.0).unwrap();
        let spec = BandSpec::default();
        let h = random_solenoidal(&g, &spec, seed);
        let b = random_boundary(&g, 2, &spec, seed + 7);
        let lambda = if up { 2.0 } else { 0.5 };
        let (hl, bl) = parabolic_scale(&h, &b, lambda).unwrap();
        let m0 = data_norm_M0(&h, &b, &idx).unwrap().total;
        let ml = data_norm_M0(&hl, &bl, &idx).unwrap().total;
        prop_assert!((ml - m0).abs() <= 0.03 * m0);
    }

    #[test]
    fn trace_ratios_follow_increments(incs in proptest::collection::vec(1e-6f64..10.0, 1..12)) {
        let mut t = IterationTrace::new(1.0, 0.0, 1.0);
        for &i in &incs {
            t.push(1.0, i);
        }
        let r = t.ratios();
        prop_assert_eq!(r.len(), incs.len() - 1);
        for (k, v) in r.iter().enumerate() {
            prop_assert!((v - incs[k + 1] / incs[k]).abs() <= 1e-15 * v);
        }
        let tail = r.iter().rev().take_while(|&&x| x >= 1.0).count();
        prop_assert_eq!(t.trailing_non_contracting(), tail);
    }
}
