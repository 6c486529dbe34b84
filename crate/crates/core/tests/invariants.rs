use lpcarleman::lp::{Grid, GridFunction, LittlewoodPaley, TimeSeries};
use lpcarleman::paraproduct::{paraproduct, remainder, tilde_remainder};
use lpcarleman::sampling::{band_limited, Profile};
use lpcarleman::verifiers::{commutator_ratio, mollify_time, verify_bernstein, LatticePoint};
use proptest::prelude::*;

fn field(seed: u64) -> GridFunction {
    band_limited(Grid::line(128).unwrap(), seed, &Profile::Flat)
}

fn close(x: &GridFunction, y: &GridFunction, tol: f64) -> bool {
    (x - y).l2_norm() <= tol * y.l2_norm().max(1.0)
}

type Bilinear = fn(&LittlewoodPaley, &GridFunction, &GridFunction) -> lpcarleman::Result<GridFunction>;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_are_bilinear(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000, c in -3.0f64..3.0) {
        let lp = LittlewoodPaley::default();
        let (a, a2, b) = (field(s1), field(s2 + 1000), field(s3 + 2000));
        let ops: [Bilinear; 3] = [paraproduct, remainder, tilde_remainder];
        for op in ops {
            let combined = op(&lp, &a.axpy(c, &a2).unwrap(), &b).unwrap();
            let split = op(&lp, &a, &b).unwrap().axpy(c, &op(&lp, &a2, &b).unwrap()).unwrap();
            prop_assert!(close(&combined, &split, 1e-12));
            let combined = op(&lp, &b, &a.axpy(c, &a2).unwrap()).unwrap();
            let split = op(&lp, &b, &a).unwrap().axpy(c, &op(&lp, &b, &a2).unwrap()).unwrap();
            prop_assert!(close(&combined, &split, 1e-12));
        }
    }

    #[test]
    fn bony_decomposition_recovers_the_product(s1 in 0u64..1000, s2 in 0u64..1000) {
        let lp = LittlewoodPaley::default();
        let (a, b) = (field(s1), field(s2 + 5000));
        let ab = a.product(&b).unwrap();
        let tab = paraproduct(&lp, &a, &b).unwrap();
        let tba = paraproduct(&lp, &b, &a).unwrap();
        let r = remainder(&lp, &a, &b).unwrap();
        let bony = tab.try_add(&tba).unwrap().try_add(&r).unwrap();
        prop_assert!(close(&bony, &ab, 1e-12));
        let tilde = tilde_remainder(&lp, &a, &b).unwrap();
        prop_assert!(close(&tilde, &tba.try_add(&r).unwrap(), 1e-12));
        prop_assert!(close(&tab.try_add(&tilde).unwrap(), &ab, 1e-12));
    }

    #[test]
    fn bernstein_ratios_stay_in_bounds(seed in 0u64..10_000, q in -1i32..=4) {
        let lp = LittlewoodPaley::default();
        let r = verify_bernstein(&lp, &field(seed), q).unwrap();
        prop_assert!(r.passed, "{:?}", r.samples);
    }

    #[test]
    fn commutator_ignores_constants_in_the_coefficient(
        s1 in 0u64..1000, s2 in 0u64..1000, c in -5.0f64..5.0, q in 0i32..=4, dq in -1i32..=1,
    ) {
        let lp = LittlewoodPaley::default();
        let (a, u) = (field(s1), field(s2 + 7000));
        let shifted = a.try_add(&GridFunction::constant(*a.grid(), c)).unwrap();
        let pt = LatticePoint { q, q_prime: q + 1, p: (q + dq).max(-1) };
        let r0 = commutator_ratio(&lp, &a, &u, pt).unwrap();
        let r1 = commutator_ratio(&lp, &shifted, &u, pt).unwrap();
        match (r0, r1) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-9 * x.max(1e-12)),
            (x, y) => prop_assert_eq!(x, y),
        }
    }

    #[test]
    fn mollifier_reproduces_constants(c in -10.0f64..10.0, k in 3i32..=6) {
        let grid = Grid::line(8).unwrap();
        let a = TimeSeries::sample(grid, 1.0, 1025, |_, _| c);
        let m = mollify_time(&a, 2f64.powi(-k)).unwrap();
        for (s, d) in m.smoothed.frames.iter().zip(&m.derivative.frames) {
            prop_assert!(s.values().iter().all(|z| (z.re - c).abs() <= 1e-12 * c.abs().max(1.0)));
            prop_assert!(d.linf_norm() <= 1e-9 * c.abs().max(1.0));
        }
    }
}
