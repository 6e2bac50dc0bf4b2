use folrank::groupring::{RingElem, RingMatrix};
use folrank::groups::GroupSpec;
use folrank::mmdim::{
    greedy_ball_packing, mmdim_estimate, packing_reports, separated_upper_bound, theta, theta_a_f, CirclePoint,
    SolenoidBoxPoint,
};
use folrank::ranks::EngineConfig;
use proptest::prelude::*;

proptest! {
    #[test]
    fn theta_is_a_metric(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        let (x, y, z) = (CirclePoint::new(a), CirclePoint::new(b), CirclePoint::new(c));
        prop_assert!(theta(x, y) >= 0.0 && theta(x, y) <= 0.5);
        prop_assert_eq!(theta(x, y), theta(y, x));
        prop_assert!(theta(x, z) <= theta(x, y) + theta(y, z) + 1e-12);
        prop_assert!(theta(x, x) == 0.0);
    }

    #[test]
    fn theta_a_f_is_translation_invariant(
        xs in prop::collection::vec(0.0f64..1.0, 6),
        ys in prop::collection::vec(0.0f64..1.0, 6),
        zs in prop::collection::vec(-2.0f64..2.0, 6),
    ) {
        let p = |v: &[f64]| SolenoidBoxPoint::from_values(2, 3, v).unwrap();
        let (x, y, z) = (p(&xs), p(&ys), p(&zs));
        let d = theta_a_f(&x, &y).unwrap();
        let shifted = theta_a_f(&x.add(&z).unwrap(), &y.add(&z).unwrap()).unwrap();
        prop_assert!((d - shifted).abs() < 1e-9);
        prop_assert!(theta_a_f(&x, &z).unwrap() <= d + theta_a_f(&y, &z).unwrap() + 1e-12);
    }

    #[test]
    fn lower_counts_respect_upper_bounds(
        coeffs in prop::collection::vec(-3i64..=3, 1..4),
        l in 1u64..6,
        seed in any::<u64>(),
    ) {
        let z = GroupSpec::zd(1);
        let terms: Vec<(i64, Vec<i64>)> = coeffs.iter().enumerate().map(|(i, &c)| (c, vec![i as i64])).collect();
        let refs: Vec<(i64, &[i64])> = terms.iter().map(|(c, g)| (*c, &g[..])).collect();
        let f = RingMatrix::scalar(RingElem::from_ints(&z, &refs).unwrap());
        let cfg = EngineConfig { max_samples: 200, seed, ..EngineConfig::default() };
        let window = z.folner_set(l).unwrap();
        for r in packing_reports(&f, &window, &[0.5, 0.25, 0.1], &cfg).unwrap() {
            prop_assert!(r.lower_log <= r.upper_log + 1e-9, "{:?}", r);
        }
    }
}

#[test]
fn upper_bound_rejects_bad_epsilon() {
    let z = GroupSpec::zd(1);
    let f = RingMatrix::zero(&z, 1, 1);
    let w = z.folner_set(2).unwrap();
    for eps in [0.0, 1.0, -0.5, 2.0] {
        assert!(separated_upper_bound(&f, &w, eps).is_err());
    }
    let rational = RingMatrix::scalar(RingElem::constant(&z, folrank::rational::ratio(1, 2)));
    assert!(separated_upper_bound(&rational, &w, 0.5).is_err());
}

#[test]
fn ball_packings_obey_the_volume_bound() {
    for k in 1..=4 {
        for eps in [0.5, 0.25] {
            let count = greedy_ball_packing(k, eps, 2000, k as u64);
            assert!(count as f64 <= (1.0 + 2.0 / eps).powi(k as i32));
            assert!(count as f64 >= (1.0 / eps).powi(k as i32));
        }
    }
}

#[test]
fn estimates_over_z2() {
    let z2 = GroupSpec::zd(2);
    let f = RingMatrix::zero(&z2, 1, 1);
    let est =
        mmdim_estimate(&f, &[2, 3], &[0.25, 0.125], &EngineConfig { max_samples: 200, ..EngineConfig::default() })
            .unwrap();
    assert!(est.contains(1.0), "{:?}", (est.lower, est.upper));
    let two = RingMatrix::scalar(RingElem::from_ints(&z2, &[(2, &[0, 0])]).unwrap());
    let est = mmdim_estimate(&two, &[2, 3], &[0.25, 0.125], &EngineConfig::default()).unwrap();
    assert!(est.contains(0.0), "{:?}", (est.lower, est.upper));
    assert!(mmdim_estimate(&two, &[3, 2], &[0.25], &EngineConfig::default()).is_err());
}
