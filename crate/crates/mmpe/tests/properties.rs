use mmpe::bounds::{chain_lower_bound, kappa_nt, scpp_bound};
use mmpe::engine::{mmpe_scalar, p_error_of};
use mmpe::estimators::{numeric_pointwise_estimator, two_point_estimator, EstimatorSpec};
use mmpe::model::{posterior_scalar, InputDistribution, Posterior};
use mmpe::specfun::generalized_q;
use mmpe::table::fmt_sig;
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn q_bar_is_a_decreasing_probability(x in 0.1f64..80.0, a in 0.0f64..30.0, da in 0.01f64..3.0) {
        let q0 = generalized_q(x, a).unwrap();
        let q1 = generalized_q(x, a + da).unwrap();
        prop_assert!((0.0..=1.0).contains(&q0));
        prop_assert!(q1 <= q0 + 1e-15);
    }

    #[test]
    fn posterior_weights_sum_to_one(
        x1 in -4.0f64..0.0, x2 in 0.1f64..4.0, q in 0.01f64..0.99, snr in 0.0f64..20.0, y in -10.0f64..10.0,
    ) {
        let d = InputDistribution::two_point(x1, x2, q).unwrap();
        match posterior_scalar(&d, snr, y).unwrap() {
            Posterior::Weighted { weights, .. } => {
                prop_assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                prop_assert!(weights.iter().all(|w| *w >= 0.0));
            }
            Posterior::Gaussian { .. } => prop_assert!(false, "atoms give a weighted posterior"),
        }
    }

    #[test]
    fn fmt_sig_roundtrips_to_twelve_digits(v in prop::num::f64::NORMAL) {
        let back: f64 = fmt_sig(v, 12).parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-11 * v.abs(), "{v} -> {back}");
    }

    #[test]
    fn kappa_is_at_least_one_in_one_dimension(n in 1usize..200, t in 0.0f64..1.0) {
        prop_assert!(kappa_nt(1, t).unwrap() >= 1.0 - 1e-12);
        prop_assert!(kappa_nt(n, t).unwrap() > 0.0);
        prop_assert!((kappa_nt(n, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scpp_bound_decreases_in_snr(
        beta in 0.01f64..2.0, snr0 in 0.1f64..5.0, s1 in 0.0f64..5.0, ds in 0.01f64..5.0, p in 1.0f64..5.0, n in 1usize..8,
    ) {
        let a = scpp_bound(beta, snr0, snr0 + s1, p, n).unwrap().value;
        let b = scpp_bound(beta, snr0, snr0 + s1 + ds, p, n).unwrap().value;
        prop_assert!(b <= a * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(cfg(16))]

    #[test]
    fn two_point_estimator_minimizes_posterior_risk(
        x1 in -3.0f64..-0.2, x2 in 0.2f64..3.0, q in 0.05f64..0.95, snr in 0.1f64..6.0, p in 1.2f64..5.0, y in -4.0f64..4.0,
    ) {
        let closed = two_point_estimator(x1, x2, q, snr, p, y).unwrap();
        let d = InputDistribution::two_point(x1, x2, q).unwrap();
        let numeric = numeric_pointwise_estimator(&d, snr, p, y).unwrap().v;
        prop_assert!((closed - numeric).abs() < 1e-6 * (x2 - x1), "{closed} vs {numeric}");
        prop_assert!((x1..=x2).contains(&closed));
    }

    #[test]
    fn two_point_mmpe_decreases_in_snr(
        x1 in -3.0f64..-0.2, x2 in 0.2f64..3.0, q in 0.05f64..0.95, snr in 0.0f64..4.0, ds in 0.1f64..2.0, p in 1.0f64..4.0,
    ) {
        let d = InputDistribution::two_point(x1, x2, q).unwrap();
        let a = mmpe_scalar(&d, snr, p).unwrap().value;
        let b = mmpe_scalar(&d, snr + ds, p).unwrap().value;
        prop_assert!(b <= a + 1e-7, "{a} then {b}");
    }

    #[test]
    fn chain_and_conditional_mean_bracket_mmpe(
        x1 in -3.0f64..-0.2, x2 in 0.2f64..3.0, q in 0.05f64..0.95, snr in 0.1f64..4.0, lo in 1.0f64..2.5, step in 0.5f64..2.0,
    ) {
        let d = InputDistribution::two_point(x1, x2, q).unwrap();
        let p = lo + step;
        let chain = chain_lower_bound(mmpe_scalar(&d, snr, lo).unwrap().value, 1, p, lo).unwrap();
        let mid = mmpe_scalar(&d, snr, p).unwrap().value;
        let cm = p_error_of(&EstimatorSpec::ConditionalMean { dist: d.clone(), snr }, &d, snr, p).unwrap();
        prop_assert!(chain <= mid * (1.0 + 1e-6) + 1e-9, "chain {chain} > {mid}");
        prop_assert!(mid <= cm * (1.0 + 1e-6) + 1e-9, "{mid} > conditional mean {cm}");
    }
}
