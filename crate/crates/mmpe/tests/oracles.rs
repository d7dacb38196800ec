//! Cross-checks against independent references: `statrs` special functions
//! and values frozen from a separate high-precision quadrature.

use mmpe::engine::{mmpe_scalar, McOptions};
use mmpe::infometrics::{mutual_information_scalar, shaping_loss_bits};
use mmpe::model::InputDistribution;
use mmpe::specfun::{gamma, gaussian_norm_moment, generalized_q, ln_gamma, q_function};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::{erf, gamma as sg};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn gamma_matches_statrs() {
    for k in 1..200 {
        let x = 0.05 + 0.37 * k as f64;
        assert!(close(ln_gamma(x), sg::ln_gamma(x), 1e-13), "ln_gamma({x})");
        if x < 100.0 {
            assert!(close(gamma(x) / sg::gamma(x), 1.0, 1e-12), "gamma({x})");
        }
    }
}

#[test]
fn generalized_q_matches_statrs() {
    for x in [0.5f64, 1.0, 2.5, 7.0, 32.0, 200.0] {
        for k in 1..60 {
            let a = 0.25 * k as f64 * x.sqrt() + 0.1 * k as f64;
            let ours = generalized_q(x, a).unwrap();
            let theirs = sg::gamma_ur(x, a);
            assert!((ours - theirs).abs() < 1e-12, "Q̄({x}; {a}): {ours} vs {theirs}");
        }
    }
}

#[test]
fn q_function_matches_normal_tail() {
    let n = Normal::new(0.0, 1.0).unwrap();
    for k in -80..=80 {
        let x = 0.1 * k as f64;
        let tail = n.sf(x);
        let via_erfc = 0.5 * erf::erfc(x / std::f64::consts::SQRT_2);
        assert!((q_function(x) - tail).abs() < 2e-10, "Q({x}): {} vs {tail}", q_function(x));
        assert!((q_function(x) - via_erfc).abs() < 2e-10, "Q({x}): {} vs {via_erfc}", q_function(x));
        assert!((q_function(x) + q_function(-x) - 1.0).abs() < 4e-16);
    }
    // statrs is good to about 1e-10 here; these come from 30-digit arithmetic.
    for (x, q) in [
        (1.0, 0.158_655_253_931_457_05),
        (3.8, 7.234_804_392_511_997e-5),
        (4.2, 1.334_574_901_590_633_8e-5),
        (-2.2, 0.986_096_552_486_501_4),
        (10.0, 7.619_853_024_160_527e-24),
    ] {
        assert!(close(q_function(x), q, 1e-14), "Q({x}) = {} vs {q}", q_function(x));
    }
}

#[test]
fn gaussian_moments_frozen() {
    assert!((gaussian_norm_moment(1, 1.0).unwrap() - 0.797_884_560_802_865_4).abs() < 1e-14);
    assert!((gaussian_norm_moment(1, 4.0).unwrap() - 3.0).abs() < 1e-13);
    assert!((gaussian_norm_moment(2, 1.0).unwrap() - 0.626_657_068_657_750_1).abs() < 1e-14);
    assert!((gaussian_norm_moment(3, 2.0).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn bpsk_values_frozen() {
    let b = InputDistribution::bpsk();
    assert!((mmpe_scalar(&b, 1.0, 2.0).unwrap().value - 0.449_599_509_206_673).abs() < 1e-8);
    assert!((mmpe_scalar(&b, 4.0, 2.0).unwrap().value - 0.068_597_408_790_738_72).abs() < 1e-8);
    assert!((mmpe_scalar(&b, 1.0, 3.0).unwrap().value - 0.501_287_798_765_805).abs() < 1e-8);
    assert!((mmpe_scalar(&b, 2.0, 4.0).unwrap().value - 0.288_419_001_665_345_84).abs() < 1e-8);
    assert!((mutual_information_scalar(&b, 1.0).unwrap() - 0.485_944_154_132_935_24).abs() < 1e-8);
}

#[test]
fn shaping_loss_frozen() {
    assert!((shaping_loss_bits() - 0.254_614_334_8).abs() < 1e-10);
}

#[test]
fn vector_mc_agrees_with_projection() {
    let b = InputDistribution::pmone_vector(3).unwrap();
    let quad = mmpe::engine::mmpe(&b, 1.0, 3.0, McOptions::default()).unwrap().value;
    let mc = mmpe::engine::mmpe_vector_mc(&b, 1.0, 3.0, McOptions::new(20_000, 7)).unwrap();
    assert!((mc.value - quad).abs() < 4.0 * mc.stderr, "{} vs {quad} ± {}", mc.value, mc.stderr);
}
