//! wasm-bindgen exports behind `www/index.html`.
//!
//! Every function returns a flat `Float64Array` so the page can plot it
//! without any glue beyond the generated bindings.

use mmpe::engine::{mmpe, McOptions};
use mmpe::estimators::two_point_estimator;
use mmpe::figures::linspace;
use mmpe::infometrics::{capacity_matched_levels, mutual_information_scalar, ow_gap_generalized, ow_gap_original, OwOptions, OwVariant};
use mmpe::model::InputDistribution;
use mmpe::presets::preset;
use wasm_bindgen::prelude::*;

fn js(e: mmpe::MmpeError) -> JsError {
    JsError::new(&e.to_string())
}

fn grid(max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    if !(max > 0.0) || points < 2 {
        return Err(JsError::new("need a positive range and at least two points"));
    }
    Ok(linspace(0.0, max, points))
}

/// `mmpe(snr)` of a scalar preset on `[0, snr_max]`.
#[wasm_bindgen]
pub fn mmpe_curve(name: &str, p: f64, snr_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let d = preset(name, 1).map_err(js)?;
    let mc = McOptions::new(20_000, mmpe::engine::DEFAULT_SEED);
    grid(snr_max, points)?.into_iter().map(|s| mmpe(&d, s, p, mc).map(|e| e.value).map_err(js)).collect()
}

/// Optimal two-point estimator `f(y)` on `[-y_max, y_max]`.
#[wasm_bindgen]
pub fn two_point_curve(x1: f64, x2: f64, q: f64, snr: f64, p: f64, y_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    if points < 2 || !(y_max > 0.0) {
        return Err(JsError::new("need a positive range and at least two points"));
    }
    linspace(-y_max, y_max, points).into_iter().map(|y| two_point_estimator(x1, x2, q, snr, p, y).map_err(js)).collect()
}

/// Capacity-matched PAM at one snr: `[levels, H, gap_lmmse, gap_p, lower_lmmse, lower_p, exact_mi]`.
#[wasm_bindgen]
pub fn pam_gaps(snr: f64, p: f64) -> Result<Vec<f64>, JsError> {
    let levels = capacity_matched_levels(snr);
    if levels < 2 {
        return Err(JsError::new("snr too low for a two-level constellation"));
    }
    let d = InputDistribution::pam(levels).map_err(js)?;
    let lm = ow_gap_original(&d, snr, OwVariant::Lmmse, false).map_err(js)?;
    let g = ow_gap_generalized(&d, snr, p, &OwOptions::default()).map_err(js)?;
    let mi = mutual_information_scalar(&d, snr).map_err(js)?;
    Ok(vec![levels as f64, lm.entropy, lm.gap, g.gap, lm.lower_bound, g.lower_bound, mi])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_curve() {
        let v = mmpe_curve("gaussian", 2.0, 4.0, 5).unwrap();
        for (s, m) in [0.0, 1.0, 2.0, 3.0, 4.0].iter().zip(&v) {
            assert!((m - 1.0 / (1.0 + s)).abs() < 1e-12);
        }
    }

    #[test]
    fn bpsk_estimator_is_tanh() {
        let v = two_point_curve(-1.0, 1.0, 0.5, 1.0, 3.0, 2.0, 3).unwrap();
        assert!((v[0] + 1f64.tanh()).abs() < 1e-12 && v[1].abs() < 1e-15);
    }

    #[test]
    fn gaps_bound_mutual_information() {
        let g = pam_gaps(15.0, 6.0).unwrap();
        assert_eq!(g[0], 4.0);
        assert!(g[4] <= g[6] + 1e-9 && g[5] <= g[6] + 1e-9);
    }
}
