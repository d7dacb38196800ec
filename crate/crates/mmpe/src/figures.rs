//! Data series for the standard figures: orthogonality counterexamples,
//! interpolation bounds, Ozarow–Wyner gaps and bounds on the constrained MMSE.

use crate::bounds::{mn_bound_r_sweep, mn_main_bound, transition_width, InterpolationTerms, MrSource};
use crate::engine::{diagnostics_residuals, mmpe_scalar, TestFn};
use crate::error::{MmpeError, Result};
use crate::infometrics::{
    capacity_matched_levels, mutual_information_scalar, ow_gap_generalized, ow_gap_original, shaping_loss_bits, OwOptions,
    OwVariant,
};
use crate::model::InputDistribution;
use crate::table::{Cell, Table};

/// Figure identifiers accepted by [`figure`].
pub const FIGURES: [&str; 6] = ["fig1a", "fig1b", "fig2", "fig3", "fig4a", "fig4b"];

/// Orders used by the gap figure.
pub const GAP_ORDERS: [f64; 3] = [2.0, 4.0, 6.0];

/// `k` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![a];
    }
    (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()
}

/// Grid `a, a+step, …` up to `b` (inclusive within rounding).
pub fn range_grid(a: f64, step: f64, b: f64) -> Vec<f64> {
    let k = ((b - a) / step + 1e-9).floor() as usize;
    (0..=k).map(|i| a + step * i as f64).collect()
}

/// Build a figure's data by id.
pub fn figure(id: &str) -> Result<Table> {
    match id {
        "fig1a" => fig1(&InputDistribution::bpsk()),
        "fig1b" => fig1(&InputDistribution::asym_pair()),
        "fig2" => fig2(&linspace(0.02, 0.98, 49)),
        "fig3" => fig3(&range_grid(3.0, 0.5, 25.0)),
        "fig4a" => fig4(0.01, &[1], &range_grid(0.05, 0.05, 8.0)),
        "fig4b" => fig4(0.05, &[1, 10, 40, 160], &range_grid(0.05, 0.05, 8.0)),
        other => Err(MmpeError::Parse(format!("unknown figure '{other}'; available: {}", FIGURES.join(", ")))),
    }
}

/// Residuals of the optimal estimator over `p ∈ [1.05, 4]` at snr = 1.
pub fn fig1(dist: &InputDistribution) -> Result<Table> {
    let mut t = Table::new(&["p", "classical", "bias", "orthogonality_max"]);
    for p in range_grid(1.05, 0.05, 4.0) {
        let r = diagnostics_residuals(dist, 1.0, p, &TestFn::ALL)?;
        let worst = r.orthogonality.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        t.push(vec![p.into(), r.classical.into(), r.bias.into(), worst.into()]);
    }
    Ok(t)
}

/// Interpolation bounds on `mmpe^{1/q}(q)` for BPSK, p = 2, r = 8, snr = 1.
pub fn fig2(alphas: &[f64]) -> Result<Table> {
    let dist = InputDistribution::bpsk();
    let (snr, p, r) = (1.0, 2.0, 8.0);
    let terms = InterpolationTerms::compute(&dist, snr, p, r)?;
    let mut t = Table::new(&["alpha", "q", "true", "holder_fr", "holder_fp", "holder_mid", "conjecture"]);
    for &a in alphas {
        let q = 1.0 / (a / p + (1.0 - a) / r);
        let truth = mmpe_scalar(&dist, snr, q)?.value.powf(1.0 / q);
        let b = terms.bounds(q)?;
        let mut row: Vec<Cell> = vec![a.into(), q.into(), truth.into()];
        row.extend(b.iter().map(|x| Cell::Num(x.value)));
        t.push(row);
    }
    Ok(t)
}

/// Gap terms for capacity-matched odd-integer PAM over an snr grid.
pub fn fig3(snrs: &[f64]) -> Result<Table> {
    let mut t = Table::new(&[
        "snr",
        "levels",
        "entropy",
        "shaping_loss",
        "gap_lmmse",
        "gap_mmse",
        "gap_p2",
        "gap_p4",
        "gap_p6",
        "lower_lmmse",
        "lower_p6",
        "exact_mi",
    ]);
    for &snr in snrs {
        let levels = capacity_matched_levels(snr);
        if levels < 2 {
            continue;
        }
        let dist = InputDistribution::pam(levels)?;
        let lm = ow_gap_original(&dist, snr, OwVariant::Lmmse, false)?;
        let mm = ow_gap_original(&dist, snr, OwVariant::Mmse, false)?;
        let gen: Vec<_> =
            GAP_ORDERS.iter().map(|&p| ow_gap_generalized(&dist, snr, p, &OwOptions::default())).collect::<Result<_>>()?;
        let mi = mutual_information_scalar(&dist, snr)?;
        t.push(vec![
            snr.into(),
            levels.into(),
            lm.entropy.into(),
            shaping_loss_bits().into(),
            lm.gap.into(),
            mm.gap.into(),
            gen[0].gap.into(),
            gen[1].gap.into(),
            gen[2].gap.into(),
            lm.lower_bound.into(),
            gen[2].lower_bound.into(),
            mi.into(),
        ]);
    }
    Ok(t)
}

/// Upper envelope on the constrained MMSE at `snr0 = 5`.
pub fn fig4(beta: f64, ns: &[usize], snrs: &[f64]) -> Result<Table> {
    let snr0 = 5.0;
    let mut t = Table::new(&["n", "snr", "gaussian", "r_sweep", "main", "envelope"]);
    for &n in ns {
        for &snr in snrs {
            let g = 1.0 / (1.0 + snr);
            let row: Vec<Cell> = if snr <= snr0 {
                let a = mn_bound_r_sweep(beta, snr, snr0, n, &MrSource::NoiseBound)?.value;
                let b = mn_main_bound(beta, snr, snr0, n)?.value;
                vec![n.into(), snr.into(), g.into(), a.into(), b.into(), g.min(a).min(b).into()]
            } else {
                let s = beta / (1.0 + beta * snr);
                vec![n.into(), snr.into(), g.into(), Cell::Empty, Cell::Empty, s.into()]
            };
            t.push(row);
        }
    }
    Ok(t)
}

/// Transition widths of both constrained-MMSE bounds at `snr0 = 5`.
pub fn transition_widths(beta: f64, ns: &[usize]) -> Result<Table> {
    let snr0 = 5.0;
    let mut t = Table::new(&["n", "width_r_sweep", "width_main"]);
    for &n in ns {
        let a = transition_width(|s| Ok(mn_bound_r_sweep(beta, s, snr0, n, &MrSource::NoiseBound)?.value), snr0)?;
        let b = transition_width(|s| Ok(mn_main_bound(beta, s, snr0, n)?.value), snr0)?;
        t.push(vec![n.into(), a.into(), b.into()]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(range_grid(0.0, 0.5, 2.0), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(range_grid(1.05, 0.05, 4.0).len(), 60);
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn unknown_figure() {
        assert!(figure("fig9").unwrap_err().to_string().contains("fig4b"));
    }

    #[test]
    fn fig4_envelope_is_continuous_at_snr0() {
        let t = fig4(0.05, &[10], &[5.0]).unwrap();
        let env = t.numbers("envelope").unwrap()[0];
        assert!((env - 0.05 / 1.25).abs() < 1e-12);
    }
}
