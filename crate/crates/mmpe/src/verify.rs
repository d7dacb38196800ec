//! Self-check suite: every module's invariants evaluated numerically, one
//! report line per check.

use crate::bounds::{
    chain_lower_bound, complementary_scpp, derivative_sandwich, discrete_input_bound, gaussian_hardest, kappa_nt,
    log_convexity_gap, mn_bound_r_sweep, mn_main_bound, phase_transition_binary, recover_beta, scpp_bound,
    scpp_bound_with_constant, scpp_constant, transition_width, trivial_bounds, BoundReport, Direction,
    InterpolationTerms, MrSource,
};
use crate::engine::{
    change_of_measure_optimal, conditional_mean_error, conditional_mmpe, diagnostics_residuals, expect_over_output,
    mmpe, mmpe_gaussian_closed_form, mmpe_scalar, monte_carlo, p_error_of, McOptions, MmpeEstimate, TestFn,
    OUTER_TOL,
};
use crate::error::Result;
use crate::estimators::{numeric_pointwise_estimator, EstimatorSpec};
use crate::figures::{fig3, range_grid};
use crate::infometrics::{
    entropy_bound, g1_asymptotic_bound, g2_ball, mutual_information_scalar, ow_gap_generalized, ow_gap_original,
    G1Mode, OwOptions, OwVariant,
};
use crate::model::{distance_stats, posterior_scalar, sample_channel, ChannelConfig, InputDistribution, Posterior};
use crate::specfun::{gaussian_norm_moment, generalized_q, ln_generalized_q, q_function};
use rand::Rng;
use rand_distr::StandardNormal;
use std::collections::BTreeMap;
use std::fmt;

/// Grid density of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Reduced grids and sample counts.
    Fast,
    /// The full configuration sweep.
    Full,
}

/// Settings for [`verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub suite: Suite,
    /// Replace `c_p` in the single-crossing dominance checks (fault injection).
    pub cp_override: Option<f64>,
    pub mc: McOptions,
}

impl VerifyOptions {
    pub fn new(suite: Suite) -> Self {
        let samples = match suite {
            Suite::Fast => 200_000,
            Suite::Full => 1_000_000,
        };
        Self { suite, cp_override: None, mc: McOptions::new(samples, crate::engine::DEFAULT_SEED) }
    }
}

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Slack by which the check passed; negative on failure, NaN if not numeric.
    pub margin: f64,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, margin: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed: margin >= 0.0, margin, detail: detail.into() }
    }

    fn flag(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, margin: f64::NAN, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.margin.is_nan() {
            write!(f, "{tag} {:<36} margin=-          {}", self.name, self.detail)
        } else {
            write!(f, "{tag} {:<36} margin={:<10.3e} {}", self.name, self.margin, self.detail)
        }
    }
}

/// All checks of one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {} passed, {} failed", self.checks.len(), self.checks.len() - failed, failed)
    }
}

/// Run the suite. Numerical errors inside a check are reported as failures.
pub fn verify(opts: &VerifyOptions) -> Report {
    let full = opts.suite == Suite::Full;
    let mut report = Report::default();
    let groups: Vec<(&str, Box<dyn Fn() -> Result<Vec<Check>>>)> = vec![
        ("specfun::q_bar_range_monotone", Box::new(q_bar_range_monotone)),
        ("specfun::q_bar_half_identity", Box::new(q_bar_half_identity)),
        ("specfun::gaussian_second_moment", Box::new(move || gaussian_second_moment(full))),
        ("specfun::gamma_ratio_limits", Box::new(gamma_ratio_limits)),
        ("model::posterior_normalized", Box::new(posterior_normalized)),
        ("model::prior_at_zero_snr", Box::new(prior_at_zero_snr)),
        ("model::sampling_vs_quadrature", Box::new(move || sampling_vs_quadrature(opts.mc))),
        ("estimators::orthogonality", Box::new(orthogonality)),
        ("estimators::classical_orthogonality", Box::new(classical_orthogonality)),
        ("estimators::linearity", Box::new(linearity)),
        ("estimators::nonnegativity", Box::new(nonnegativity)),
        ("engine::monotone_in_snr", Box::new(move || monotone_in_snr(full))),
        ("engine::continuity_in_p", Box::new(continuity_in_p)),
        ("engine::continuity_in_snr", Box::new(continuity_in_snr)),
        ("engine::noise_input_equivalence", Box::new(move || noise_input_equivalence(opts.mc))),
        ("engine::chain_ordering", Box::new(chain_ordering)),
        ("engine::gaussian_closed_form", Box::new(gaussian_closed_form)),
        ("engine::observation_combining", Box::new(move || observation_combining(opts.mc))),
        ("engine::change_of_measure", Box::new(change_of_measure)),
        ("bounds::dominance", Box::new(move || dominance_checks(full, opts.cp_override, opts.mc))),
        ("bounds::scpp_endpoint", Box::new(scpp_endpoint)),
        ("bounds::kappa_at_least_one", Box::new(kappa_at_least_one)),
        ("bounds::log_convexity", Box::new(log_convexity)),
        ("bounds::interpolation_counterexample", Box::new(interpolation_counterexample)),
        ("bounds::r_sweep_width_scaling", Box::new(width_scaling)),
        ("bounds::phase_transition", Box::new(phase_transition)),
        ("bounds::derivative_sandwich", Box::new(move || sandwich(opts.mc))),
        ("infometrics::gap_sandwich", Box::new(move || gap_sandwich(full))),
        ("infometrics::entropy_bound_p2", Box::new(entropy_bound_p2)),
        ("infometrics::g1_asymptotic", Box::new(g1_asymptotic)),
        ("infometrics::gap_ordering", Box::new(move || gap_ordering(full))),
        ("infometrics::g2_ball_decay", Box::new(g2_ball_decay)),
    ];
    for (name, run) in groups {
        match run() {
            Ok(cs) => report.checks.extend(cs),
            Err(e) => report.checks.push(Check::flag(name, false, format!("error: {e}"))),
        }
    }
    report
}

fn one(c: Check) -> Result<Vec<Check>> {
    Ok(vec![c])
}

fn q_bar_range_monotone() -> Result<Vec<Check>> {
    let mut worst = f64::INFINITY;
    let mut in_range = true;
    for x in [0.5, 1.0, 2.5, 10.0, 50.0] {
        let mut prev = f64::INFINITY;
        for k in 0..=120 {
            let a = 0.5 * k as f64;
            let q = generalized_q(x, a)?;
            in_range &= (0.0..=1.0).contains(&q);
            let l = ln_generalized_q(x, a)?;
            worst = worst.min(prev - l);
            prev = l;
        }
    }
    let margin = if in_range { worst } else { -1.0 };
    one(Check::new("specfun::q_bar_range_monotone", margin, "Q̄ in [0,1], ln Q̄ strictly decreasing"))
}

fn q_bar_half_identity() -> Result<Vec<Check>> {
    let mut err: f64 = 0.0;
    for a in [0.0, 0.5, 1.0, 2.0, 4.0] {
        err = err.max((generalized_q(0.5, a * a)? - 2.0 * q_function(2f64.sqrt() * a)).abs());
    }
    one(Check::new("specfun::q_bar_half_identity", 1e-10 - err, format!("max err {err:.2e}")))
}

fn gaussian_second_moment(full: bool) -> Result<Vec<Check>> {
    let top = if full { 512 } else { 64 };
    let mut err: f64 = 0.0;
    for n in 1..=top {
        err = err.max((gaussian_norm_moment(n, 2.0)? - 1.0).abs());
    }
    one(Check::new("specfun::gaussian_second_moment", 1e-12 - err, format!("n <= {top}, max err {err:.2e}")))
}

/// `Q̄(x;0.8x)` increases to 1 monotonically; `x²·Q̄(x;1.2x)` is unimodal in
/// n and decays to 0.
fn gamma_ratio_limits() -> Result<Vec<Check>> {
    let ns: Vec<usize> = (2..=4000).step_by(2).collect();
    let mut lower_ok = true;
    let mut prev = 0.0;
    for &n in ns.iter().take_while(|&&n| n <= 400) {
        let x = n as f64 / 2.0;
        let v = generalized_q(x, 0.8 * x)?;
        lower_ok &= v > prev;
        prev = v;
    }
    let lower_end = generalized_q(2000.0, 1600.0)?;
    let seq: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let x = n as f64 / 2.0;
            Ok((2.0 * x.ln() + ln_generalized_q(x, 1.2 * x)?).exp())
        })
        .collect::<Result<_>>()?;
    let peak = seq.iter().enumerate().fold(0, |m, (i, v)| if *v > seq[m] { i } else { m });
    let unimodal = seq[..=peak].windows(2).all(|w| w[1] > w[0]) && seq[peak..].windows(2).all(|w| w[1] < w[0]);
    let tail = *seq.last().unwrap_or(&f64::NAN);
    Ok(vec![
        Check::flag(
            "specfun::gamma_ratio_lower_limit",
            lower_ok && 1.0 - lower_end < 1e-12,
            format!("increasing for n <= 400, 1 - value at n=4000 = {:.1e}", 1.0 - lower_end),
        ),
        Check::flag(
            "specfun::gamma_ratio_upper_limit",
            unimodal && tail < 1e-6,
            format!("peak at n = {}, value at n=4000 = {tail:.1e}", ns[peak]),
        ),
    ])
}

fn posterior_weights(p: &Posterior) -> Option<&[f64]> {
    match p {
        Posterior::Weighted { weights, .. } => Some(weights),
        Posterior::Gaussian { .. } => None,
    }
}

fn posterior_normalized() -> Result<Vec<Check>> {
    let mut err: f64 = 0.0;
    for d in [InputDistribution::bpsk(), InputDistribution::pam(4)?, InputDistribution::asym_pair()] {
        for snr in [0.0, 1.0, 16.0] {
            for k in -40..=40 {
                let post = posterior_scalar(&d, snr, 0.25 * k as f64)?;
                if let Some(w) = posterior_weights(&post) {
                    err = err.max((w.iter().sum::<f64>() - 1.0).abs());
                }
            }
        }
    }
    one(Check::new("model::posterior_normalized", 1e-12 - err, format!("max |Σw − 1| = {err:.1e}")))
}

fn prior_at_zero_snr() -> Result<Vec<Check>> {
    let mut tv: f64 = 0.0;
    for d in [InputDistribution::pam(4)?, InputDistribution::asym_pair()] {
        let a = d.as_atoms().expect("atoms");
        for y in [-3.0, 0.0, 2.5] {
            let post = posterior_scalar(&d, 0.0, y)?;
            let w = posterior_weights(&post).unwrap_or(&[]);
            tv = tv.max(0.5 * w.iter().zip(a.probs()).map(|(u, v)| (u - v).abs()).sum::<f64>());
        }
    }
    one(Check::new("model::prior_at_zero_snr", 1e-12 - tv, format!("max TV {tv:.1e}")))
}

fn sampling_vs_quadrature(mc: McOptions) -> Result<Vec<Check>> {
    let d = InputDistribution::bpsk();
    let s = sample_channel(&d, ChannelConfig::new(1, 1.0)?, mc.samples, mc.seed)?;
    let mut out = Vec::new();
    for (label, g) in [("y^2", (|y: f64| y * y) as fn(f64) -> f64), ("|y|", |y: f64| y.abs())] {
        let vals: Vec<f64> = s.y.iter().map(|&y| g(y)).collect();
        let m = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
        let se = (var / vals.len() as f64).sqrt();
        let q = expect_over_output(&d, 1.0, |y| Ok(g(y)))?;
        let dev = (m - q).abs();
        out.push(Check::new(
            format!("model::sampling_vs_quadrature[{label}]"),
            4.0 * se - dev,
            format!("MC {m:.5} quad {q:.5} ({:.2} se)", dev / se),
        ));
    }
    Ok(out)
}

fn orthogonality() -> Result<Vec<Check>> {
    let d = InputDistribution::bpsk();
    let mut worst: f64 = 0.0;
    let mut bias: f64 = 0.0;
    for p in [1.5, 2.0, 3.0, 4.0] {
        let r = diagnostics_residuals(&d, 1.0, p, &TestFn::ALL)?;
        for (g, v) in &r.orthogonality {
            worst = worst.max(v.abs());
            if *g == TestFn::One {
                bias = bias.max(v.abs());
            }
        }
    }
    Ok(vec![
        Check::new("estimators::orthogonality", 1e-6 - worst, format!("max residual {worst:.1e} over 4 p × 5 g")),
        Check::new("estimators::moment_unbiased", 1e-6 - bias, format!("max |E[score]| {bias:.1e}")),
    ])
}

fn classical_orthogonality() -> Result<Vec<Check>> {
    let d = InputDistribution::bpsk();
    let off = [1.2, 3.0]
        .iter()
        .map(|&p| Ok(diagnostics_residuals(&d, 1.0, p, &[])?.classical.abs()))
        .collect::<Result<Vec<f64>>>()?;
    let at2 = diagnostics_residuals(&d, 1.0, 2.0, &[])?.classical.abs();
    let lo = off.iter().copied().fold(f64::INFINITY, f64::min);
    let below = diagnostics_residuals(&d, 1.0, 1.98, &[])?.classical;
    let above = diagnostics_residuals(&d, 1.0, 2.02, &[])?.classical;
    Ok(vec![
        Check::new(
            "estimators::classical_orthogonality",
            (lo - 1e-3).min(1e-6 - at2),
            format!("|E[(X−f)Y]| = {:.3e}, {:.3e} at p=1.2,3; {at2:.1e} at p=2", off[0], off[1]),
        ),
        Check::flag(
            "estimators::classical_sign_change",
            below * above < 0.0,
            format!("residual {below:.2e} at p=1.98, {above:.2e} at p=2.02"),
        ),
    ])
}

fn linearity() -> Result<Vec<Check>> {
    let (a, b, snr) = (2.0, 1.0, 1.0);
    let d = InputDistribution::asym_pair();
    let t = InputDistribution::two_point(a * -3.0 + b, a * 1.0 + b, 0.01)?;
    let mut err: f64 = 0.0;
    for p in [1.5, 2.0, 3.0] {
        for k in -20..=20 {
            let y = 0.25 * k as f64;
            let f = numeric_pointwise_estimator(&d, snr, p, y)?.v;
            let g = numeric_pointwise_estimator(&t, snr / (a * a), p, y + snr.sqrt() * b / a)?.v;
            err = err.max((g - (a * f + b)).abs());
        }
    }
    one(Check::new("estimators::linearity", 1e-6 - err, format!("a=2, b=1, max err {err:.1e}")))
}

fn nonnegativity() -> Result<Vec<Check>> {
    let d = InputDistribution::atoms(&[(0.0, 0.5), (3.0, 0.5)])?;
    let mut lo = f64::INFINITY;
    for p in [1.0, 1.5, 2.0, 4.0] {
        for k in -40..=40 {
            lo = lo.min(numeric_pointwise_estimator(&d, 1.0, p, 0.25 * k as f64)?.v);
        }
    }
    one(Check::new("estimators::nonnegativity", lo + 1e-12, format!("min estimate on {{0,3}}: {lo:.2e}")))
}

fn monotone_in_snr(full: bool) -> Result<Vec<Check>> {
    let step = if full { 0.25 } else { 1.0 };
    let grid = range_grid(0.0, step, 8.0);
    let mut worst = f64::INFINITY;
    for d in [InputDistribution::bpsk(), InputDistribution::gaussian(1.0)?] {
        for p in [1.0, 2.0, 4.0] {
            let vals = grid
                .iter()
                .map(|&s| Ok(mmpe(&d, s, p, McOptions::default())?.value))
                .collect::<Result<Vec<f64>>>()?;
            for w in vals.windows(2) {
                worst = worst.min(w[0] - w[1] + 2.0 * OUTER_TOL);
            }
        }
    }
    one(Check::new("engine::monotone_in_snr", worst, format!("{} snr points, 2 inputs, p in {{1,2,4}}", grid.len())))
}

/// `d(δ) = |f(x+δ) − f(x)|` for δ ∈ {0.1, 0.01}; the ratio should be ~10.
fn difference_ratio<F: Fn(f64) -> Result<f64>>(f: F, x: f64) -> Result<(f64, f64)> {
    let f0 = f(x)?;
    let d1 = (f(x + 0.1)? - f0).abs();
    let d2 = (f(x + 0.01)? - f0).abs();
    Ok((d2, d1 / d2))
}

fn ratio_margin(r: f64) -> f64 {
    (r - 10.0 / 3.0).min(30.0 - r)
}

fn continuity_in_p() -> Result<Vec<Check>> {
    let d = InputDistribution::bpsk();
    let (d2, r) = difference_ratio(|p| Ok(mmpe_scalar(&d, 1.0, p)?.value), 2.0)?;
    one(Check::new("engine::continuity_in_p", ratio_margin(r), format!("|Δ| at δ=0.01: {d2:.2e}, ratio {r:.2}")))
}

fn continuity_in_snr() -> Result<Vec<Check>> {
    let d = InputDistribution::bpsk();
    let (d2, r) = difference_ratio(|s| Ok(mmpe_scalar(&d, s, 3.0)?.value), 1.0)?;
    one(Check::new("engine::continuity_in_snr", ratio_margin(r), format!("|Δ| at δ=0.01: {d2:.2e}, ratio {r:.2}")))
}

fn noise_input_equivalence(mc: McOptions) -> Result<Vec<Check>> {
    let d = InputDistribution::bpsk();
    let snr: f64 = 2.0;
    let mut out = Vec::new();
    for p in [2.0, 4.0] {
        let est = EstimatorSpec::optimal(&d, snr, p);
        let (m, se) = monte_carlo(mc, |rng| {
            let x = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let z: f64 = rng.sample(StandardNormal);
            let y = snr.sqrt() * x + z;
            Ok((z - (y - snr.sqrt() * est.eval(y)?)).abs().powf(p))
        })?;
        let lhs = snr.sqrt() * mmpe_scalar(&d, snr, p)?.value.powf(1.0 / p);
        let rhs = m.powf(1.0 / p);
        let rse = se * m.powf(1.0 / p - 1.0) / p;
        out.push(Check::new(
            format!("engine::noise_input_equivalence[p={p}]"),
            4.0 * rse - (lhs - rhs).abs(),
            format!("√snr·mmpe^(1/p)(X) {lhs:.5} vs mmpe^(1/p)(Z) {rhs:.5}"),
        ));
    }
    Ok(out)
}

fn chain_ordering() -> Result<Vec<Check>> {
    let mut worst = f64::INFINITY;
    for d in [InputDistribution::bpsk(), InputDistribution::pam(4)?, InputDistribution::asym_pair()] {
        for snr in [0.5, 2.0] {
            for (q, p) in [(1.0, 2.0), (2.0, 4.0), (1.5, 3.0)] {
                let low = chain_lower_bound(mmpe_scalar(&d, snr, q)?.value, 1, p, q)?;
                let mid = mmpe_scalar(&d, snr, p)?.value;
                let cm = p_error_of(&EstimatorSpec::ConditionalMean { dist: d.clone(), snr }, &d, snr, p)?;
                worst = worst.min((mid - low).min(cm - mid) + 2.0 * OUTER_TOL);
            }
        }
    }
    one(Check::new("engine::chain_ordering", worst, "chain ≤ mmpe(p) ≤ ‖X − E[X|Y]‖_p^p"))
}

fn gaussian_closed_form() -> Result<Vec<Check>> {
    let g = InputDistribution::gaussian(1.0)?;
    let mut err: f64 = 0.0;
    for p in [1.0, 2.0, 3.0, 4.0] {
        for snr in [0.0, 0.5, 1.0, 4.0] {
            let exact = mmpe_gaussian_closed_form(1.0, snr, p, 1)?.value;
            err = err.max((mmpe_scalar(&g, snr, p)?.value - exact).abs());
        }
    }
    one(Check::new("engine::gaussian_closed_form", 1e-6 - err, format!("quadrature vs closed form, max err {err:.1e}")))
}

fn observation_combining(mc: McOptions) -> Result<Vec<Check>> {
    let c = conditional_mmpe(&InputDistribution::bpsk(), 1.0, 2.0, 1.0, mc)?;
    let se = (c.combined.stderr.powi(2) + c.two_observation.stderr.powi(2)).sqrt();
    let dev = (c.combined.value - c.two_observation.value).abs();
    one(Check::new(
        "engine::observation_combining",
        4.0 * se - dev,
        format!("mmpe(2) {:.5} vs two observations {:.5} ({:.2} se)", c.combined.value, c.two_observation.value, dev / se),
    ))
}

fn change_of_measure() -> Result<Vec<Check>> {
    let g = InputDistribution::gaussian(1.0)?;
    let mut err: f64 = 0.0;
    for snr in [0.25, 0.5, 0.9] {
        err = err.max((change_of_measure_optimal(&g, snr, 1.0, 2.0)? - 1.0 / (1.0 + snr)).abs());
    }
    one(Check::new("engine::change_of_measure", 1e-6 - err, format!("Gaussian, snr0=1, max err {err:.1e}")))
}

#[derive(Default)]
struct Tally {
    count: usize,
    worst: f64,
    first_failure: Option<String>,
}

/// Bound dominance over the configuration sweep (60 configs in the full
/// suite), one line per bound family after a summary line.
pub fn dominance_checks(full: bool, cp_override: Option<f64>, mc: McOptions) -> Result<Vec<Check>> {
    let mut dists = vec![InputDistribution::gaussian(1.0)?, InputDistribution::bpsk()];
    if full {
        dists.push(InputDistribution::pam(4)?);
    }
    dists.push(InputDistribution::asym_pair());
    dists.push(InputDistribution::pmone_vector(2)?);
    let snrs: &[f64] = if full { &[0.25, 1.0, 4.0] } else { &[1.0] };
    let ps: &[f64] = if full { &[1.0, 2.0, 3.0, 4.0] } else { &[1.0, 2.0, 4.0] };
    let mut tallies: BTreeMap<&'static str, Tally> = BTreeMap::new();
    let mut configs = 0;
    for d in &dists {
        for &snr in snrs {
            for &p in ps {
                configs += 1;
                let label = format!("{} snr={snr} p={p}", d.id());
                for r in dominance_reports(d, snr, p, cp_override, mc)? {
                    let ok = r.holds(4.0, 1e-6).unwrap_or(false);
                    let (_, se) = r.truth_on_scale().unwrap_or((f64::NAN, 0.0));
                    let m = r.margin().unwrap_or(f64::NAN) + 4.0 * se + 1e-6;
                    let t = tallies.entry(r.name).or_insert(Tally { worst: f64::INFINITY, ..Tally::default() });
                    t.count += 1;
                    t.worst = t.worst.min(m);
                    if !ok && t.first_failure.is_none() {
                        t.first_failure = Some(format!("{label}: bound {:.6e} vs truth {:.6e}", r.value, r.value - r.margin().unwrap_or(f64::NAN)));
                    }
                }
            }
        }
    }
    let total: usize = tallies.values().map(|t| t.count).sum();
    let violations: Vec<String> = tallies.iter().filter_map(|(k, t)| t.first_failure.as_ref().map(|_| k.to_string())).collect();
    let mut out = vec![Check::flag(
        "bounds::dominance_sweep",
        violations.is_empty(),
        format!("{configs} configs, {total} reports, violated: [{}]", violations.join(", ")),
    )];
    for (name, t) in tallies {
        let detail = match t.first_failure {
            Some(f) => format!("{} checks; first violation {f}", t.count),
            None => format!("{} checks", t.count),
        };
        out.push(Check::new(format!("bounds::dominance[{name}]"), t.worst, detail));
    }
    Ok(out)
}

/// Every upper or lower bound applicable at one configuration, each paired with its truth.
pub fn dominance_reports(
    d: &InputDistribution,
    snr: f64,
    p: f64,
    cp_override: Option<f64>,
    mc: McOptions,
) -> Result<Vec<BoundReport>> {
    let n = d.dim();
    let truth = |s: f64, q: f64| -> Result<MmpeEstimate> { mmpe(d, s, q, mc) };
    let mut out = Vec::new();
    for r in trivial_bounds(d, snr, p)? {
        let t = match r.target {
            crate::bounds::Target::ConditionalMeanError { .. } => conditional_mean_error(d, snr, p)?,
            _ => truth(snr, p)?,
        };
        out.push(r.with_truth(t));
    }
    let zp = gaussian_norm_moment(n, p)?;
    let sigma2 = (d.norm_moment(p) / zp).powf(2.0 / p);
    out.push(gaussian_hardest(sigma2, snr, p, n)?.with_truth(truth(snr, p)?));

    let m0 = truth(snr, p)?.value.powf(2.0 / p);
    let beta = recover_beta(m0, snr, p, n)?;
    let c = match cp_override {
        Some(c) => c,
        None => scpp_constant(p)?,
    };
    out.push(scpp_bound_with_constant(beta, snr, 2.0 * snr, p, n, c)?.with_truth(truth(2.0 * snr, p)?));
    out.push(complementary_scpp(d, 0.5 * snr, snr, p, mc)?.with_truth(truth(0.5 * snr, p)?));

    if let Some(a) = d.as_atoms() {
        let stats = distance_stats(a)?;
        for r in discrete_input_bound(&stats, a.probs(), snr, p, n)? {
            out.push(r.with_truth(truth(snr, p)?));
        }
    }
    if p > 1.0 {
        let q = 1.0;
        let v = chain_lower_bound(truth(snr, q)?.value, n, p, q)?;
        let mut r = trivial_bounds(d, snr, p)?.remove(0);
        r.name = "chain_lower";
        r.value = v;
        r.direction = Direction::Lower;
        out.push(r.with_truth(truth(snr, p)?));
    }
    if n == 1 {
        let (q, r) = (1.5 * p, 2.0 * p);
        let terms = InterpolationTerms::compute(d, snr, p, r)?;
        for b in terms.bounds(q)? {
            if b.direction == Direction::Upper {
                out.push(b.with_truth(truth(snr, q)?));
            }
        }
    }
    Ok(out)
}

fn scpp_endpoint() -> Result<Vec<Check>> {
    let mut err: f64 = 0.0;
    for d in [InputDistribution::bpsk(), InputDistribution::gaussian(1.0)?] {
        for snr0 in [0.5, 1.0, 3.0] {
            let m = mmpe(&d, snr0, 2.0, McOptions::default())?.value;
            let b = scpp_bound(recover_beta(m, snr0, 2.0, 1)?, snr0, snr0, 2.0, 1)?.value;
            err = err.max((b - m).abs());
        }
    }
    let g = InputDistribution::gaussian(1.0)?;
    let mut exact: f64 = 0.0;
    for s in [1.0, 2.0, 3.0, 4.0] {
        let b = scpp_bound(recover_beta(0.5, 1.0, 2.0, 1)?, 1.0, s, 2.0, 1)?.value;
        exact = exact.max((b - mmpe(&g, s, 2.0, McOptions::default())?.value).abs());
    }
    Ok(vec![
        Check::new("bounds::scpp_endpoint", 1e-10 - err, format!("bound(snr0) − mmse(snr0): {err:.1e}")),
        Check::new("bounds::scpp_gaussian_exact", 1e-10 - exact, format!("Gaussian, snr in [1,4]: {exact:.1e}")),
    ])
}

fn kappa_at_least_one() -> Result<Vec<Check>> {
    let mut lo = f64::INFINITY;
    for k in 1..200 {
        lo = lo.min(kappa_nt(1, k as f64 / 200.0)?);
    }
    let half = (kappa_nt(1, 0.5)? - 2f64.powf(1.0 / 6.0)).abs();
    let mut pos = true;
    for n in 2..=64 {
        for k in 0..200 {
            pos &= kappa_nt(n, k as f64 / 200.0)? > 0.0;
        }
    }
    Ok(vec![
        Check::new("bounds::kappa_at_least_one", lo - 1.0, format!("n=1, min κ over t grid {lo:.6}")),
        Check::new("bounds::kappa_half", 1e-12 - half, format!("|κ_(1,1/2) − 2^(1/6)| = {half:.1e}")),
        Check::flag("bounds::kappa_positive", pos, "n in 2..=64, t in [0,1)"),
    ])
}

fn log_convexity() -> Result<Vec<Check>> {
    let mut worst = f64::INFINITY;
    for d in [InputDistribution::bpsk(), InputDistribution::pam(4)?, InputDistribution::asym_pair()] {
        for (p, q, r) in [(1.0, 2.0, 4.0), (2.0, 3.0, 8.0), (1.5, 5.0, 6.0)] {
            worst = worst.min(log_convexity_gap(&d, 1.0, p, q, r)? + 1e-8);
        }
    }
    one(Check::new("bounds::log_convexity", worst, "α·ln‖e‖_p + (1−α)·ln‖e‖_r ≥ ln‖e‖_q"))
}

fn interpolation_counterexample() -> Result<Vec<Check>> {
    let d = InputDistribution::bpsk();
    let terms = InterpolationTerms::compute(&d, 1.0, 2.0, 8.0)?;
    let mut dip: f64 = 0.0;
    let mut worst = f64::INFINITY;
    for k in 1..50 {
        let a = 0.02 * k as f64;
        let q = 1.0 / (a / 2.0 + (1.0 - a) / 8.0);
        let t = mmpe_scalar(&d, 1.0, q)?;
        for b in terms.bounds(q)? {
            let b = b.with_truth(t.clone());
            let m = b.margin().unwrap_or(f64::NAN);
            match b.direction {
                Direction::Conjecture => dip = dip.max(-m),
                _ => worst = worst.min(m + 1e-6),
            }
        }
    }
    Ok(vec![
        Check::new("bounds::interpolation_conjecture_fails", dip - 1e-3, format!("largest dip below truth {dip:.4}")),
        Check::new("bounds::interpolation_dominates", worst, "proved Hölder bounds over α grid"),
    ])
}

/// Per-step check: `W(n_i)/W(n_{i+1})` over `(n_{i+1}/n_i)^k` must lie in `[1/2, 2]`.
fn step_ratio_margin(ws: &[f64], ns: &[usize], k: f64) -> (f64, Vec<f64>) {
    let rs: Vec<f64> = ws
        .windows(2)
        .zip(ns.windows(2))
        .map(|(w, n)| (w[0] / w[1]) / (n[1] as f64 / n[0] as f64).powf(k))
        .collect();
    let m = rs.iter().map(|r| r.ln().abs()).fold(0.0, f64::max);
    (2f64.ln() - m, rs)
}

fn width_scaling() -> Result<Vec<Check>> {
    let (beta, snr0) = (0.05, 5.0);
    let ns = [10usize, 40, 160];
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &n in &ns {
        a.push(transition_width(|s| Ok(mn_bound_r_sweep(beta, s, snr0, n, &MrSource::NoiseBound)?.value), snr0)?);
        b.push(transition_width(|s| Ok(mn_main_bound(beta, s, snr0, n)?.value), snr0)?);
    }
    let (ma, ra) = step_ratio_margin(&a, &ns, 0.5);
    let (mb, rb) = step_ratio_margin(&b, &ns, 1.0);
    Ok(vec![
        Check::new("bounds::r_sweep_width_scaling", ma, format!("W = {a:.4?}, normalized ratios {ra:.2?}")),
        Check::new("bounds::main_width_scaling", mb, format!("W = {b:.4?}, normalized ratios {rb:.2?}")),
    ])
}

fn phase_transition() -> Result<Vec<Check>> {
    let ns = [1usize, 2, 4, 8, 16, 32, 64, 128];
    let above = phase_transition_binary(&ns, 2.0, 2.0)?;
    let below = phase_transition_binary(&ns, 0.5, 2.0)?;
    let last = above.last().map(|r| r.reported).unwrap_or(f64::NAN);
    let ceiling = below.iter().map(|r| (r.reported - 4.0).abs()).fold(0.0, f64::max);
    Ok(vec![
        Check::new("bounds::phase_transition_above", 1e-6 - last, format!("bound at n=128, snr=2: {last:.2e}")),
        Check::new("bounds::phase_transition_below", 1e-12 - ceiling, "snr=0.5 reports the ceiling 4"),
    ])
}

fn sandwich(mc: McOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for d in [InputDistribution::gaussian(1.0)?, InputDistribution::bpsk()] {
        for snr in [0.5, 2.0] {
            let s = derivative_sandwich(&d, snr, mc)?;
            let reports = s.reports();
            let worst = reports
                .iter()
                .map(|r| {
                    let (_, se) = r.truth_on_scale().unwrap_or((0.0, 0.0));
                    r.margin().unwrap_or(f64::NAN) + 4.0 * se + 1e-9
                })
                .fold(f64::INFINITY, f64::min);
            let mut detail = format!("{:.4e} ≤ {:.4e} ≤ {:.4e}", s.lower, s.middle.value, s.upper);
            let margin = if d.gaussian_sigma2().is_some() {
                let eq = (s.lower - s.middle.value).abs();
                detail.push_str(&format!(", left equality err {eq:.1e}"));
                worst.min(1e-12 - eq)
            } else {
                worst
            };
            out.push(Check::new(format!("bounds::derivative_sandwich[{} snr={snr}]", d.id()), margin, detail));
        }
    }
    Ok(out)
}

fn gap_sandwich(full: bool) -> Result<Vec<Check>> {
    let snrs: &[f64] = if full { &[1.0, 4.0, 10.0, 20.0] } else { &[4.0] };
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for &snr in snrs {
        for levels in [2, 4] {
            let d = InputDistribution::pam(levels)?;
            let mi = mutual_information_scalar(&d, snr)?;
            let h = d.as_atoms().map(|a| a.entropy_bits()).unwrap_or(0.0);
            let mut gaps = vec![
                ow_gap_original(&d, snr, OwVariant::Lmmse, false)?,
                ow_gap_original(&d, snr, OwVariant::Mmse, false)?,
            ];
            for p in [1.0, 2.0, 4.0, 6.0] {
                gaps.push(ow_gap_generalized(&d, snr, p, &OwOptions::default())?);
            }
            for g in gaps {
                count += 1;
                worst = worst.min((mi - g.lower_bound + 1e-6).min(h + 1e-6 - mi));
            }
        }
    }
    one(Check::new("infometrics::gap_sandwich", worst, format!("{count} gaps: max(H−gap,0) ≤ I ≤ H")))
}

fn entropy_bound_p2() -> Result<Vec<Check>> {
    let mut err: f64 = 0.0;
    for d in [InputDistribution::gaussian(2.0)?, InputDistribution::uniform_ball(1, 1.5)?] {
        for snr in [0.5, 3.0] {
            let m = mmpe(&d, snr, 2.0, McOptions::default())?.value;
            let b = entropy_bound(&d, snr, 2.0, McOptions::default())?;
            let reference = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * m).log2();
            err = err.max((b - reference).abs());
        }
    }
    one(Check::new("infometrics::entropy_bound_p2", 1e-9 - err, format!("vs ½log(2πe·mmse), max err {err:.1e}")))
}

fn g1_asymptotic() -> Result<Vec<Check>> {
    let mut worst = f64::INFINITY;
    for n in [8usize, 32] {
        let d = InputDistribution::pmone_vector(n)?;
        let stats = distance_stats(d.as_atoms().expect("atoms"))?;
        for p in [2.0, 4.0] {
            let opts = OwOptions { g1: G1Mode::Triangle, ..OwOptions::default() };
            let g1 = ow_gap_generalized(&d, 2.0, p, &opts)?.g1;
            worst = worst.min(g1_asymptotic_bound(&stats, 2.0, p, n)? - g1);
        }
    }
    one(Check::new("infometrics::g1_asymptotic", worst, "±1-vectors n in {8,32}, snr=2"))
}

fn gap_ordering(full: bool) -> Result<Vec<Check>> {
    let grid = if full { range_grid(10.0, 0.5, 25.0) } else { vec![10.0, 15.0, 25.0] };
    let t = fig3(&grid)?;
    let p6 = t.numbers("gap_p6").unwrap_or_default();
    let lm = t.numbers("gap_lmmse").unwrap_or_default();
    let worst = lm.iter().zip(&p6).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min);
    let mi = t.numbers("exact_mi").unwrap_or_default();
    let mut below = f64::INFINITY;
    for col in ["lower_lmmse", "lower_p6"] {
        for (l, i) in t.numbers(col).unwrap_or_default().iter().zip(&mi) {
            below = below.min(i + 1e-6 - l);
        }
    }
    Ok(vec![
        Check::new("infometrics::gap_ordering", worst, format!("LMMSE gap − p=6 gap over {} snr points", grid.len())),
        Check::new("infometrics::gap_lower_below_mi", below, "lower bounds vs exact MI"),
    ])
}

fn g2_ball_decay() -> Result<Vec<Check>> {
    let p = 2.0;
    let ns = [4usize, 16, 64];
    let g = ns.iter().map(|&n| g2_ball(n, p)).collect::<Result<Vec<f64>>>()?;
    let scaled: Vec<f64> = ns.iter().zip(&g).map(|(&n, v)| v * n as f64 / (n as f64 / p).ln()).collect();
    let hi = scaled.iter().copied().fold(0.0, f64::max);
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let decreasing = g.windows(2).all(|w| w[1] < w[0]);
    let margin = if decreasing { 3.0 - hi / lo } else { -1.0 };
    one(Check::new("infometrics::g2_ball_decay", margin, format!("G2 = {g:.4?}, G2·n/ln(n/p) = {scaled:.3?}")))
}
