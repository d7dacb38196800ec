//! Closed-form bounds on the MMPE and the quantities they control.
//!
//! Every bound is returned as a [`BoundReport`] naming the quantity it
//! bounds. Bound values never depend on a measured truth; attaching one for a
//! dominance check is left to the caller through [`BoundReport::with_truth`].

use crate::engine::{conditional_mean_error, mmpe, mmpe_scalar, p_error_of, McOptions, Method, MmpeEstimate};
use crate::error::{MmpeError, Result};
use crate::estimators::{atom_posterior, EstimatorSpec};
use crate::model::{posterior_scalar, DistanceStats, InputDistribution};
use crate::specfun::{gaussian_norm_moment, ln_gaussian_norm_moment, ln_generalized_q};
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt;

/// Number of geometric r-grid points searched by [`mn_bound_r_sweep`].
pub const R_SWEEP_GRID: usize = 32;

/// Which side of the target a bound sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
    /// Stated as an upper bound without proof; expected to fail somewhere.
    Conjecture,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Upper => "upper",
            Self::Lower => "lower",
            Self::Conjecture => "conjecture",
        })
    }
}

/// The quantity a bound refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// `mmpe(X, snr, p)^power`.
    Mmpe { snr: f64, p: f64, power: f64 },
    /// `‖X − E[X|Y]‖_p^p`.
    ConditionalMeanError { snr: f64, p: f64 },
    /// `(1/n)·Tr E[Cov²(X|Y)]`.
    PosteriorCovSquared { snr: f64 },
}

impl Target {
    fn power(&self) -> f64 {
        match self {
            Self::Mmpe { power, .. } => *power,
            _ => 1.0,
        }
    }
}

/// A named bound value with its inputs and, optionally, the truth it is
/// checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub inputs: Vec<(&'static str, f64)>,
    pub value: f64,
    pub direction: Direction,
    pub target: Target,
    /// Measured target on its natural scale (power 1).
    pub truth: Option<MmpeEstimate>,
}

impl BoundReport {
    fn new(name: &'static str, inputs: Vec<(&'static str, f64)>, value: f64, direction: Direction, target: Target) -> Self {
        Self { name, inputs, value, direction, target, truth: None }
    }

    pub fn with_truth(mut self, truth: MmpeEstimate) -> Self {
        self.truth = Some(truth);
        self
    }

    /// Truth raised to the target power, with a delta-method standard error.
    pub fn truth_on_scale(&self) -> Option<(f64, f64)> {
        let t = self.truth.as_ref()?;
        let k = self.target.power();
        let v = t.value.max(0.0);
        let se = if t.stderr > 0.0 && v > 0.0 { k * v.powf(k - 1.0) * t.stderr } else { 0.0 };
        Some((v.powf(k), se))
    }

    /// Signed distance by which the bound holds; negative means violated.
    pub fn margin(&self) -> Option<f64> {
        let (t, _) = self.truth_on_scale()?;
        Some(match self.direction {
            Direction::Upper | Direction::Conjecture => self.value - t,
            Direction::Lower => t - self.value,
        })
    }

    /// Whether the bound holds within `k_stderr` standard errors plus `abs_tol`.
    pub fn holds(&self, k_stderr: f64, abs_tol: f64) -> Option<bool> {
        let (_, se) = self.truth_on_scale()?;
        Some(self.margin()? >= -(k_stderr * se + abs_tol))
    }

    /// Inputs as `key=value` pairs joined by `;`.
    pub fn inputs_string(&self) -> String {
        self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(MmpeError::Domain(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(MmpeError::Domain(format!("{name} must be nonnegative, got {v}")));
    }
    Ok(())
}

/// Bounds from the trivial estimators `0` and `Y/√snr`, the conditional-mean
/// bounds for the applicable range of p, and the LMMSE bound at p = 2.
pub fn trivial_bounds(dist: &InputDistribution, snr: f64, p: f64) -> Result<Vec<BoundReport>> {
    check_nonneg("snr", snr)?;
    check_positive("p", p)?;
    let n = dist.dim();
    let zp = gaussian_norm_moment(n, p)?;
    let xp = dist.norm_moment(p);
    let inputs = vec![("n", n as f64), ("snr", snr), ("p", p)];
    let mmpe_t = Target::Mmpe { snr, p, power: 1.0 };
    let cm_t = Target::ConditionalMeanError { snr, p };
    let noise_or_input = |a: f64, b: f64| if snr > 0.0 { (a / snr.powf(p / 2.0)).min(b) } else { b };

    let mut out = vec![BoundReport::new("noise_or_input", inputs.clone(), noise_or_input(zp, xp), Direction::Upper, mmpe_t)];
    if p >= 2.0 {
        let v = 2f64.powf(p) * noise_or_input(zp, xp);
        out.push(BoundReport::new("cond_mean_scaled", inputs.clone(), v, Direction::Upper, cm_t));
    }
    if (1.0..=2.0).contains(&p) {
        let c = (n as f64).powf(0.5 - 1.0 / p);
        let zn = (zp.powf(1.0 / p) + c).powf(p);
        let xn = (xp.powf(1.0 / p) + c * dist.norm_moment(2.0).sqrt()).powf(p);
        out.push(BoundReport::new("cond_mean_triangle", inputs.clone(), noise_or_input(zn, xn), Direction::Upper, cm_t));
    }
    if p == 2.0 {
        let v = dist.variance();
        out.push(BoundReport::new("lmmse", inputs, v / (1.0 + v * snr), Direction::Upper, mmpe_t));
    }
    Ok(out)
}

/// Lower bound `n^{p/q−1}·mmpe^{p/q}(q)` on `mmpe(p)` for `q ≤ p`, from a
/// supplied `mmpe(q)`.
pub fn chain_lower_bound(mmpe_q: f64, n: usize, p: f64, q: f64) -> Result<f64> {
    check_positive("q", q)?;
    if q > p {
        return Err(MmpeError::Domain(format!("chain bound needs q <= p, got q={q}, p={p}")));
    }
    Ok((n as f64).powf(p / q - 1.0) * mmpe_q.powf(p / q))
}

/// `κ_{p,s}` with `s = σ²·snr`: one at p = 2, else `((1+√s)/√(1+s))^p`.
pub fn gaussian_hardest_kappa(p: f64, s: f64) -> f64 {
    if p == 2.0 {
        1.0
    } else {
        ((1.0 + s.sqrt()) / (1.0 + s).sqrt()).powf(p)
    }
}

/// Upper bound for any input with `‖X‖_p^p ≤ σ^p‖Z‖_p^p`, tight for the Gaussian.
pub fn gaussian_hardest(sigma2: f64, snr: f64, p: f64, n: usize) -> Result<BoundReport> {
    check_positive("sigma2", sigma2)?;
    check_nonneg("snr", snr)?;
    if !(p >= 1.0) {
        return Err(MmpeError::Domain(format!("Gaussian-hardest bound needs p >= 1, got {p}")));
    }
    let s = sigma2 * snr;
    let kappa = gaussian_hardest_kappa(p, s);
    let v = kappa * sigma2.powf(p / 2.0) * gaussian_norm_moment(n, p)? / (1.0 + s).powf(p / 2.0);
    Ok(BoundReport::new(
        "gaussian_hardest",
        vec![("n", n as f64), ("snr", snr), ("p", p), ("sigma2", sigma2), ("kappa", kappa)],
        v,
        Direction::Upper,
        Target::Mmpe { snr, p, power: 1.0 },
    ))
}

/// `α = (1/q − 1/r)/(1/p − 1/r)`; one when `p = r`.
pub fn interpolation_alpha(p: f64, q: f64, r: f64) -> Result<f64> {
    check_positive("p", p)?;
    if !(p <= q && q <= r) || !r.is_finite() {
        return Err(MmpeError::Domain(format!("interpolation needs 0 < p <= q <= r, got ({p}, {q}, {r})")));
    }
    if r == p {
        return Ok(1.0);
    }
    Ok((1.0 / q - 1.0 / r) / (1.0 / p - 1.0 / r))
}

/// The measured ingredients of the interpolation bounds for fixed `(p, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationTerms {
    pub snr: f64,
    pub p: f64,
    pub r: f64,
    pub mmpe_p: f64,
    pub mmpe_r: f64,
    /// `‖X − f_r‖_p^p`.
    pub fr_at_p: f64,
    /// `‖X − f_p‖_r^r`.
    pub fp_at_r: f64,
    /// `‖X − f_m‖_p^p` and `‖X − f_m‖_r^r` with `m = (p+r)/2`.
    pub fm_at_p: f64,
    pub fm_at_r: f64,
}

impl InterpolationTerms {
    /// Evaluate the terms by quadrature (scalar inputs).
    pub fn compute(dist: &InputDistribution, snr: f64, p: f64, r: f64) -> Result<Self> {
        interpolation_alpha(p, p, r)?;
        let fp = EstimatorSpec::optimal(dist, snr, p);
        let fr = EstimatorSpec::optimal(dist, snr, r);
        let fm = EstimatorSpec::optimal(dist, snr, 0.5 * (p + r));
        Ok(Self {
            snr,
            p,
            r,
            mmpe_p: mmpe_scalar(dist, snr, p)?.value,
            mmpe_r: mmpe_scalar(dist, snr, r)?.value,
            fr_at_p: p_error_of(&fr, dist, snr, p)?,
            fp_at_r: p_error_of(&fp, dist, snr, r)?,
            fm_at_p: p_error_of(&fm, dist, snr, p)?,
            fm_at_r: p_error_of(&fm, dist, snr, r)?,
        })
    }

    /// Bounds on `mmpe^{1/q}(q)` for `p ≤ q ≤ r`.
    pub fn bounds(&self, q: f64) -> Result<Vec<BoundReport>> {
        let (p, r) = (self.p, self.r);
        let a = interpolation_alpha(p, q, r)?;
        let b = 1.0 - a;
        let holder = |ep: f64, er: f64| ep.powf(a / p) * er.powf(b / r);
        let inputs = vec![("snr", self.snr), ("p", p), ("q", q), ("r", r), ("alpha", a)];
        let t = Target::Mmpe { snr: self.snr, p: q, power: 1.0 / q };
        Ok(vec![
            BoundReport::new("holder_fr", inputs.clone(), holder(self.fr_at_p, self.mmpe_r), Direction::Upper, t),
            BoundReport::new("holder_fp", inputs.clone(), holder(self.mmpe_p, self.fp_at_r), Direction::Upper, t),
            BoundReport::new("holder_mid", inputs.clone(), holder(self.fm_at_p, self.fm_at_r), Direction::Upper, t),
            BoundReport::new("interp_conjecture", inputs, holder(self.mmpe_p, self.mmpe_r), Direction::Conjecture, t),
        ])
    }
}

/// Interpolation bounds on `mmpe^{1/q}(X, snr, q)` from orders `p` and `r`.
pub fn interpolation_bound(dist: &InputDistribution, snr: f64, p: f64, q: f64, r: f64) -> Result<Vec<BoundReport>> {
    interpolation_alpha(p, q, r)?;
    InterpolationTerms::compute(dist, snr, p, r)?.bounds(q)
}

/// `α·log‖e‖_p + (1−α)·log‖e‖_r − log‖e‖_q` for `e = X − E[X|Y]`; nonnegative
/// by log-convexity of the norm in `1/p`.
pub fn log_convexity_gap(dist: &InputDistribution, snr: f64, p: f64, q: f64, r: f64) -> Result<f64> {
    let a = interpolation_alpha(p, q, r)?;
    let cm = EstimatorSpec::ConditionalMean { dist: dist.clone(), snr };
    let ln_norm = |s: f64| -> Result<f64> { Ok(p_error_of(&cm, dist, snr, s)?.ln() / s) };
    Ok(a * ln_norm(p)? + (1.0 - a) * ln_norm(r)? - ln_norm(q)?)
}

/// Exponentially decaying bounds for discrete inputs.
pub fn discrete_input_bound(stats: &DistanceStats, probs: &[f64], snr: f64, p: f64, n: usize) -> Result<Vec<BoundReport>> {
    check_nonneg("snr", snr)?;
    check_positive("p", p)?;
    if probs.len() != stats.per_atom.len() || n == 0 {
        return Err(MmpeError::Domain("one probability per atom and n >= 1 required".into()));
    }
    let h = n as f64 / 2.0;
    let dp = stats.d_max.powf(p);
    let mut sum = 0.0;
    for (q, d) in probs.iter().zip(&stats.per_atom) {
        sum += q * ln_generalized_q(h, snr * d * d / 8.0)?.exp();
    }
    let loose = ln_generalized_q(h, snr * stats.d_min * stats.d_min / 8.0)?.exp();
    let inputs = vec![("n", n as f64), ("snr", snr), ("p", p), ("d_min", stats.d_min), ("d_max", stats.d_max)];
    let t = Target::Mmpe { snr, p, power: 1.0 };
    let mut out = vec![
        BoundReport::new("discrete_atoms", inputs.clone(), dp * sum / n as f64, Direction::Upper, t),
        BoundReport::new("discrete_dmin", inputs.clone(), dp * loose / n as f64, Direction::Upper, t),
    ];
    if n == 1 {
        let v = 2.0 * dp * (-snr * stats.d_min * stats.d_min / 8.0).exp();
        out.push(BoundReport::new("discrete_chernoff", inputs, v, Direction::Upper, t));
    }
    Ok(out)
}

/// One row of the ±1-vector phase-transition table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRow {
    pub n: usize,
    /// `4^{p/2}·n^{p/2}·Q̄(n/2; n·snr/2)/n`.
    pub bound: f64,
    /// `4^{p/2}·n^{p/2−1}`.
    pub ceiling: f64,
    /// The bound above the transition, the ceiling below it.
    pub reported: f64,
}

/// Discrete-input bound for `±(1,…,1)` along a sequence of dimensions.
pub fn phase_transition_binary(ns: &[usize], snr: f64, p: f64) -> Result<Vec<PhaseRow>> {
    check_nonneg("snr", snr)?;
    check_positive("p", p)?;
    if snr == 1.0 {
        return Err(MmpeError::Domain("snr = 1 is the transition boundary; pick snr above or below 1".into()));
    }
    ns.iter()
        .map(|&n| {
            if n == 0 {
                return Err(MmpeError::Domain("dimension must be at least 1".into()));
            }
            let nf = n as f64;
            let ln_ceiling = p * 2f64.ln() + (p / 2.0 - 1.0) * nf.ln();
            let bound = (ln_ceiling + ln_generalized_q(nf / 2.0, nf * snr / 2.0)?).exp();
            let ceiling = ln_ceiling.exp();
            Ok(PhaseRow { n, bound, ceiling, reported: if snr > 1.0 { bound } else { ceiling } })
        })
        .collect()
}

/// `c_p` of the generalized single-crossing bound: 1 at p = 2, else 2.
pub fn scpp_constant(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(MmpeError::Domain(format!("single-crossing bound needs p >= 1, got {p}")));
    }
    Ok(if p == 2.0 { 1.0 } else { 2.0 })
}

/// β such that `m = β‖Z‖_p²/(1+β·snr0)`, where `m = mmpe^{2/p}(X, snr0, p)`.
pub fn recover_beta(m: f64, snr0: f64, p: f64, n: usize) -> Result<f64> {
    check_nonneg("m", m)?;
    check_nonneg("snr0", snr0)?;
    let z2 = gaussian_norm_moment(n, p)?.powf(2.0 / p);
    let den = z2 - snr0 * m;
    if !(den > 0.0) {
        return Err(MmpeError::Domain(format!("recovered beta is not a finite nonnegative number (m={m}, snr0={snr0})")));
    }
    Ok(m / den)
}

/// Upper bound `c_p·β‖Z‖_p²/(1+β·snr)` on `mmpe^{2/p}(X, snr, p)` for `snr ≥ snr0`.
pub fn scpp_bound(beta: f64, snr0: f64, snr: f64, p: f64, n: usize) -> Result<BoundReport> {
    scpp_bound_with_constant(beta, snr0, snr, p, n, scpp_constant(p)?)
}

/// [`scpp_bound`] with an explicit constant in place of `c_p`.
pub fn scpp_bound_with_constant(beta: f64, snr0: f64, snr: f64, p: f64, n: usize, c: f64) -> Result<BoundReport> {
    check_nonneg("beta", beta)?;
    check_nonneg("snr0", snr0)?;
    check_positive("p", p)?;
    if !(snr >= snr0) {
        return Err(MmpeError::Domain(format!("single-crossing bound needs snr >= snr0, got {snr} < {snr0}")));
    }
    let z2 = gaussian_norm_moment(n, p)?.powf(2.0 / p);
    Ok(BoundReport::new(
        "scpp",
        vec![("n", n as f64), ("snr0", snr0), ("snr", snr), ("p", p), ("beta", beta), ("c_p", c)],
        c * beta * z2 / (1.0 + beta * snr),
        Direction::Upper,
        Target::Mmpe { snr, p, power: 2.0 / p },
    ))
}

/// `κ_{n,t} = (2^n/n²)^{t/(1+t)}·(1/(1−t))^{nt/(1+t) − 1/2}`.
pub fn kappa_nt(n: usize, t: f64) -> Result<f64> {
    if n == 0 || !(0.0..1.0).contains(&t) {
        return Err(MmpeError::Domain(format!("kappa needs n >= 1 and t in [0, 1), got n={n}, t={t}")));
    }
    let nf = n as f64;
    let e1 = t / (1.0 + t);
    Ok((e1 * (nf * 2f64.ln() - 2.0 * nf.ln()) - (nf * e1 - 0.5) * (1.0 - t).ln()).exp())
}

/// Upper bound on `mmpe(X, snr, p)` below `snr0` from a higher-order MMPE at `snr0`.
pub fn complementary_scpp(dist: &InputDistribution, snr: f64, snr0: f64, p: f64, mc: McOptions) -> Result<BoundReport> {
    check_positive("p", p)?;
    if !(snr > 0.0 && snr <= snr0) {
        return Err(MmpeError::Domain(format!("complementary bound needs 0 < snr <= snr0, got {snr}, {snr0}")));
    }
    let n = dist.dim();
    let t = (snr0 - snr) / snr0;
    let kappa = kappa_nt(n, t)?;
    let e = (1.0 - t) / (1.0 + t);
    let higher = p / e;
    let m = mmpe(dist, snr0, higher, mc)?.value;
    Ok(BoundReport::new(
        "complementary_scpp",
        vec![("n", n as f64), ("snr", snr), ("snr0", snr0), ("p", p), ("t", t), ("kappa", kappa), ("order", higher)],
        kappa * m.powf(e),
        Direction::Upper,
        Target::Mmpe { snr, p, power: 1.0 },
    ))
}

/// Where `M_r = ‖X − E[X|Y_{snr0}]‖_r^r` comes from in [`mn_bound_r_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub enum MrSource {
    /// `2^r‖Z‖_r^r/snr0^{r/2}`.
    NoiseBound,
    /// `2^r·min(‖Z‖_r^r/snr0^{r/2}, ‖X‖_r^r)`.
    NoiseOrInput(InputDistribution),
    /// The error itself, by quadrature (scalar or two-atom inputs).
    Direct(InputDistribution),
}

impl MrSource {
    fn ln_mr(&self, r: f64, snr0: f64, n: usize) -> Result<f64> {
        let noise = r * 2f64.ln() + ln_gaussian_norm_moment(n, r) - 0.5 * r * snr0.ln();
        match self {
            Self::NoiseBound => Ok(noise),
            Self::NoiseOrInput(d) => Ok(noise.min(r * 2f64.ln() + d.norm_moment(r).ln())),
            Self::Direct(d) => Ok(conditional_mean_error(d, snr0, r)?.value.ln()),
        }
    }
}

/// Approximately optimal r for the bound of [`mn_bound_r_sweep`].
pub fn r_sweep_r_opt(gamma: f64, snr0: f64, mmse0: f64) -> f64 {
    let l = (4.0 * std::f64::consts::E / (snr0 * mmse0)).ln();
    if 2.0 / gamma <= l {
        2.0 * l
    } else {
        2.0 / gamma
    }
}

/// Upper bound on `mmse(X, snr)` for `snr ≤ snr0` given
/// `mmse(X, snr0) ≤ β/(1+β·snr0)`, minimized over r.
pub fn mn_bound_r_sweep(beta: f64, snr: f64, snr0: f64, n: usize, mr: &MrSource) -> Result<BoundReport> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(MmpeError::Domain(format!("beta must lie in [0, 1], got {beta}")));
    }
    if !(snr > 0.0 && snr <= snr0) || n == 0 {
        return Err(MmpeError::Domain(format!("need 0 < snr <= snr0 and n >= 1, got {snr}, {snr0}, n={n}")));
    }
    let nf = n as f64;
    let gamma = snr / (2.0 * snr0 - snr);
    let mmse0 = beta / (1.0 + beta * snr0);
    let r_opt = r_sweep_r_opt(gamma, snr0, mmse0);
    let lo = 2.0 / gamma * (1.0 + 1e-6);
    let hi = (4.0 * r_opt).max(lo * 1.01);
    let mut grid: Vec<f64> =
        (0..R_SWEEP_GRID).map(|i| lo * (hi / lo).powf(i as f64 / (R_SWEEP_GRID - 1) as f64)).collect();
    if r_opt > lo {
        grid.push(r_opt);
    }
    let base = 0.5 * 2f64.ln() - (1.0 - gamma) * nf.ln() + 0.5 * (nf * (1.0 - gamma) - 1.0) * ((1.0 + gamma) / gamma).ln();
    let mut best = (f64::INFINITY, f64::NAN);
    for r in grid {
        let ln_kappa = base + 2.0 * (1.0 - gamma) / (r - 2.0) * mr.ln_mr(r, snr0, n)?;
        let v = ln_kappa + (gamma * r - 2.0) / (r - 2.0) * mmse0.ln();
        if v < best.0 {
            best = (v, r);
        }
    }
    Ok(BoundReport::new(
        "mn_r_sweep",
        vec![("n", n as f64), ("snr", snr), ("snr0", snr0), ("beta", beta), ("gamma", gamma), ("r", best.1), ("r_opt", r_opt)],
        best.0.exp(),
        Direction::Upper,
        Target::Mmpe { snr, p: 2.0, power: 1.0 },
    ))
}

/// The earlier bound `mmse(snr0) + (n+2)(1/snr − 1/snr0)` with `mmse(snr0) = β/(1+β·snr0)`.
pub fn mn_main_bound(beta: f64, snr: f64, snr0: f64, n: usize) -> Result<BoundReport> {
    if !(snr > 0.0 && snr <= snr0) || n == 0 {
        return Err(MmpeError::Domain(format!("need 0 < snr <= snr0 and n >= 1, got {snr}, {snr0}, n={n}")));
    }
    let v = beta / (1.0 + beta * snr0) + (n as f64 + 2.0) * (1.0 / snr - 1.0 / snr0);
    Ok(BoundReport::new(
        "mn_main",
        vec![("n", n as f64), ("snr", snr), ("snr0", snr0), ("beta", beta)],
        v,
        Direction::Upper,
        Target::Mmpe { snr, p: 2.0, power: 1.0 },
    ))
}

/// Width `snr0 − snr_L` of the region where `bound(snr) < 1/(1+snr)`,
/// scanning down from `snr0`; `snr0` when the bound never reaches the
/// Gaussian curve.
pub fn transition_width<F: FnMut(f64) -> Result<f64>>(mut bound: F, snr0: f64) -> Result<f64> {
    check_positive("snr0", snr0)?;
    const STEPS: usize = 4000;
    let above = |b: f64, s: f64| b >= 1.0 / (1.0 + s);
    let top = snr0 * (1.0 - 1e-9);
    let bottom = snr0 * 1e-4;
    let mut prev = top;
    if above(bound(top)?, top) {
        return Ok(snr0 - top);
    }
    for i in 1..=STEPS {
        let s = top - (top - bottom) * i as f64 / STEPS as f64;
        if above(bound(s)?, s) {
            let (mut a, mut b) = (s, prev);
            while b - a > 1e-10 * snr0 {
                let m = 0.5 * (a + b);
                if above(bound(m)?, m) {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Ok(snr0 - a);
        }
        prev = s;
    }
    Ok(snr0)
}

/// The three terms of the derivative sandwich.
#[derive(Debug, Clone, PartialEq)]
pub struct Sandwich {
    pub snr: f64,
    pub n: usize,
    /// `mmse²`.
    pub lower: f64,
    /// `(1/n)·Tr E[Cov²(X|Y)]`.
    pub middle: MmpeEstimate,
    /// `n·mmpe(X, snr, 4)`.
    pub upper: f64,
    /// `3/snr²` for n = 1.
    pub n1_constant: Option<f64>,
}

impl Sandwich {
    /// The sandwich as bound reports against the middle term.
    pub fn reports(&self) -> Vec<BoundReport> {
        let t = Target::PosteriorCovSquared { snr: self.snr };
        let inputs = vec![("n", self.n as f64), ("snr", self.snr)];
        let mut out = vec![
            BoundReport::new("sandwich_lower", inputs.clone(), self.lower, Direction::Lower, t),
            BoundReport::new("sandwich_upper", inputs.clone(), self.upper, Direction::Upper, t),
        ];
        if let Some(c) = self.n1_constant {
            out.push(BoundReport::new("sandwich_three_over_snr2", inputs, c, Direction::Upper, t));
        }
        out.into_iter().map(|r| r.with_truth(self.middle.clone())).collect()
    }
}

/// `mmse² ≤ (1/n)·Tr E[Cov²(X|Y)] ≤ n·mmpe(X, snr, 4)`, with the middle term
/// exact for Gaussians and by Monte Carlo otherwise.
pub fn derivative_sandwich(dist: &InputDistribution, snr: f64, mc: McOptions) -> Result<Sandwich> {
    check_nonneg("snr", snr)?;
    let n = dist.dim();
    if n > crate::estimators::VECTOR_CAP {
        return Err(MmpeError::DimensionCap { n, cap: crate::estimators::VECTOR_CAP });
    }
    let lower = mmpe(dist, snr, 2.0, mc)?.value.powi(2);
    let upper = n as f64 * mmpe(dist, snr, 4.0, mc)?.value;
    let middle = match dist {
        InputDistribution::ScalarGaussian { sigma2 } | InputDistribution::VectorGaussian { sigma2, .. } => {
            let v = sigma2 / (1.0 + sigma2 * snr);
            MmpeEstimate {
                value: v * v,
                method: Method::ClosedForm,
                stderr: 0.0,
                dist_id: dist.id(),
                n,
                snr,
                p: 2.0,
                seed: None,
                samples: None,
            }
        }
        _ => {
            let s = snr.sqrt();
            let (value, stderr) = crate::engine::monte_carlo(mc, |rng| {
                let mut x = vec![0.0; n];
                dist.sample_into(rng, &mut x);
                let y: Vec<f64> = x.iter().map(|xi| s * xi + rng.sample::<f64, _>(StandardNormal)).collect();
                posterior_cov_sq(dist, s, &y)
            })?;
            MmpeEstimate {
                value,
                method: Method::MonteCarlo,
                stderr,
                dist_id: dist.id(),
                n,
                snr,
                p: 2.0,
                seed: Some(mc.seed),
                samples: Some(mc.samples),
            }
        }
    };
    let n1_constant = (n == 1 && snr > 0.0).then(|| 3.0 / (snr * snr));
    Ok(Sandwich { snr, n, lower, middle, upper, n1_constant })
}

/// `(1/n)·Tr Cov²(X | Y = y)`.
fn posterior_cov_sq(dist: &InputDistribution, gain: f64, y: &[f64]) -> Result<f64> {
    match dist {
        InputDistribution::DiscreteAtoms(a) if a.dim() > 1 => {
            let n = a.dim();
            let w = atom_posterior(a, gain, y);
            let mut mean = vec![0.0; n];
            for (pt, wi) in a.points().iter().zip(&w) {
                mean.iter_mut().zip(pt).for_each(|(m, x)| *m += wi * x);
            }
            let mut cov = vec![0.0; n * n];
            for (pt, wi) in a.points().iter().zip(&w) {
                for i in 0..n {
                    for j in 0..n {
                        cov[i * n + j] += wi * (pt[i] - mean[i]) * (pt[j] - mean[j]);
                    }
                }
            }
            Ok(cov.iter().map(|c| c * c).sum::<f64>() / n as f64)
        }
        _ if dist.dim() == 1 => Ok(posterior_scalar(dist, gain * gain, y[0])?.variance().powi(2)),
        _ => Err(MmpeError::Unsupported(format!("posterior covariance of {} is not available", dist.id()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::distance_stats;

    #[test]
    fn trivial_bpsk_snr4() {
        let b = trivial_bounds(&InputDistribution::bpsk(), 4.0, 2.0).unwrap();
        assert!((b[0].value - 0.25).abs() < 1e-15);
        let lmmse = b.iter().find(|r| r.name == "lmmse").unwrap();
        assert!((lmmse.value - 0.2).abs() < 1e-15);
    }

    #[test]
    fn trivial_gaussian_at_zero_snr_is_exact() {
        let b = trivial_bounds(&InputDistribution::gaussian(1.0).unwrap(), 0.0, 4.0).unwrap();
        assert!((b[0].value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hardest_kappa_values() {
        let r = gaussian_hardest(1.0, 3.0, 4.0, 1).unwrap();
        let k = ((1.0 + 3f64.sqrt()) / 2.0).powi(4);
        assert!((r.value - k * 3.0 / 16.0).abs() < 1e-12);
        assert!(gaussian_hardest_kappa(4.0, 1e4).powf(0.25) < 1.01);
        let r2 = gaussian_hardest(2.0, 1.5, 2.0, 1).unwrap();
        assert!((r2.value - 2.0 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn discrete_bpsk_examples() {
        let a = InputDistribution::bpsk();
        let atoms = a.as_atoms().unwrap();
        let st = distance_stats(atoms).unwrap();
        let b0 = discrete_input_bound(&st, atoms.probs(), 0.0, 2.0, 1).unwrap();
        assert!((b0[0].value - 4.0).abs() < 1e-12);
        let b4 = discrete_input_bound(&st, atoms.probs(), 4.0, 2.0, 1).unwrap();
        assert!((b4[0].value - 0.182_001_055).abs() < 1e-8);
    }

    #[test]
    fn phase_table() {
        let up = phase_transition_binary(&[8, 32, 128], 2.0, 2.0).unwrap();
        assert!(up[0].reported > up[1].reported && up[1].reported > up[2].reported);
        assert!(up[2].reported < 1e-6);
        let down = phase_transition_binary(&[8, 32, 128], 0.5, 2.0).unwrap();
        assert!(down.iter().all(|r| (r.reported - 4.0).abs() < 1e-12));
        assert!(phase_transition_binary(&[8], 1.0, 2.0).is_err());
    }

    #[test]
    fn scpp_gaussian_equality() {
        for snr in [1.0, 2.0, 4.0] {
            let b = scpp_bound(1.0, 1.0, snr, 2.0, 1).unwrap();
            assert!((b.value - 1.0 / (1.0 + snr)).abs() < 1e-15);
        }
        let beta = recover_beta(0.5, 1.0, 2.0, 1).unwrap();
        assert!((beta - 1.0).abs() < 1e-12);
        assert!(recover_beta(1.5, 1.0, 2.0, 1).is_err());
        assert!(scpp_constant(0.5).is_err());
    }

    #[test]
    fn kappa_nt_values() {
        assert!((kappa_nt(1, 0.5).unwrap() - 2f64.powf(1.0 / 6.0)).abs() < 1e-14);
        assert!((kappa_nt(5, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(kappa_nt(1, 1.0).is_err());
    }

    #[test]
    fn r_sweep_endpoint() {
        let b = mn_bound_r_sweep(0.05, 5.0, 5.0, 10, &MrSource::NoiseBound).unwrap();
        assert!((b.value - 0.05 / 1.25).abs() < 1e-12);
    }

    #[test]
    fn width_of_linear_bound() {
        let w = transition_width(|s| Ok(1.0 / (1.0 + s) + (2.0 - s)), 5.0).unwrap();
        assert!((w - 3.0).abs() < 1e-6);
    }
}
