//! Evaluation of mmpe(X, snr, p) by closed form, quadrature or Monte Carlo.

use crate::error::{MmpeError, Result};
use crate::estimators::{
    minimize_atom_risk, minimize_posterior_risk, posterior_expectation, posterior_risk, EstimatorSpec,
};
use crate::model::{
    euclid, output_density, output_range, posterior_from_nodes, posterior_scalar, replica_rng, softmax, Atoms,
    InputDistribution, Posterior,
};
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::specfun::gaussian_norm_moment;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;
use std::fmt;

/// Absolute tolerance of the outer y-integral.
pub const OUTER_TOL: f64 = 1e-7;
/// Default master seed.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
/// Default Monte-Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 1_000_000;
/// Samples per replica batch.
pub const DEFAULT_BATCH: usize = 10_000;
const MAX_BREAKS: usize = 64;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ClosedForm => "closed_form",
            Self::Quadrature => "quadrature",
            Self::MonteCarlo => "monte_carlo",
        })
    }
}

/// A p-th error value with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct MmpeEstimate {
    pub value: f64,
    pub method: Method,
    pub stderr: f64,
    pub dist_id: String,
    pub n: usize,
    pub snr: f64,
    pub p: f64,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl MmpeEstimate {
    fn exact(dist: &InputDistribution, snr: f64, p: f64, value: f64, method: Method) -> Self {
        Self { value, method, stderr: 0.0, dist_id: dist.id(), n: dist.dim(), snr, p, seed: None, samples: None }
    }
}

/// Monte-Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub samples: usize,
    pub batch: usize,
    pub seed: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        Self { samples: DEFAULT_SAMPLES, batch: DEFAULT_BATCH, seed: DEFAULT_SEED }
    }
}

impl McOptions {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, ..Self::default() }
    }
}

/// Mean and standard error of a per-sample statistic.
///
/// Batch `b` draws from stream `b` of the master seed and batch sums are
/// reduced in batch order, so the result does not depend on thread count.
pub fn monte_carlo<F>(opts: McOptions, per_sample: F) -> Result<(f64, f64)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if opts.samples == 0 || opts.batch == 0 {
        return Err(MmpeError::Domain("Monte Carlo needs a positive sample and batch count".into()));
    }
    let batches = opts.samples.div_ceil(opts.batch);
    let run = |b: usize| -> Result<(f64, f64, usize)> {
        let mut rng = replica_rng(opts.seed, b as u64);
        let count = opts.batch.min(opts.samples - b * opts.batch);
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..count {
            let v = per_sample(&mut rng)?;
            s += v;
            s2 += v * v;
        }
        Ok((s, s2, count))
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<Result<(f64, f64, usize)>> = {
        use rayon::prelude::*;
        (0..batches).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Result<(f64, f64, usize)>> = (0..batches).map(run).collect();
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let total: usize = parts.iter().map(|p| p.2).sum();
    let mean = parts.iter().map(|p| p.0).sum::<f64>() / total as f64;
    let m2 = parts.iter().map(|p| p.1).sum::<f64>() / total as f64;
    let stderr = ((m2 - mean * mean).max(0.0) / (total.max(2) - 1) as f64).sqrt();
    Ok((mean, stderr))
}

/// Closed form for a Gaussian input of per-dimension variance σ².
///
/// ```
/// let e = mmpe::engine::mmpe_gaussian_closed_form(1.0, 1.0, 2.0, 1).unwrap();
/// assert!((e.value - 0.5).abs() < 1e-15);
/// ```
pub fn mmpe_gaussian_closed_form(sigma2: f64, snr: f64, p: f64, n: usize) -> Result<MmpeEstimate> {
    if !(p >= 1.0) {
        return Err(MmpeError::Domain(format!("Gaussian closed form needs p >= 1, got {p}")));
    }
    let dist = InputDistribution::vector_gaussian(n, sigma2)?;
    check_snr(snr)?;
    let value = sigma2.powf(p / 2.0) * gaussian_norm_moment(n, p)? / (1.0 + sigma2 * snr).powf(p / 2.0);
    Ok(MmpeEstimate::exact(&dist, snr, p, value, Method::ClosedForm))
}

fn check_snr(snr: f64) -> Result<()> {
    if !(snr >= 0.0) || !snr.is_finite() {
        return Err(MmpeError::Domain(format!("snr must be nonnegative, got {snr}")));
    }
    Ok(())
}

fn check_order(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(MmpeError::Domain(format!("order must be positive, got {p}")));
    }
    Ok(())
}

fn scalar_only(dist: &InputDistribution) -> Result<()> {
    if dist.dim() != 1 {
        return Err(MmpeError::Unsupported("quadrature path needs n = 1; use Monte Carlo".into()));
    }
    Ok(())
}

/// Breakpoints for the outer y-integral: the noiseless images of the atoms.
fn y_breaks(dist: &InputDistribution, snr: f64) -> Vec<f64> {
    let (lo, hi) = output_range(dist, snr);
    let mut pts = vec![lo, 0.0, hi];
    if let Some(a) = dist.as_atoms() {
        if a.len() <= MAX_BREAKS {
            pts.extend(a.scalar_points().iter().map(|x| snr.sqrt() * x));
        }
    }
    pts
}

/// `∫ p_Y(y)·g(y) dy` over the working y-range.
pub fn expect_over_output<G: FnMut(f64) -> Result<f64>>(dist: &InputDistribution, snr: f64, mut g: G) -> Result<f64> {
    scalar_only(dist)?;
    let mut err = None;
    let r = integrate_with_breaks(
        |y| {
            if err.is_some() {
                return 0.0;
            }
            let d = match output_density(dist, snr, y) {
                Ok(d) => d,
                Err(e) => {
                    err = Some(e);
                    return 0.0;
                }
            };
            if d < 1e-300 {
                return 0.0;
            }
            match g(y) {
                Ok(v) => d * v,
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            }
        },
        &y_breaks(dist, snr),
        QuadOptions { abs_tol: OUTER_TOL * 1e-2, rel_tol: 1e-10, max_intervals: 4000 },
    );
    match err {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// mmpe of a scalar input by quadrature over y of the pointwise minimum risk.
pub fn mmpe_scalar(dist: &InputDistribution, snr: f64, p: f64) -> Result<MmpeEstimate> {
    scalar_only(dist)?;
    check_snr(snr)?;
    check_order(p)?;
    let value = if snr == 0.0 {
        minimize_posterior_risk(&posterior_scalar(dist, 0.0, 0.0)?, p)?.risk
    } else {
        expect_over_output(dist, snr, |y| Ok(minimize_posterior_risk(&posterior_scalar(dist, snr, y)?, p)?.risk))?
    };
    Ok(MmpeEstimate::exact(dist, snr, p, value, Method::Quadrature))
}

/// mmpe by the best available route: closed form, quadrature (n = 1) or Monte Carlo.
pub fn mmpe(dist: &InputDistribution, snr: f64, p: f64, mc: McOptions) -> Result<MmpeEstimate> {
    match dist {
        InputDistribution::ScalarGaussian { sigma2 } | InputDistribution::VectorGaussian { sigma2, .. } if p >= 1.0 => {
            mmpe_gaussian_closed_form(*sigma2, snr, p, dist.dim())
        }
        _ if dist.dim() == 1 => mmpe_scalar(dist, snr, p),
        InputDistribution::DiscreteAtoms(a) if a.len() == 2 => mmpe_two_atom(a, snr, p),
        _ => mmpe_vector_mc(dist, snr, p, mc),
    }
}

/// Scalar law of `X` projected on the line through two atoms.
///
/// The optimal estimate of a two-atom vector lies on that line, and the
/// projection of `Y` on it is sufficient, so the vector problem reduces to a
/// scalar two-point one.
pub fn two_atom_projection(a: &Atoms) -> Result<InputDistribution> {
    if a.len() != 2 {
        return Err(MmpeError::Unsupported("projection needs exactly two atoms".into()));
    }
    let (x1, x2) = (&a.points()[0], &a.points()[1]);
    let d = euclid(x1, x2);
    let dot = |x: &[f64]| x.iter().zip(x1.iter().zip(x2)).map(|(v, (a, b))| v * (a - b)).sum::<f64>() / d;
    InputDistribution::atoms(&[(dot(x1), a.probs()[0]), (dot(x2), a.probs()[1])])
}

/// mmpe of a two-atom input in any dimension, by quadrature on the projection.
pub fn mmpe_two_atom(a: &Atoms, snr: f64, p: f64) -> Result<MmpeEstimate> {
    let s = two_atom_projection(a)?;
    let e = mmpe_scalar(&s, snr, p)?;
    let dist = InputDistribution::DiscreteAtoms(a.clone());
    Ok(MmpeEstimate::exact(&dist, snr, p, e.value / a.dim() as f64, Method::Quadrature))
}

/// `‖X − E[X|Y]‖_p^p` for Gaussian, scalar or two-atom inputs.
pub fn conditional_mean_error(dist: &InputDistribution, snr: f64, p: f64) -> Result<MmpeEstimate> {
    match dist {
        InputDistribution::ScalarGaussian { sigma2 } | InputDistribution::VectorGaussian { sigma2, .. } if p >= 1.0 => {
            mmpe_gaussian_closed_form(*sigma2, snr, p, dist.dim())
        }
        _ if dist.dim() == 1 => {
            let cm = EstimatorSpec::ConditionalMean { dist: dist.clone(), snr };
            Ok(MmpeEstimate::exact(dist, snr, p, p_error_of(&cm, dist, snr, p)?, Method::Quadrature))
        }
        InputDistribution::DiscreteAtoms(a) if a.len() == 2 => {
            let s = two_atom_projection(a)?;
            let cm = EstimatorSpec::ConditionalMean { dist: s.clone(), snr };
            let v = p_error_of(&cm, &s, snr, p)? / a.dim() as f64;
            Ok(MmpeEstimate::exact(dist, snr, p, v, Method::Quadrature))
        }
        _ => Err(MmpeError::Unsupported(format!("conditional-mean error of {} needs Monte Carlo", dist.id()))),
    }
}

/// `(1/n)·E[Err^{p/2}]` of the optimal estimator, by Monte Carlo.
pub fn mmpe_vector_mc(dist: &InputDistribution, snr: f64, p: f64, mc: McOptions) -> Result<MmpeEstimate> {
    check_snr(snr)?;
    check_order(p)?;
    let est = EstimatorSpec::optimal(dist, snr, p);
    p_error_mc(&est, dist, snr, p, mc)
}

/// `‖X − f(Y)‖_p^p` of any estimator by Monte Carlo.
pub fn p_error_mc(est: &EstimatorSpec, dist: &InputDistribution, snr: f64, p: f64, mc: McOptions) -> Result<MmpeEstimate> {
    let n = dist.dim();
    if let (InputDistribution::DiscreteAtoms(a), EstimatorSpec::NumericPointwise { .. }) = (dist, est) {
        if a.dim() > crate::estimators::VECTOR_CAP {
            return Err(MmpeError::DimensionCap { n: a.dim(), cap: crate::estimators::VECTOR_CAP });
        }
    }
    let s = snr.sqrt();
    let (value, stderr) = monte_carlo(mc, |rng| {
        let mut x = vec![0.0; n];
        dist.sample_into(rng, &mut x);
        let y: Vec<f64> = x.iter().map(|xi| s * xi + rng.sample::<f64, _>(StandardNormal)).collect();
        let mut v = vec![0.0; n];
        est.eval_vector(&y, &mut v)?;
        let err: f64 = x.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok(err.powf(p / 2.0) / n as f64)
    })?;
    Ok(MmpeEstimate {
        value,
        method: Method::MonteCarlo,
        stderr,
        dist_id: dist.id(),
        n,
        snr,
        p,
        seed: Some(mc.seed),
        samples: Some(mc.samples),
    })
}

/// `‖X − f(Y)‖_p^p` for a scalar input, by quadrature.
pub fn p_error_of(est: &EstimatorSpec, dist: &InputDistribution, snr: f64, p: f64) -> Result<f64> {
    scalar_only(dist)?;
    check_snr(snr)?;
    check_order(p)?;
    if snr == 0.0 {
        return Ok(posterior_risk(&posterior_scalar(dist, 0.0, 0.0)?, est.eval(0.0)?, p));
    }
    expect_over_output(dist, snr, |y| Ok(posterior_risk(&posterior_scalar(dist, snr, y)?, est.eval(y)?, p)))
}

/// Conditional mmpe given side information `√Δ·X + Z'`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalMmpe {
    /// Evaluated through the single combined observation at `snr0 + Δ`.
    pub combined: MmpeEstimate,
    /// Direct Monte Carlo over both observations.
    pub two_observation: MmpeEstimate,
}

/// mmpe of X from `Y_{snr0}` and `√Δ·X + Z'`.
pub fn conditional_mmpe(
    dist: &InputDistribution,
    snr0: f64,
    p: f64,
    delta: f64,
    mc: McOptions,
) -> Result<ConditionalMmpe> {
    check_snr(snr0)?;
    check_order(p)?;
    if !(delta >= 0.0) {
        return Err(MmpeError::Domain(format!("side SNR must be nonnegative, got {delta}")));
    }
    let combined = mmpe(dist, snr0 + delta, p, mc)?;
    let n = dist.dim();
    let (s0, sd) = (snr0.sqrt(), delta.sqrt());
    let (value, stderr) = monte_carlo(mc, |rng| {
        let mut x = vec![0.0; n];
        dist.sample_into(rng, &mut x);
        let y1: Vec<f64> = x.iter().map(|xi| s0 * xi + rng.sample::<f64, _>(StandardNormal)).collect();
        let y2: Vec<f64> = x.iter().map(|xi| sd * xi + rng.sample::<f64, _>(StandardNormal)).collect();
        let v = two_observation_estimate(dist, s0, sd, &y1, &y2, p)?;
        let err: f64 = x.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok(err.powf(p / 2.0) / n as f64)
    })?;
    let two_observation = MmpeEstimate {
        value,
        method: Method::MonteCarlo,
        stderr,
        dist_id: dist.id(),
        n,
        snr: snr0,
        p,
        seed: Some(mc.seed),
        samples: Some(mc.samples),
    };
    Ok(ConditionalMmpe { combined, two_observation })
}

/// Optimal estimate from two independent looks at X with gains `g1`, `g2`.
fn two_observation_estimate(dist: &InputDistribution, g1: f64, g2: f64, y1: &[f64], y2: &[f64], p: f64) -> Result<Vec<f64>> {
    match dist {
        InputDistribution::ScalarGaussian { sigma2 } | InputDistribution::VectorGaussian { sigma2, .. } => {
            // symmetric unimodal posterior: its center is optimal for every p >= 1
            let prec = 1.0 / sigma2 + g1 * g1 + g2 * g2;
            Ok(y1.iter().zip(y2).map(|(a, b)| (g1 * a + g2 * b) / prec).collect())
        }
        InputDistribution::DiscreteAtoms(a) => {
            let mut lw: Vec<f64> = a
                .points()
                .iter()
                .zip(a.probs())
                .map(|(x, q)| {
                    let d: f64 = x
                        .iter()
                        .zip(y1.iter().zip(y2))
                        .map(|(xi, (u, w))| (u - g1 * xi).powi(2) + (w - g2 * xi).powi(2))
                        .sum();
                    q.ln() - 0.5 * d
                })
                .collect();
            softmax(&mut lw);
            if a.dim() == 1 {
                let post = Posterior::Weighted { points: a.scalar_points(), weights: lw };
                Ok(vec![minimize_posterior_risk(&post, p)?.v])
            } else {
                Ok(minimize_atom_risk(a.points(), &lw, p))
            }
        }
        _ => {
            let (pts, prior) = dist.scalar_nodes()?;
            // fold the second look into the prior weights
            let w: Vec<f64> = pts.iter().zip(&prior).map(|(x, q)| q * (-0.5 * (y2[0] - g2 * x).powi(2)).exp()).collect();
            let post = posterior_from_nodes(&pts, &w, g1, y1[0]);
            Ok(vec![minimize_posterior_risk(&post, p)?.v])
        }
    }
}

/// Reweighted objective at `y0` and candidate `v`:
/// `Σ_x p(x)·φ(z)·e^{c z²}·|x − v|^p` with `z = y0 − √snr0·x`.
fn reweighted_inner(dist: &InputDistribution, snr: f64, snr0: f64, y0: f64, v: f64, p: f64) -> Result<f64> {
    let c = (snr0 - snr) / (2.0 * snr0);
    let s0 = snr0.sqrt();
    let phi = |z: f64| (-0.5 * z * z + c * z * z).exp() / (2.0 * PI).sqrt();
    match dist {
        InputDistribution::ScalarGaussian { sigma2 } => {
            let sd = sigma2.sqrt();
            let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 400 };
            let lam = 1.0 / sigma2 + snr;
            let center = snr / s0 * y0 / lam;
            let w = 12.0 / lam.sqrt();
            let r = integrate_with_breaks(
                |x| {
                    let prior = (-0.5 * x * x / sigma2).exp() / (sd * (2.0 * PI).sqrt());
                    prior * phi(y0 - s0 * x) * (x - v).abs().powf(p)
                },
                &[center - w, v.clamp(center - w, center + w), center, center + w],
                opts,
            );
            Ok(r.value)
        }
        _ => {
            let (xs, ws) = dist.scalar_nodes()?;
            Ok(xs.iter().zip(ws).map(|(x, q)| q * phi(y0 - s0 * x) * (x - v).abs().powf(p)).sum())
        }
    }
}

/// Change-of-measure evaluation of an estimator `f` applied at `snr0`,
/// weighted so the result targets `snr`.
pub fn change_of_measure_eval(
    dist: &InputDistribution,
    snr: f64,
    snr0: f64,
    p: f64,
    f: &EstimatorSpec,
) -> Result<f64> {
    check_change(dist, snr, snr0, p)?;
    let scale = (snr / snr0).sqrt();
    let (lo, hi) = output_range(dist, snr0);
    let pad = (snr0 / snr).sqrt();
    integrate_reweighted(dist, snr0, lo * pad, hi * pad, |y0| {
        Ok(scale * reweighted_inner(dist, snr, snr0, y0, f.eval(y0)?, p)?)
    })
}

/// The reweighted objective minimized pointwise in v, which attains the
/// infimum over all estimators applied at `snr0`.
pub fn change_of_measure_optimal(dist: &InputDistribution, snr: f64, snr0: f64, p: f64) -> Result<f64> {
    check_change(dist, snr, snr0, p)?;
    let scale = (snr / snr0).sqrt();
    let (lo, hi) = output_range(dist, snr0);
    let pad = (snr0 / snr).sqrt();
    let (vlo, vhi) = match dist.scalar_support() {
        Some(b) => b,
        None => {
            let sd = dist.gaussian_sigma2().unwrap_or(1.0).sqrt();
            (-12.0 * sd, 12.0 * sd)
        }
    };
    integrate_reweighted(dist, snr0, lo * pad, hi * pad, |y0| {
        let mut first_err = None;
        let obj = |v: f64| match reweighted_inner(dist, snr, snr0, y0, v, p) {
            Ok(r) => r,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::INFINITY
            }
        };
        let (a, b) = match dist {
            InputDistribution::ScalarGaussian { sigma2 } => {
                let lam = 1.0 / sigma2 + snr;
                let center = snr / snr0.sqrt() * y0 / lam;
                (center - 10.0 / lam.sqrt(), center + 10.0 / lam.sqrt())
            }
            _ => (vlo, vhi),
        };
        let m = crate::optimize::brent(obj, a, b, crate::estimators::INNER_TOL, crate::estimators::INNER_MAX_ITER);
        match first_err {
            Some(e) => Err(e),
            None => Ok(scale * m.fx),
        }
    })
}

fn check_change(dist: &InputDistribution, snr: f64, snr0: f64, p: f64) -> Result<()> {
    scalar_only(dist)?;
    check_order(p)?;
    if !(snr > 0.0 && snr <= snr0) {
        return Err(MmpeError::Domain(format!("change of measure needs 0 < snr <= snr0, got {snr} and {snr0}")));
    }
    Ok(())
}

fn integrate_reweighted<G: FnMut(f64) -> Result<f64>>(
    dist: &InputDistribution,
    snr0: f64,
    lo: f64,
    hi: f64,
    mut g: G,
) -> Result<f64> {
    let mut pts = vec![lo, 0.0, hi];
    if let Some(a) = dist.as_atoms() {
        if a.len() <= MAX_BREAKS {
            pts.extend(a.scalar_points().iter().map(|x| snr0.sqrt() * x));
        }
    }
    let mut err = None;
    let r = integrate_with_breaks(
        |y| {
            if err.is_some() {
                return 0.0;
            }
            g(y).unwrap_or_else(|e| {
                err = Some(e);
                0.0
            })
        },
        &pts,
        QuadOptions { abs_tol: OUTER_TOL * 1e-2, rel_tol: 1e-10, max_intervals: 4000 },
    );
    match err {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// Test function applied to the observation in orthogonality residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFn {
    One,
    Y,
    Y2,
    SinY,
    TanhY,
}

impl TestFn {
    pub const ALL: [TestFn; 5] = [Self::One, Self::Y, Self::Y2, Self::SinY, Self::TanhY];

    pub fn apply(self, y: f64) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Y => y,
            Self::Y2 => y * y,
            Self::SinY => y.sin(),
            Self::TanhY => y.tanh(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::One => "1",
            Self::Y => "y",
            Self::Y2 => "y^2",
            Self::SinY => "sin(y)",
            Self::TanhY => "tanh(y)",
        }
    }
}

/// Residuals of the optimal estimator at one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    /// `E[|X−f_p|^{p−2}(X−f_p)·g(Y)]` per test function.
    pub orthogonality: Vec<(TestFn, f64)>,
    /// `E[(X−f_p)·Y]`.
    pub classical: f64,
    /// `E[X − f_p]`.
    pub bias: f64,
}

/// Score and `E[X|y] − f(y)` for a two-atom posterior, with the gaps `x_i − f`
/// formed from the mixing weights so they survive when `f` is within rounding
/// of an atom.
fn two_atom_score(points: &[f64], weights: &[f64], p: f64) -> (f64, f64) {
    let k = p - 1.0;
    let mut lam = [weights[0].ln() / k, weights[1].ln() / k];
    softmax(&mut lam);
    let span = points[1] - points[0];
    let (d0, d1) = (-span * lam[1], span * lam[0]);
    let score = weights[0] * d0.signum() * d0.abs().powf(k) + weights[1] * d1.signum() * d1.abs().powf(k);
    (score, weights[0] * d0 + weights[1] * d1)
}

/// Orthogonality-type residuals of the optimal p-th estimator, by quadrature.
pub fn diagnostics_residuals(dist: &InputDistribution, snr: f64, p: f64, gs: &[TestFn]) -> Result<Residuals> {
    scalar_only(dist)?;
    check_order(p)?;
    let cond = |y: f64| -> Result<(f64, f64)> {
        let post = posterior_scalar(dist, snr, y)?;
        if let Posterior::Weighted { points, weights } = &post {
            if points.len() == 2 && p > 1.0 {
                return Ok(two_atom_score(points, weights, p));
            }
        }
        let v = minimize_posterior_risk(&post, p)?.v;
        let score = posterior_expectation(&post, |x| (x - v).signum() * (x - v).abs().powf(p - 1.0), v);
        let diff = post.mean() - v;
        Ok((score, diff))
    };
    let mut orthogonality = Vec::with_capacity(gs.len());
    for &g in gs {
        let r = expect_over_output(dist, snr, |y| Ok(cond(y)?.0 * g.apply(y)))?;
        orthogonality.push((g, r));
    }
    let classical = expect_over_output(dist, snr, |y| Ok(cond(y)?.1 * y))?;
    let bias = expect_over_output(dist, snr, |y| Ok(cond(y)?.1))?;
    Ok(Residuals { orthogonality, classical, bias })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert!((mmpe_gaussian_closed_form(1.0, 0.0, 4.0, 1).unwrap().value - 3.0).abs() < 1e-12);
        assert!((mmpe_gaussian_closed_form(4.0, 1.0, 2.0, 1).unwrap().value - 0.8).abs() < 1e-14);
        assert!(mmpe_gaussian_closed_form(1.0, 1.0, 0.5, 1).is_err());
    }

    #[test]
    fn bpsk_at_zero_snr_is_variance() {
        let e = mmpe_scalar(&InputDistribution::bpsk(), 0.0, 2.0).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_estimator_gives_moment() {
        let d = InputDistribution::pam(4).unwrap();
        let v = p_error_of(&EstimatorSpec::Constant(0.0), &d, 1.0, 3.0).unwrap();
        assert!((v - d.norm_moment(3.0)).abs() < 1e-8);
    }

    #[test]
    fn monte_carlo_is_thread_independent() {
        let opts = McOptions { samples: 25_000, batch: 1000, seed: 3 };
        let f = |r: &mut ChaCha8Rng| Ok(r.random::<f64>());
        assert_eq!(monte_carlo(opts, f).unwrap(), monte_carlo(opts, f).unwrap());
    }

    #[test]
    fn change_of_measure_rejects_order() {
        let g = InputDistribution::gaussian(1.0).unwrap();
        assert!(change_of_measure_eval(&g, 2.0, 1.0, 2.0, &EstimatorSpec::Constant(0.0)).is_err());
    }
}
