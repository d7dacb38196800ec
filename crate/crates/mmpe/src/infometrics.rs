//! Entropy and mutual-information consequences of the MMPE.
//!
//! Differential entropies are computed in nats and reported in bits.

use crate::engine::{expect_over_output, mmpe, McOptions};
use crate::error::{MmpeError, Result};
use crate::estimators::EstimatorSpec;
use crate::model::{distance_stats, output_density, posterior_scalar, DistanceStats, InputDistribution, Posterior};
use crate::specfun::{ln_ball_volume, ln_fano_constant, ln_generalized_q};
use std::f64::consts::{E, LN_2, PI};

/// `½·log₂(πe/6)`, the one-dimensional shaping loss in bits.
pub fn shaping_loss_bits() -> f64 {
    0.5 * (PI * E / 6.0).log2()
}

fn check_continuous(dist: &InputDistribution) -> Result<()> {
    if dist.as_atoms().is_some() {
        return Err(MmpeError::Unsupported("differential entropy of a discrete input is -infinity".into()));
    }
    Ok(())
}

/// Upper bound `(n/2)·log(k²_{n,p}·n^{2/p}·mmpe^{2/p}(X, snr, p))` on `h(X|Y)`, in bits.
pub fn entropy_bound(dist: &InputDistribution, snr: f64, p: f64, mc: McOptions) -> Result<f64> {
    check_continuous(dist)?;
    let n = dist.dim() as f64;
    let m = mmpe(dist, snr, p, mc)?.value;
    let nats = n * ln_fano_constant(dist.dim(), p)? + n / p * (n.ln() + m.ln());
    Ok(nats / LN_2)
}

/// The weaker `(n/2)·log(2πe·n^{(2−p)/p}·mmpe^{2/p})` for p ≥ 2, in bits.
pub fn trivial_entropy_bound(dist: &InputDistribution, snr: f64, p: f64, mc: McOptions) -> Result<f64> {
    check_continuous(dist)?;
    if !(p >= 2.0) {
        return Err(MmpeError::Domain(format!("this bound needs p >= 2, got {p}")));
    }
    let n = dist.dim() as f64;
    let m = mmpe(dist, snr, p, mc)?.value;
    let nats = 0.5 * n * ((2.0 * PI * E).ln() + (2.0 - p) / p * n.ln() + 2.0 / p * m.ln());
    Ok(nats / LN_2)
}

/// Differential entropy of X in nats.
fn input_entropy(dist: &InputDistribution) -> Result<f64> {
    match dist {
        InputDistribution::ScalarGaussian { sigma2 } | InputDistribution::VectorGaussian { sigma2, .. } => {
            Ok(0.5 * dist.dim() as f64 * (2.0 * PI * E * sigma2).ln())
        }
        InputDistribution::UniformBall { n, radius } => ln_ball_volume(*n, *radius),
        InputDistribution::TabulatedScalarPdf(t) => {
            let f: Vec<f64> = t.density().iter().map(|d| if *d > 0.0 { -d * d.ln() } else { 0.0 }).collect();
            Ok(t.grid().windows(2).zip(f.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum())
        }
        InputDistribution::DiscreteAtoms(_) => {
            Err(MmpeError::Unsupported("differential entropy of a discrete input is -infinity".into()))
        }
    }
}

/// `h(Y)` for a scalar input, in nats.
fn output_entropy(dist: &InputDistribution, snr: f64) -> Result<f64> {
    expect_over_output(dist, snr, |y| Ok(-output_density(dist, snr, y)?.ln()))
}

/// `h(X|Y)` in bits: exact for Gaussians, `h(X) − h(Y) + h(Z)` by quadrature
/// for other scalar laws.
pub fn conditional_entropy(dist: &InputDistribution, snr: f64) -> Result<f64> {
    check_continuous(dist)?;
    if let Some(s2) = dist.gaussian_sigma2() {
        return Ok(0.5 * dist.dim() as f64 * (2.0 * PI * E * s2 / (1.0 + s2 * snr)).log2());
    }
    if dist.dim() != 1 {
        return Err(MmpeError::Unsupported("conditional entropy needs a Gaussian or scalar input".into()));
    }
    let hz = 0.5 * (2.0 * PI * E).ln();
    let nats = input_entropy(dist)? - output_entropy(dist, snr)? + hz;
    Ok(nats / LN_2)
}

/// `I(X;Y) = h(Y) − ½·log(2πe)` for a scalar discrete input, in bits.
pub fn mutual_information_scalar(dist: &InputDistribution, snr: f64) -> Result<f64> {
    match dist.as_atoms() {
        Some(a) if a.dim() == 1 => {}
        _ => return Err(MmpeError::Unsupported("mutual information oracle needs scalar atoms".into())),
    }
    if !(snr >= 0.0) {
        return Err(MmpeError::Domain(format!("snr must be nonnegative, got {snr}")));
    }
    if snr == 0.0 {
        return Ok(0.0);
    }
    Ok(((output_entropy(dist, snr)? - 0.5 * (2.0 * PI * E).ln()) / LN_2).max(0.0))
}

/// Decomposition of an Ozarow–Wyner-type gap, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct GapBreakdown {
    pub snr: f64,
    pub p: f64,
    /// `H(X_D)`.
    pub entropy: f64,
    pub g1: f64,
    pub g2: f64,
    /// `n·(G1 + G2)`.
    pub gap: f64,
    /// `max(H − gap, 0)`.
    pub lower_bound: f64,
    pub exact_mi: Option<f64>,
}

impl GapBreakdown {
    fn assemble(snr: f64, p: f64, n: usize, entropy: f64, g1: f64, g2: f64, exact_mi: Option<f64>) -> Self {
        let gap = n as f64 * (g1 + g2);
        Self { snr, p, entropy, g1, g2, gap, lower_bound: (entropy - gap).max(0.0), exact_mi }
    }
}

/// Estimation-error term of the classical gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OwVariant {
    /// Linear MMSE.
    Lmmse,
    /// MMSE, the sharpened form.
    Mmse,
}

fn scalar_atoms(dist: &InputDistribution) -> Result<DistanceStats> {
    match dist.as_atoms() {
        Some(a) => distance_stats(a),
        None => Err(MmpeError::Unsupported("gap bounds need a discrete input".into())),
    }
}

/// Classical gap `½log(πe/6) + ½log(1 + 12·e/d²_min)` with `e` the LMMSE or MMSE.
///
/// `d²_min/12` is the second moment of the uniform dither on `[−d_min/2, d_min/2]`.
pub fn ow_gap_original(dist: &InputDistribution, snr: f64, variant: OwVariant, with_mi: bool) -> Result<GapBreakdown> {
    if dist.dim() != 1 {
        return Err(MmpeError::Unsupported("the classical gap is one-dimensional".into()));
    }
    let stats = scalar_atoms(dist)?;
    let e = match variant {
        OwVariant::Lmmse => {
            let v = dist.variance();
            v / (1.0 + v * snr)
        }
        OwVariant::Mmse => mmpe(dist, snr, 2.0, McOptions::default())?.value,
    };
    let g1 = 0.5 * (1.0 + 12.0 * e / (stats.d_min * stats.d_min)).log2();
    let h = dist.as_atoms().map(|a| a.entropy_bits()).unwrap_or(0.0);
    let mi = if with_mi { Some(mutual_information_scalar(dist, snr)?) } else { None };
    Ok(GapBreakdown::assemble(snr, 2.0, 1, h, g1, shaping_loss_bits(), mi))
}

/// How G1 is evaluated in [`ow_gap_generalized`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum G1Mode {
    /// `log(‖U + X − f_p(Y)‖_p/‖U‖_p)` by quadrature (n = 1).
    Exact,
    /// `log(1 + mmpe^{1/p}/‖U‖_p)`, valid for p ≥ 1.
    Triangle,
}

/// Settings for [`ow_gap_generalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct OwOptions {
    /// Dither law; defaults to the uniform ball of radius `d_min/2`.
    pub dither: Option<InputDistribution>,
    pub g1: G1Mode,
    /// Also compute the exact mutual information (n = 1).
    pub exact_mi: bool,
    pub mc: McOptions,
}

impl Default for OwOptions {
    fn default() -> Self {
        Self { dither: None, g1: G1Mode::Exact, exact_mi: false, mc: McOptions::default() }
    }
}

/// Support radius of a dither law, if compact.
fn dither_radius(u: &InputDistribution) -> Option<f64> {
    match u {
        InputDistribution::UniformBall { radius, .. } => Some(*radius),
        InputDistribution::TabulatedScalarPdf(t) => {
            Some(t.grid().iter().zip(t.density()).filter(|(_, d)| **d > 0.0).map(|(x, _)| x.abs()).fold(0.0, f64::max))
        }
        _ => None,
    }
}

/// `E|U + c|^p` for a scalar dither.
fn dither_abs_moment(u: &InputDistribution, c: f64, p: f64) -> f64 {
    match u {
        InputDistribution::UniformBall { radius: h, .. } => {
            let f = |t: f64| t.signum() * t.abs().powf(p + 1.0) / (p + 1.0);
            (f(c + h) - f(c - h)) / (2.0 * h)
        }
        InputDistribution::TabulatedScalarPdf(t) => {
            let g: Vec<f64> = t.grid().iter().zip(t.density()).map(|(x, d)| d * (x + c).abs().powf(p)).collect();
            t.grid().windows(2).zip(g.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
        }
        _ => f64::NAN,
    }
}

/// `G2 = log(k_{n,p}·n^{1/p}·‖U‖_p/e^{h(U)/n})` in bits.
pub fn g2_term(dither: &InputDistribution, p: f64) -> Result<f64> {
    let n = dither.dim();
    let nf = n as f64;
    let nats = ln_fano_constant(n, p)? + nf.ln() / p + dither.norm_moment(p).ln() / p - input_entropy(dither)? / nf;
    Ok(nats / LN_2)
}

/// G2 for the uniform ball dither in n dimensions (independent of the radius).
pub fn g2_ball(n: usize, p: f64) -> Result<f64> {
    g2_term(&InputDistribution::uniform_ball(n, 1.0)?, p)
}

/// Generalized gap `n·(G1 + G2)` for a discrete input and dither U.
pub fn ow_gap_generalized(dist: &InputDistribution, snr: f64, p: f64, opts: &OwOptions) -> Result<GapBreakdown> {
    if !(p > 0.0) {
        return Err(MmpeError::Domain(format!("order must be positive, got {p}")));
    }
    let stats = scalar_atoms(dist)?;
    let n = dist.dim();
    let dither = match &opts.dither {
        Some(u) => u.clone(),
        None => InputDistribution::uniform_ball(n, stats.d_min / 2.0)?,
    };
    if dither.dim() != n {
        return Err(MmpeError::Domain(format!("dither has dimension {}, input has {n}", dither.dim())));
    }
    match dither_radius(&dither) {
        Some(r) if r <= stats.d_min / 2.0 * (1.0 + 1e-12) => {}
        _ => {
            return Err(MmpeError::Domain(format!(
                "dither support must fit in a ball of radius d_min/2 = {}",
                stats.d_min / 2.0
            )))
        }
    }
    let up = dither.norm_moment(p);
    let g1 = match opts.g1 {
        G1Mode::Exact => {
            if n != 1 {
                return Err(MmpeError::Unsupported("exact G1 needs n = 1; use the triangle bound".into()));
            }
            let est = EstimatorSpec::optimal(dist, snr, p);
            let total = if snr == 0.0 {
                dithered_risk(&posterior_scalar(dist, 0.0, 0.0)?, est.eval(0.0)?, &dither, p)
            } else {
                expect_over_output(dist, snr, |y| {
                    Ok(dithered_risk(&posterior_scalar(dist, snr, y)?, est.eval(y)?, &dither, p))
                })?
            };
            (total.ln() - up.ln()) / p / LN_2
        }
        G1Mode::Triangle => {
            if p < 1.0 {
                return Err(MmpeError::Domain("the triangle bound on G1 needs p >= 1".into()));
            }
            let m = mmpe(dist, snr, p, opts.mc)?.value;
            (1.0 + (m / up).powf(1.0 / p)).log2()
        }
    };
    let g2 = g2_term(&dither, p)?;
    let h = dist.as_atoms().map(|a| a.entropy_bits()).unwrap_or(0.0);
    let mi = if opts.exact_mi && n == 1 { Some(mutual_information_scalar(dist, snr)?) } else { None };
    Ok(GapBreakdown::assemble(snr, p, n, h, g1, g2, mi))
}

fn dithered_risk(post: &Posterior, v: f64, dither: &InputDistribution, p: f64) -> f64 {
    match post {
        Posterior::Weighted { points, weights } => {
            points.iter().zip(weights).map(|(x, w)| w * dither_abs_moment(dither, x - v, p)).sum()
        }
        Posterior::Gaussian { .. } => f64::NAN,
    }
}

/// Large-n bound `log(1 + 2(d_max/d_min)·((p+n)/n·Q̄(n/2; snr·d²_min/8))^{1/p})` on G1, in bits.
pub fn g1_asymptotic_bound(stats: &DistanceStats, snr: f64, p: f64, n: usize) -> Result<f64> {
    if !(p >= 1.0) || n == 0 {
        return Err(MmpeError::Domain("needs p >= 1 and n >= 1".into()));
    }
    let nf = n as f64;
    let q = ln_generalized_q(nf / 2.0, snr * stats.d_min * stats.d_min / 8.0)?.exp();
    Ok((1.0 + 2.0 * stats.d_max / stats.d_min * ((p + nf) / nf * q).powf(1.0 / p)).log2())
}

/// Number of PAM levels `⌊√(1+snr)⌋` matched to the Gaussian capacity.
pub fn capacity_matched_levels(snr: f64) -> usize {
    (1.0 + snr).sqrt().floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shaping_loss() {
        assert!((shaping_loss_bits() - 0.254_614_334_8).abs() < 1e-9);
    }

    #[test]
    fn gaussian_entropy_bound_is_tight_at_p2() {
        let g = InputDistribution::gaussian(1.0).unwrap();
        let b = entropy_bound(&g, 1.0, 2.0, McOptions::default()).unwrap();
        let exact = conditional_entropy(&g, 1.0).unwrap();
        assert!((b - exact).abs() < 1e-9);
        assert!((exact - 0.5 * (PI * E).log2()).abs() < 1e-12);
    }

    #[test]
    fn bpsk_information_limits() {
        let b = InputDistribution::bpsk();
        assert_eq!(mutual_information_scalar(&b, 0.0).unwrap(), 0.0);
        assert!((mutual_information_scalar(&b, 400.0).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn uniform_dither_moment() {
        let u = InputDistribution::uniform_ball(1, 1.0).unwrap();
        assert!((dither_abs_moment(&u, 0.0, 2.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((dither_abs_moment(&u, 2.0, 2.0) - (4.0 + 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn dither_too_wide_rejected() {
        let opts = OwOptions { dither: Some(InputDistribution::uniform_ball(1, 1.5).unwrap()), ..OwOptions::default() };
        assert!(ow_gap_generalized(&InputDistribution::bpsk(), 1.0, 2.0, &opts).is_err());
    }

    #[test]
    fn classical_gap_is_a_valid_bound_at_low_snr() {
        let d = InputDistribution::pam(4).unwrap();
        let g = ow_gap_original(&d, 1.0, OwVariant::Lmmse, true).unwrap();
        assert!(g.lower_bound <= g.exact_mi.unwrap());
        let v: f64 = 5.0 / 6.0;
        assert!((g.g1 - 0.5 * (1.0 + 12.0 * v / 4.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn levels() {
        assert_eq!(capacity_matched_levels(24.0), 5);
        assert_eq!(capacity_matched_levels(2.9), 1);
    }
}
