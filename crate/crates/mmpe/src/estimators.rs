//! Optimal p-th error estimators: closed forms and pointwise numeric minimizers.

use crate::error::{MmpeError, Result};
use crate::model::{euclid, posterior_scalar, softmax, Atoms, InputDistribution, Posterior};
use crate::optimize::{bisect, brent, nelder_mead};
use crate::quad::QuadOptions;

/// Tolerance on the minimizing v.
pub const INNER_TOL: f64 = 1e-10;
/// Iteration cap of the scalar minimizer.
pub const INNER_MAX_ITER: usize = 200;
/// Grid size used when the loss is not convex (p < 1).
pub const NONCONVEX_GRID: usize = 1024;
/// Search half-width for unbounded posteriors, in posterior standard deviations.
pub const TRUNCATION_SDS: f64 = 10.0;
/// Largest dimension handled by the vector numeric estimator.
pub const VECTOR_CAP: usize = 8;

/// A realized estimator `y ↦ v`.
#[derive(Debug, Clone, PartialEq)]
pub enum EstimatorSpec {
    /// `v = gain·y`.
    LinearGaussian { gain: f64 },
    /// Closed form for a two-point input and p > 1.
    TwoPoint { x1: f64, x2: f64, q: f64, snr: f64, p: f64 },
    /// The p = 1 two-point rule.
    HardDecision { x1: f64, x2: f64, q: f64, snr: f64 },
    /// `E[X | Y = y]`.
    ConditionalMean { dist: InputDistribution, snr: f64 },
    /// Pointwise minimizer of the posterior p-th risk.
    NumericPointwise { dist: InputDistribution, snr: f64, p: f64 },
    /// Ignores the observation.
    Constant(f64),
}

impl EstimatorSpec {
    /// Linear estimator that is optimal for a Gaussian input of variance σ².
    pub fn linear_for(sigma2: f64, snr: f64) -> Self {
        Self::LinearGaussian { gain: sigma2 * snr.sqrt() / (1.0 + sigma2 * snr) }
    }

    /// The optimal estimator for `dist` at `(snr, p)`, preferring closed forms.
    pub fn optimal(dist: &InputDistribution, snr: f64, p: f64) -> Self {
        match dist {
            InputDistribution::ScalarGaussian { sigma2 } | InputDistribution::VectorGaussian { sigma2, .. }
                if p >= 1.0 =>
            {
                Self::linear_for(*sigma2, snr)
            }
            InputDistribution::DiscreteAtoms(a) if a.dim() == 1 && a.len() == 2 && p >= 1.0 => {
                let (x1, x2, q) = (a.points()[0][0], a.points()[1][0], a.probs()[0]);
                if p == 1.0 {
                    Self::HardDecision { x1, x2, q, snr }
                } else {
                    Self::TwoPoint { x1, x2, q, snr, p }
                }
            }
            _ if p == 2.0 => Self::ConditionalMean { dist: dist.clone(), snr },
            _ => Self::NumericPointwise { dist: dist.clone(), snr, p },
        }
    }

    /// Evaluate at a scalar observation.
    pub fn eval(&self, y: f64) -> Result<f64> {
        match self {
            Self::LinearGaussian { gain } => Ok(gain * y),
            Self::TwoPoint { x1, x2, q, snr, p } => two_point_estimator(*x1, *x2, *q, *snr, *p, y),
            Self::HardDecision { x1, x2, q, snr } => Ok(hard_decision_estimator(*x1, *x2, *q, *snr, y)),
            Self::ConditionalMean { dist, snr } => Ok(posterior_scalar(dist, *snr, y)?.mean()),
            Self::NumericPointwise { dist, snr, p } => Ok(numeric_pointwise_estimator(dist, *snr, *p, y)?.v),
            Self::Constant(c) => Ok(*c),
        }
    }

    /// Evaluate at a vector observation, writing into `out`.
    pub fn eval_vector(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        match self {
            Self::LinearGaussian { gain } => {
                out.iter_mut().zip(y).for_each(|(o, v)| *o = gain * v);
                Ok(())
            }
            Self::Constant(c) => {
                out.fill(*c);
                Ok(())
            }
            Self::ConditionalMean { dist: InputDistribution::DiscreteAtoms(a), snr } if a.dim() > 1 => {
                let w = atom_posterior(a, snr.sqrt(), y);
                out.fill(0.0);
                for (pt, wi) in a.points().iter().zip(&w) {
                    out.iter_mut().zip(pt).for_each(|(o, x)| *o += wi * x);
                }
                Ok(())
            }
            Self::NumericPointwise { dist: InputDistribution::DiscreteAtoms(a), snr, p } if a.dim() > 1 => {
                out.copy_from_slice(&numeric_vector_estimator(a, *snr, *p, y)?);
                Ok(())
            }
            _ if y.len() == 1 => {
                out[0] = self.eval(y[0])?;
                Ok(())
            }
            _ => Err(MmpeError::Unsupported("estimator has no vector form".into())),
        }
    }
}

/// `√snr·y/(1+snr)` componentwise: the optimal estimator for a standard Gaussian input.
pub fn gaussian_estimator(snr: f64, y: &[f64]) -> Vec<f64> {
    let g = snr.sqrt() / (1.0 + snr);
    y.iter().map(|v| g * v).collect()
}

/// Optimal estimator for `{x1 w.p. q, x2 w.p. 1−q}` with p > 1.
///
/// For p = 1 this falls through to [`hard_decision_estimator`].
///
/// ```
/// let v = mmpe::estimators::two_point_estimator(-1.0, 1.0, 0.5, 4.0, 3.0, 1.0).unwrap();
/// assert!((v - 1f64.tanh()).abs() < 1e-14);
/// ```
pub fn two_point_estimator(x1: f64, x2: f64, q: f64, snr: f64, p: f64, y: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(MmpeError::Domain(format!("q must lie in (0,1), got {q}")));
    }
    if p == 1.0 {
        return Ok(hard_decision_estimator(x1, x2, q, snr, y));
    }
    if !(p > 1.0) {
        return Err(MmpeError::Domain(format!("two-point closed form needs p > 1, got {p}")));
    }
    let s = snr.sqrt();
    let k = p - 1.0;
    let mut lw = [
        (q.ln() - 0.5 * (y - s * x1).powi(2)) / k,
        ((1.0 - q).ln() - 0.5 * (y - s * x2).powi(2)) / k,
    ];
    softmax(&mut lw);
    let v = lw[0] * x1 + lw[1] * x2;
    Ok(v.clamp(x1.min(x2), x1.max(x2)))
}

/// The p = 1 two-point rule: `x1` when `a >= 1`, else `x2`.
pub fn hard_decision_estimator(x1: f64, x2: f64, q: f64, snr: f64, y: f64) -> f64 {
    let s = snr.sqrt();
    let ln_a = (q / (1.0 - q)).ln() - 0.5 * snr * (x1 * x1 - x2 * x2) + s * y * (x1 - x2);
    if ln_a >= 0.0 {
        x1
    } else {
        x2
    }
}

/// Result of a pointwise minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEstimate {
    /// Minimizing value.
    pub v: f64,
    /// Posterior risk `E[|X_y − v|^p]` at the minimizer.
    pub risk: f64,
    /// Whether the search bracket cut an unbounded support.
    pub truncated: bool,
}

/// `E[|X_y − v|^p]` under a scalar posterior.
pub fn posterior_risk(post: &Posterior, v: f64, p: f64) -> f64 {
    match post {
        Posterior::Weighted { points, weights } => {
            points.iter().zip(weights).map(|(x, w)| if *w > 0.0 { w * (x - v).abs().powf(p) } else { 0.0 }).sum()
        }
        Posterior::Gaussian { mean, var } => {
            let (m, s) = (*mean, var.sqrt());
            if p == 2.0 {
                return (m - v).powi(2) + var;
            }
            let z0 = (v - m) / s;
            let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 400 };
            let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
            let span = 12.0 + z0.abs();
            crate::quad::integrate_with_breaks(
                |z| c * (-0.5 * z * z).exp() * (s * (z - z0)).abs().powf(p),
                &[-span, z0, 0.0, span],
                opts,
            )
            .value
        }
    }
}

/// Minimize the posterior p-th risk over v for a given posterior.
pub fn minimize_posterior_risk(post: &Posterior, p: f64) -> Result<PointEstimate> {
    if !(p > 0.0) {
        return Err(MmpeError::Domain(format!("order must be positive, got {p}")));
    }
    let (lo, hi, truncated) = match post {
        Posterior::Gaussian { mean, var } => {
            let h = TRUNCATION_SDS * var.sqrt();
            (mean - h, mean + h, true)
        }
        Posterior::Weighted { points, weights } => {
            let live = points.iter().zip(weights).filter(|(_, w)| **w > 0.0).map(|(x, _)| *x);
            let (lo, hi) = live.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            (lo, hi, false)
        }
    };
    if hi <= lo {
        return Ok(PointEstimate { v: lo, risk: 0.0, truncated });
    }
    let risk = |v: f64| posterior_risk(post, v, p);
    if p >= 1.0 {
        let m = brent(risk, lo, hi, INNER_TOL, INNER_MAX_ITER);
        let v = match post {
            Posterior::Weighted { points, weights } if p > 1.0 => polish(points, weights, p, m.x, lo, hi),
            _ => m.x,
        };
        return Ok(PointEstimate { v, risk: risk(v), truncated });
    }
    let mut cands: Vec<f64> =
        (0..NONCONVEX_GRID).map(|i| lo + (hi - lo) * i as f64 / (NONCONVEX_GRID - 1) as f64).collect();
    if let Posterior::Weighted { points, weights } = post {
        cands.extend(points.iter().zip(weights).filter(|(_, w)| **w > 0.0).map(|(x, _)| *x));
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let vals: Vec<f64> = cands.iter().map(|&v| risk(v)).collect();
    let best = (0..cands.len()).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).expect("nonempty grid");
    let a = cands[best.saturating_sub(1)];
    let b = cands[(best + 1).min(cands.len() - 1)];
    let m = brent(risk, a, b, INNER_TOL, INNER_MAX_ITER);
    let (v, r) = if m.fx < vals[best] { (m.x, m.fx) } else { (cands[best], vals[best]) };
    Ok(PointEstimate { v, risk: r, truncated })
}

/// Refine a convex-risk minimizer by bisection on the risk derivative.
fn polish(points: &[f64], weights: &[f64], p: f64, x: f64, lo: f64, hi: f64) -> f64 {
    let slope = |v: f64| -> f64 {
        points
            .iter()
            .zip(weights)
            .map(|(xi, w)| if *w > 0.0 { w * (v - xi).signum() * (v - xi).abs().powf(p - 1.0) } else { 0.0 })
            .sum()
    };
    let mut h = 1e-7 * (hi - lo).max(1e-300);
    let (mut a, mut b) = ((x - h).max(lo), (x + h).min(hi));
    while slope(a) > 0.0 && a > lo || slope(b) < 0.0 && b < hi {
        h *= 16.0;
        a = (x - h).max(lo);
        b = (x + h).min(hi);
    }
    bisect(slope, a, b, 1e-15 * (hi - lo)).unwrap_or(x)
}

/// `E[h(X_y)]` under a scalar posterior; `kink` marks a point where `h` is not smooth.
pub fn posterior_expectation<H: FnMut(f64) -> f64>(post: &Posterior, mut h: H, kink: f64) -> f64 {
    match post {
        Posterior::Weighted { points, weights } => {
            points.iter().zip(weights).map(|(x, w)| if *w > 0.0 { w * h(*x) } else { 0.0 }).sum()
        }
        Posterior::Gaussian { mean, var } => {
            let s = var.sqrt();
            let z0 = (kink - mean) / s;
            let span = 12.0 + z0.abs();
            let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
            let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 400 };
            crate::quad::integrate_with_breaks(
                |z| c * (-0.5 * z * z).exp() * h(mean + s * z),
                &[-span, z0, 0.0, span],
                opts,
            )
            .value
        }
    }
}

/// Pointwise optimal estimate `argmin_v E[|X − v|^p | Y = y]` for a scalar input.
pub fn numeric_pointwise_estimator(dist: &InputDistribution, snr: f64, p: f64, y: f64) -> Result<PointEstimate> {
    minimize_posterior_risk(&posterior_scalar(dist, snr, y)?, p)
}

/// Posterior weights of vector atoms given a vector observation.
pub(crate) fn atom_posterior(a: &Atoms, gain: f64, y: &[f64]) -> Vec<f64> {
    let mut lw: Vec<f64> = a
        .points()
        .iter()
        .zip(a.probs())
        .map(|(x, q)| q.ln() - 0.5 * x.iter().zip(y).map(|(xi, yi)| (yi - gain * xi).powi(2)).sum::<f64>())
        .collect();
    softmax(&mut lw);
    lw
}

/// Pointwise optimal estimate for vector atoms, by simplex search.
///
/// Starts from the posterior mean and from the most likely atom and keeps
/// the better basin.
pub fn numeric_vector_estimator(a: &Atoms, snr: f64, p: f64, y: &[f64]) -> Result<Vec<f64>> {
    let n = a.dim();
    if n > VECTOR_CAP {
        return Err(MmpeError::DimensionCap { n, cap: VECTOR_CAP });
    }
    if !(p >= 1.0) {
        return Err(MmpeError::Domain(format!("vector estimator needs p >= 1, got {p}")));
    }
    if y.len() != n {
        return Err(MmpeError::Domain("observation dimension mismatch".into()));
    }
    let w = atom_posterior(a, snr.sqrt(), y);
    Ok(minimize_atom_risk(a.points(), &w, p))
}

/// Minimize `Σ w_i ‖x_i − v‖^p` over v ∈ R^n.
pub fn minimize_atom_risk(points: &[Vec<f64>], w: &[f64], p: f64) -> Vec<f64> {
    let n = points[0].len();
    let risk = |v: &[f64]| -> f64 {
        points.iter().zip(w).map(|(x, wi)| if *wi > 0.0 { wi * euclid(x, v).powf(p) } else { 0.0 }).sum()
    };
    let mut mean = vec![0.0; n];
    for (x, wi) in points.iter().zip(w) {
        mean.iter_mut().zip(x).for_each(|(m, xi)| *m += wi * xi);
    }
    if p == 2.0 {
        return mean;
    }
    let map = (0..w.len()).max_by(|&i, &j| w[i].total_cmp(&w[j])).expect("nonempty atoms");
    let spread = points.iter().map(|x| euclid(x, &mean)).fold(0.0, f64::max).max(1e-3);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in [mean.clone(), points[map].clone()] {
        let m = nelder_mead(risk, &start, 0.1 * spread, 1e-15, 4000);
        // restart once from the result to shake off a collapsed simplex
        let m = nelder_mead(risk, &m.x, 0.01 * spread, 1e-15, 4000);
        if best.as_ref().is_none_or(|(_, f)| m.fx < *f) {
            best = Some((m.x, m.fx));
        }
    }
    best.expect("two starts").0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_closed_form() {
        assert_eq!(gaussian_estimator(0.0, &[3.0]), vec![0.0]);
        assert_eq!(gaussian_estimator(1.0, &[2.0]), vec![1.0]);
        let v = gaussian_estimator(3.0, &[2.0, -2.0]);
        assert!((v[0] - 3f64.sqrt() / 2.0).abs() < 1e-15 && (v[1] + 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_domain() {
        assert!(two_point_estimator(-1.0, 1.0, 0.5, 1.0, 0.5, 0.0).is_err());
        assert!(two_point_estimator(-1.0, 1.0, 1.0, 1.0, 2.0, 0.0).is_err());
        assert_eq!(two_point_estimator(-1.0, 1.0, 0.5, 1.0, 1.0, 0.3).unwrap(), 1.0);
        assert_eq!(two_point_estimator(-1.0, 1.0, 0.5, 1.0, 2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn hard_decision_cases() {
        assert_eq!(hard_decision_estimator(-1.0, 1.0, 0.5, 1.0, 0.3), 1.0);
        assert_eq!(hard_decision_estimator(-1.0, 1.0, 0.5, 1.0, 0.0), -1.0);
        assert_eq!(hard_decision_estimator(-3.0, 1.0, 0.01, 1.0, 0.0), 1.0);
    }

    #[test]
    fn numeric_matches_closed_forms() {
        let g = InputDistribution::gaussian(1.0).unwrap();
        for &(snr, p, y) in &[(1.0, 1.0, 0.7), (4.0, 3.0, -1.2), (0.5, 1.5, 2.0)] {
            let e = numeric_pointwise_estimator(&g, snr, p, y).unwrap();
            assert!((e.v - snr.sqrt() * y / (1.0 + snr)).abs() < 1e-8, "{snr} {p} {y}");
            assert!(e.truncated);
        }
        let b = InputDistribution::bpsk();
        assert!((numeric_pointwise_estimator(&b, 1.0, 2.0, 0.5).unwrap().v - 0.5f64.tanh()).abs() < 1e-8);
        assert!((numeric_pointwise_estimator(&b, 1.0, 1.0, 0.3).unwrap().v - 1.0).abs() < 1e-8);
    }

    #[test]
    fn nonconvex_order_lands_on_atom() {
        let d = InputDistribution::pam(4).unwrap();
        let e = numeric_pointwise_estimator(&d, 1.0, 0.5, 0.4).unwrap();
        assert!([-3.0, -1.0, 1.0, 3.0].iter().any(|a| (a - e.v).abs() < 1e-6), "{}", e.v);
    }

    #[test]
    fn vector_estimator_cap_and_mean() {
        let big = InputDistribution::pmone_vector(9).unwrap();
        assert!(matches!(
            numeric_vector_estimator(big.as_atoms().unwrap(), 1.0, 2.0, &[0.0; 9]),
            Err(MmpeError::DimensionCap { .. })
        ));
        let d = InputDistribution::pmone_vector(2).unwrap();
        let v = numeric_vector_estimator(d.as_atoms().unwrap(), 1.0, 2.0, &[0.3, 0.1]).unwrap();
        let t = (0.4f64).tanh();
        assert!((v[0] - t).abs() < 1e-12 && (v[1] - t).abs() < 1e-12);
    }
}
