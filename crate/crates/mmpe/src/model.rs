//! Input laws, the channel `Y = √snr·X + Z`, sampling and scalar posteriors.

use crate::error::{MmpeError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

const NORM_TOL: f64 = 1e-9;
const MIN_GRID: usize = 64;
const UNIFORM_CELLS: usize = 4096;

/// A finite set of atoms in R^n with probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Atoms {
    n: usize,
    points: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

impl Atoms {
    /// Validate and build; probabilities are renormalized after the check.
    pub fn new(points: Vec<Vec<f64>>, probs: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(MmpeError::InvalidDistribution("atoms and probabilities must be nonempty and paired".into()));
        }
        let n = points[0].len();
        if n == 0 || points.iter().any(|p| p.len() != n) {
            return Err(MmpeError::InvalidDistribution("atoms must share a positive dimension".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(MmpeError::InvalidDistribution("atoms must be finite".into()));
        }
        if probs.iter().any(|&q| !(q > 0.0) || !q.is_finite()) {
            return Err(MmpeError::InvalidDistribution("probabilities must be positive".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(MmpeError::InvalidDistribution(format!("probabilities sum to {total}, not 1")));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(MmpeError::InvalidDistribution(format!("duplicate atom {:?}", points[i])));
                }
            }
        }
        let probs = probs.iter().map(|q| q / total).collect();
        Ok(Self { n, points, probs })
    }

    /// Scalar atoms from `(x, probability)` pairs.
    pub fn scalar(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(x, _)| vec![x]).collect(), pairs.iter().map(|&(_, q)| q).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First coordinates, for scalar sets.
    pub fn scalar_points(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[0]).collect()
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        -self.probs.iter().map(|q| q * q.log2()).sum::<f64>()
    }
}

/// Tabulated scalar density, normalized by the trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPdf {
    grid: Vec<f64>,
    density: Vec<f64>,
}

impl TabulatedPdf {
    pub fn new(grid: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if grid.len() < MIN_GRID || grid.len() != density.len() {
            return Err(MmpeError::InvalidDistribution(format!(
                "tabulated density needs at least {MIN_GRID} paired grid points"
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(MmpeError::InvalidDistribution("grid must be strictly increasing".into()));
        }
        if density.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
            return Err(MmpeError::InvalidDistribution("density must be nonnegative".into()));
        }
        let mass = trapezoid(&grid, &density);
        if !(mass > 0.0) {
            return Err(MmpeError::InvalidDistribution("density has zero mass".into()));
        }
        let density = density.iter().map(|d| d / mass).collect();
        Ok(Self { grid, density })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Trapezoid node weights (density times cell share).
    fn node_weights(&self) -> Vec<f64> {
        let g = &self.grid;
        let k = g.len();
        (0..k)
            .map(|i| {
                let left = if i > 0 { g[i] - g[i - 1] } else { 0.0 };
                let right = if i + 1 < k { g[i + 1] - g[i] } else { 0.0 };
                0.5 * (left + right) * self.density[i]
            })
            .collect()
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(a, b)| 0.5 * (a[1] - a[0]) * (b[0] + b[1])).sum()
}

/// The law of the channel input `X`.
#[derive(Debug, Clone, PartialEq)]
pub enum InputDistribution {
    ScalarGaussian { sigma2: f64 },
    VectorGaussian { n: usize, sigma2: f64 },
    DiscreteAtoms(Atoms),
    UniformBall { n: usize, radius: f64 },
    TabulatedScalarPdf(TabulatedPdf),
}

impl InputDistribution {
    pub fn gaussian(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(MmpeError::InvalidDistribution(format!("variance must be positive, got {sigma2}")));
        }
        Ok(Self::ScalarGaussian { sigma2 })
    }

    pub fn vector_gaussian(n: usize, sigma2: f64) -> Result<Self> {
        Self::gaussian(sigma2)?;
        if n == 0 {
            return Err(MmpeError::InvalidDistribution("dimension must be at least 1".into()));
        }
        Ok(if n == 1 { Self::ScalarGaussian { sigma2 } } else { Self::VectorGaussian { n, sigma2 } })
    }

    pub fn atoms(pairs: &[(f64, f64)]) -> Result<Self> {
        Ok(Self::DiscreteAtoms(Atoms::scalar(pairs)?))
    }

    pub fn uniform_ball(n: usize, radius: f64) -> Result<Self> {
        if n == 0 || !(radius > 0.0) || !radius.is_finite() {
            return Err(MmpeError::InvalidDistribution("ball needs n >= 1 and a positive radius".into()));
        }
        Ok(Self::UniformBall { n, radius })
    }

    pub fn bpsk() -> Self {
        Self::atoms(&[(-1.0, 0.5), (1.0, 0.5)]).expect("valid preset")
    }

    /// Equiprobable PAM on the odd integers: {−(N−1), …, −1, 1, …, N−1} for even N.
    pub fn pam(levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(MmpeError::InvalidDistribution("PAM needs at least one level".into()));
        }
        let q = 1.0 / levels as f64;
        let pairs: Vec<(f64, f64)> =
            (0..levels).map(|i| (2.0 * i as f64 - (levels as f64 - 1.0), q)).collect();
        Self::atoms(&pairs)
    }

    /// Two-point input `{x1 w.p. q, x2 w.p. 1−q}`.
    pub fn two_point(x1: f64, x2: f64, q: f64) -> Result<Self> {
        Self::atoms(&[(x1, q), (x2, 1.0 - q)])
    }

    /// The pair `{−3, 1}` with `P[X=−3] = 0.01`.
    pub fn asym_pair() -> Self {
        Self::two_point(-3.0, 1.0, 0.01).expect("valid preset")
    }

    /// `±(1,…,1)` in n dimensions, equiprobable.
    pub fn pmone_vector(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(MmpeError::InvalidDistribution("dimension must be at least 1".into()));
        }
        Ok(Self::DiscreteAtoms(Atoms::new(vec![vec![1.0; n], vec![-1.0; n]], vec![0.5, 0.5])?))
    }

    /// Dimension n of X.
    pub fn dim(&self) -> usize {
        match self {
            Self::ScalarGaussian { .. } | Self::TabulatedScalarPdf(_) => 1,
            Self::VectorGaussian { n, .. } | Self::UniformBall { n, .. } => *n,
            Self::DiscreteAtoms(a) => a.dim(),
        }
    }

    /// Stable short identifier used in CSV output.
    pub fn id(&self) -> String {
        match self {
            Self::ScalarGaussian { sigma2 } => format!("gaussian(s2={sigma2})"),
            Self::VectorGaussian { n, sigma2 } => format!("gaussian(s2={sigma2};n={n})"),
            Self::UniformBall { n, radius } => format!("ball(r={radius};n={n})"),
            Self::TabulatedScalarPdf(t) => format!("tabulated(k={})", t.grid.len()),
            Self::DiscreteAtoms(a) if a.dim() == 1 && a.len() <= 8 => {
                let body: Vec<String> =
                    a.points.iter().zip(&a.probs).map(|(x, q)| format!("{}:{}", x[0], q)).collect();
                format!("atoms({})", body.join(";"))
            }
            Self::DiscreteAtoms(a) => format!("atoms(k={};n={})", a.len(), a.dim()),
        }
    }

    pub fn as_atoms(&self) -> Option<&Atoms> {
        match self {
            Self::DiscreteAtoms(a) => Some(a),
            _ => None,
        }
    }

    /// Per-dimension variance σ² for Gaussian laws.
    pub fn gaussian_sigma2(&self) -> Option<f64> {
        match self {
            Self::ScalarGaussian { sigma2 } | Self::VectorGaussian { sigma2, .. } => Some(*sigma2),
            _ => None,
        }
    }

    /// `‖X‖_p^p = (1/n)·E[‖X‖^p]`.
    pub fn norm_moment(&self, p: f64) -> f64 {
        let n = self.dim() as f64;
        match self {
            Self::ScalarGaussian { sigma2 } | Self::VectorGaussian { sigma2, .. } => {
                sigma2.powf(p / 2.0) * crate::specfun::ln_gaussian_norm_moment(self.dim(), p).exp()
            }
            Self::UniformBall { radius, .. } => radius.powf(p) / (p + n),
            Self::DiscreteAtoms(a) => {
                a.points
                    .iter()
                    .zip(&a.probs)
                    .map(|(x, q)| q * x.iter().map(|v| v * v).sum::<f64>().powf(p / 2.0))
                    .sum::<f64>()
                    / n
            }
            Self::TabulatedScalarPdf(t) => {
                let f: Vec<f64> = t.grid.iter().zip(&t.density).map(|(x, d)| d * x.abs().powf(p)).collect();
                trapezoid(&t.grid, &f)
            }
        }
    }

    /// Per-dimension variance `(1/n)·E[‖X − E[X]‖²]`.
    pub fn variance(&self) -> f64 {
        let n = self.dim() as f64;
        match self {
            Self::ScalarGaussian { sigma2 } | Self::VectorGaussian { sigma2, .. } => *sigma2,
            Self::UniformBall { radius, .. } => radius * radius / (n + 2.0),
            Self::DiscreteAtoms(a) => {
                let mut mean = vec![0.0; a.dim()];
                for (x, q) in a.points.iter().zip(&a.probs) {
                    mean.iter_mut().zip(x).for_each(|(m, v)| *m += q * v);
                }
                a.points.iter().zip(&a.probs).map(|(x, q)| q * euclid(x, &mean).powi(2)).sum::<f64>() / n
            }
            Self::TabulatedScalarPdf(t) => {
                let m1: Vec<f64> = t.grid.iter().zip(&t.density).map(|(x, d)| d * x).collect();
                let mean = trapezoid(&t.grid, &m1);
                let m2: Vec<f64> = t.grid.iter().zip(&t.density).map(|(x, d)| d * (x - mean).powi(2)).collect();
                trapezoid(&t.grid, &m2)
            }
        }
    }

    /// Support interval for scalar bounded laws; `None` when unbounded.
    pub fn scalar_support(&self) -> Option<(f64, f64)> {
        match self {
            Self::DiscreteAtoms(a) if a.dim() == 1 => {
                let xs = a.scalar_points();
                Some((xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)))
            }
            Self::UniformBall { n: 1, radius } => Some((-radius, *radius)),
            Self::TabulatedScalarPdf(t) => Some((t.grid[0], *t.grid.last().expect("nonempty grid"))),
            _ => None,
        }
    }

    /// Weighted nodes representing a scalar law other than the Gaussian.
    pub(crate) fn scalar_nodes(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            Self::DiscreteAtoms(a) if a.dim() == 1 => Ok((a.scalar_points(), a.probs.clone())),
            Self::UniformBall { n: 1, radius } => {
                let h = 2.0 * radius / UNIFORM_CELLS as f64;
                let xs = (0..UNIFORM_CELLS).map(|i| -radius + (i as f64 + 0.5) * h).collect();
                Ok((xs, vec![1.0 / UNIFORM_CELLS as f64; UNIFORM_CELLS]))
            }
            Self::TabulatedScalarPdf(t) => Ok((t.grid.clone(), t.node_weights())),
            _ => Err(MmpeError::Unsupported(format!("{} has no scalar node representation", self.id()))),
        }
    }

    /// Draw one realization of X into `out`.
    pub fn sample_into<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        match self {
            Self::ScalarGaussian { sigma2 } | Self::VectorGaussian { sigma2, .. } => {
                let s = sigma2.sqrt();
                for o in out.iter_mut() {
                    *o = s * rng.sample::<f64, _>(StandardNormal);
                }
            }
            Self::DiscreteAtoms(a) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = a.len() - 1;
                for (i, q) in a.probs.iter().enumerate() {
                    acc += q;
                    if u < acc {
                        pick = i;
                        break;
                    }
                }
                out.copy_from_slice(&a.points[pick]);
            }
            Self::UniformBall { n, radius } => {
                let mut norm2 = 0.0;
                for o in out.iter_mut() {
                    *o = rng.sample::<f64, _>(StandardNormal);
                    norm2 += *o * *o;
                }
                let u: f64 = rng.random();
                let scale = radius * u.powf(1.0 / *n as f64) / norm2.sqrt();
                for o in out.iter_mut() {
                    *o *= scale;
                }
            }
            Self::TabulatedScalarPdf(t) => {
                let w = t.node_weights();
                let total: f64 = w.iter().sum();
                let u: f64 = rng.random::<f64>() * total;
                let mut acc = 0.0;
                let mut i = w.len() - 1;
                for (k, wk) in w.iter().enumerate() {
                    acc += wk;
                    if u < acc {
                        i = k;
                        break;
                    }
                }
                let g = &t.grid;
                let lo = if i > 0 { 0.5 * (g[i - 1] + g[i]) } else { g[0] };
                let hi = if i + 1 < g.len() { 0.5 * (g[i] + g[i + 1]) } else { g[i] };
                out[0] = lo + (hi - lo) * rng.random::<f64>();
            }
        }
    }
}

/// Channel dimension and SNR. The noise is always standard Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub n: usize,
    pub snr: f64,
}

impl ChannelConfig {
    pub fn new(n: usize, snr: f64) -> Result<Self> {
        if n == 0 {
            return Err(MmpeError::Domain("dimension must be at least 1".into()));
        }
        if !(snr >= 0.0) || !snr.is_finite() {
            return Err(MmpeError::Domain(format!("snr must be nonnegative, got {snr}")));
        }
        Ok(Self { n, snr })
    }
}

/// RNG for one Monte-Carlo replica: the master seed plus a stream index.
pub fn replica_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Paired draws stored row-major, `n` values per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSamples {
    pub n: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

/// Draw `count` pairs (X, Y) with `Y = √snr·X + Z`, deterministic in `seed`.
pub fn sample_channel(dist: &InputDistribution, ch: ChannelConfig, count: usize, seed: u64) -> Result<ChannelSamples> {
    if dist.dim() != ch.n {
        return Err(MmpeError::Domain(format!("input dimension {} differs from channel dimension {}", dist.dim(), ch.n)));
    }
    let mut rng = replica_rng(seed, 0);
    let n = ch.n;
    let (mut x, mut y, mut z) = (vec![0.0; count * n], vec![0.0; count * n], vec![0.0; count * n]);
    let s = ch.snr.sqrt();
    for k in 0..count {
        let r = k * n..(k + 1) * n;
        dist.sample_into(&mut rng, &mut x[r.clone()]);
        for i in r {
            z[i] = rng.sample(StandardNormal);
            y[i] = s * x[i] + z[i];
        }
    }
    Ok(ChannelSamples { n, x, y, z })
}

/// Pairwise distance summary of a discrete set.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceStats {
    pub d_min: f64,
    pub d_max: f64,
    /// Nearest-neighbor distance of each atom.
    pub per_atom: Vec<f64>,
}

/// Nearest-neighbor and diameter distances of a discrete set.
pub fn distance_stats(atoms: &Atoms) -> Result<DistanceStats> {
    let k = atoms.len();
    if k < 2 {
        return Err(MmpeError::Domain("distance statistics need at least two atoms".into()));
    }
    let mut per_atom = vec![f64::INFINITY; k];
    let mut d_max: f64 = 0.0;
    for i in 0..k {
        for j in 0..i {
            let d = euclid(&atoms.points[i], &atoms.points[j]);
            per_atom[i] = per_atom[i].min(d);
            per_atom[j] = per_atom[j].min(d);
            d_max = d_max.max(d);
        }
    }
    let d_min = per_atom.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(DistanceStats { d_min, d_max, per_atom })
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}

/// Law of X given Y = y, for a scalar input.
#[derive(Debug, Clone, PartialEq)]
pub enum Posterior {
    Gaussian { mean: f64, var: f64 },
    Weighted { points: Vec<f64>, weights: Vec<f64> },
}

impl Posterior {
    pub fn mean(&self) -> f64 {
        match self {
            Self::Gaussian { mean, .. } => *mean,
            Self::Weighted { points, weights } => points.iter().zip(weights).map(|(x, w)| x * w).sum(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Self::Gaussian { var, .. } => *var,
            Self::Weighted { points, weights } => {
                let m = self.mean();
                points.iter().zip(weights).map(|(x, w)| w * (x - m) * (x - m)).sum()
            }
        }
    }
}

/// Softmax of log-weights, normalized to sum to one.
pub(crate) fn softmax(logw: &mut [f64]) {
    let m = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for l in logw.iter_mut() {
        *l = (*l - m).exp();
        s += *l;
    }
    for l in logw.iter_mut() {
        *l /= s;
    }
}

/// Posterior of a scalar X given `Y = y` at the given SNR.
///
/// ```
/// use mmpe::model::{posterior_scalar, InputDistribution};
/// let post = posterior_scalar(&InputDistribution::gaussian(1.0).unwrap(), 1.0, 2.0).unwrap();
/// assert!((post.mean() - 1.0).abs() < 1e-15);
/// assert!((post.variance() - 0.5).abs() < 1e-15);
/// ```
pub fn posterior_scalar(dist: &InputDistribution, snr: f64, y: f64) -> Result<Posterior> {
    if dist.dim() != 1 {
        return Err(MmpeError::Unsupported("scalar posterior needs n = 1".into()));
    }
    if let InputDistribution::ScalarGaussian { sigma2 } = dist {
        let d = 1.0 + sigma2 * snr;
        return Ok(Posterior::Gaussian { mean: sigma2 * snr.sqrt() * y / d, var: sigma2 / d });
    }
    let (points, prior) = dist.scalar_nodes()?;
    Ok(posterior_from_nodes(&points, &prior, snr.sqrt(), y))
}

pub(crate) fn posterior_from_nodes(points: &[f64], prior: &[f64], gain: f64, y: f64) -> Posterior {
    let mut w: Vec<f64> = points
        .iter()
        .zip(prior)
        .map(|(x, q)| if *q > 0.0 { q.ln() - 0.5 * (y - gain * x).powi(2) } else { f64::NEG_INFINITY })
        .collect();
    softmax(&mut w);
    Posterior::Weighted { points: points.to_vec(), weights: w }
}

/// Output density p_Y(y) for a scalar input.
pub fn output_density(dist: &InputDistribution, snr: f64, y: f64) -> Result<f64> {
    let c = 1.0 / (2.0 * PI).sqrt();
    match dist {
        InputDistribution::ScalarGaussian { sigma2 } => {
            let v = 1.0 + sigma2 * snr;
            Ok(c / v.sqrt() * (-0.5 * y * y / v).exp())
        }
        _ => {
            let (xs, ws) = dist.scalar_nodes()?;
            let s = snr.sqrt();
            Ok(xs.iter().zip(ws).map(|(x, w)| w * c * (-0.5 * (y - s * x).powi(2)).exp()).sum())
        }
    }
}

/// Finite y-range carrying all but a negligible share of the output mass.
pub fn output_range(dist: &InputDistribution, snr: f64) -> (f64, f64) {
    let s = snr.sqrt();
    match dist.scalar_support() {
        Some((lo, hi)) => (s * lo - 10.0, s * hi + 10.0),
        None => {
            let sd = (1.0 + dist.gaussian_sigma2().unwrap_or(1.0) * snr).sqrt();
            (-12.0 * sd, 12.0 * sd)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_atoms() {
        assert!(InputDistribution::atoms(&[(1.0, 0.7), (1.0, 0.3)]).is_err());
        assert!(InputDistribution::atoms(&[(1.0, 0.7), (2.0, 0.2)]).is_err());
        assert!(InputDistribution::gaussian(0.0).is_err());
        assert!(InputDistribution::atoms(&[(-3.0, 0.01), (1.0, 0.99)]).is_ok());
    }

    #[test]
    fn tabulated_needs_grid() {
        let g: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!(TabulatedPdf::new(g.clone(), vec![1.0; 10]).is_err());
        let g: Vec<f64> = (0..64).map(|i| i as f64 / 63.0).collect();
        let t = TabulatedPdf::new(g.clone(), vec![2.0; 64]).unwrap();
        assert!((trapezoid(&g, t.density()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bpsk_posterior() {
        let d = InputDistribution::bpsk();
        let p = posterior_scalar(&d, 1.0, 0.0).unwrap();
        assert_eq!(p, Posterior::Weighted { points: vec![-1.0, 1.0], weights: vec![0.5, 0.5] });
        let Posterior::Weighted { weights, .. } = posterior_scalar(&d, 4.0, 1.0).unwrap() else { panic!() };
        assert!((weights[1] - 1.0 / (1.0 + (-4.0f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn distances() {
        let s = distance_stats(InputDistribution::pam(4).unwrap().as_atoms().unwrap()).unwrap();
        assert_eq!((s.d_min, s.d_max), (2.0, 6.0));
        let v = distance_stats(InputDistribution::pmone_vector(5).unwrap().as_atoms().unwrap()).unwrap();
        assert!((v.d_min - 20f64.sqrt()).abs() < 1e-14 && v.d_max == v.d_min);
        assert!(distance_stats(&Atoms::scalar(&[(0.0, 1.0)]).unwrap()).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = InputDistribution::bpsk();
        let ch = ChannelConfig::new(1, 2.0).unwrap();
        assert_eq!(sample_channel(&d, ch, 100, 7).unwrap(), sample_channel(&d, ch, 100, 7).unwrap());
        assert_ne!(sample_channel(&d, ch, 100, 7).unwrap(), sample_channel(&d, ch, 100, 8).unwrap());
    }

    #[test]
    fn norm_moments() {
        assert!((InputDistribution::pam(4).unwrap().norm_moment(2.0) - 5.0).abs() < 1e-14);
        assert!((InputDistribution::gaussian(4.0).unwrap().norm_moment(2.0) - 4.0).abs() < 1e-12);
        assert!((InputDistribution::pmone_vector(3).unwrap().norm_moment(2.0) - 1.0).abs() < 1e-14);
    }
}
