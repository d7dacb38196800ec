//! Gamma-family special functions and the moment constants built on them.
//!
//! Everything that involves a ratio of Gamma functions is evaluated in the
//! log domain, so dimensions in the hundreds do not overflow.

use crate::error::{MmpeError, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Natural log of |Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let s = (PI * x).sin().abs();
        return PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Γ(x) for positive x.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Regularized pair (P, Q) with P + Q = 1, where Q = Γ(x;a)/Γ(x).
///
/// Series for `a <= x + 1`, Lentz continued fraction otherwise. The branch
/// that is computed directly carries full relative accuracy; the other one
/// is its complement.
fn regularized_pair(x: f64, a: f64) -> (f64, f64) {
    if a == 0.0 {
        return (0.0, 1.0);
    }
    if a.is_infinite() {
        return (1.0, 0.0);
    }
    let ln_pref = -a + x * a.ln() - ln_gamma(x);
    if a <= x + 1.0 {
        let mut term = 1.0 / x;
        let mut sum = term;
        let mut k = x;
        for _ in 0..MAX_ITER {
            k += 1.0;
            term *= a / k;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                break;
            }
        }
        let p = (ln_pref + sum.ln()).exp().min(1.0);
        (p, 1.0 - p)
    } else {
        let q = ln_upper_cf(x, a, ln_pref).exp().min(1.0);
        (1.0 - q, q)
    }
}

/// ln of the regularized upper tail via the Lentz continued fraction.
fn ln_upper_cf(x: f64, a: f64, ln_pref: f64) -> f64 {
    let mut b = a + 1.0 - x;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - x);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    ln_pref + h.ln()
}

fn check_shape(x: f64, a: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(MmpeError::Domain(format!("shape must be positive, got {x}")));
    }
    if !(a >= 0.0) {
        return Err(MmpeError::Domain(format!("lower limit must be nonnegative, got {a}")));
    }
    Ok(())
}

/// Upper incomplete Gamma Γ(x;a) = ∫_a^∞ t^{x−1} e^{−t} dt.
pub fn upper_incomplete_gamma(x: f64, a: f64) -> Result<f64> {
    Ok(ln_upper_incomplete_gamma(x, a)?.exp())
}

/// ln Γ(x;a), accurate even when Γ(x;a) underflows.
pub fn ln_upper_incomplete_gamma(x: f64, a: f64) -> Result<f64> {
    Ok(ln_generalized_q(x, a)? + ln_gamma(x))
}

/// Generalized Q-function Q̄(x;a) = Γ(x;a)/Γ(x).
///
/// ```
/// let q = mmpe::specfun::generalized_q(1.0, 1.0).unwrap();
/// assert!((q - (-1.0f64).exp()).abs() < 1e-14);
/// ```
pub fn generalized_q(x: f64, a: f64) -> Result<f64> {
    check_shape(x, a)?;
    Ok(regularized_pair(x, a).1)
}

/// ln Q̄(x;a).
pub fn ln_generalized_q(x: f64, a: f64) -> Result<f64> {
    check_shape(x, a)?;
    if a > x + 1.0 && a.is_finite() {
        let ln_pref = -a + x * a.ln() - ln_gamma(x);
        return Ok(ln_upper_cf(x, a, ln_pref));
    }
    Ok(regularized_pair(x, a).1.ln())
}

/// Standard Gaussian tail Q(x) = P[Z > x].
pub fn q_function(x: f64) -> f64 {
    if x >= 0.0 {
        0.5 * regularized_pair(0.5, 0.5 * x * x).1
    } else {
        1.0 - q_function(-x)
    }
}

/// ‖Z‖_p^p = (1/n)·2^{p/2}·Γ(n/2+p/2)/Γ(n/2) for standard Gaussian Z in n dims.
pub fn gaussian_norm_moment(n: usize, p: f64) -> Result<f64> {
    check_dim_order(n, p)?;
    Ok(ln_gaussian_norm_moment(n, p).exp())
}

pub(crate) fn ln_gaussian_norm_moment(n: usize, p: f64) -> f64 {
    let h = n as f64 / 2.0;
    0.5 * p * 2f64.ln() + ln_gamma(h + 0.5 * p) - ln_gamma(h) - (n as f64).ln()
}

/// ‖V‖_p^p = r^p/(p+n) for V uniform on the n-ball of radius r.
pub fn uniform_ball_moment(n: usize, p: f64, r: f64) -> Result<f64> {
    check_dim_order(n, p)?;
    if !(r > 0.0) {
        return Err(MmpeError::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(r.powf(p) / (p + n as f64))
}

/// Vol(B(r)) = π^{n/2} r^n / Γ(n/2+1).
pub fn ball_volume(n: usize, r: f64) -> Result<f64> {
    Ok(ln_ball_volume(n, r)?.exp())
}

/// ln Vol(B(r)).
pub fn ln_ball_volume(n: usize, r: f64) -> Result<f64> {
    if n == 0 || !(r > 0.0) {
        return Err(MmpeError::Domain("ball needs n >= 1 and r > 0".into()));
    }
    let nf = n as f64;
    Ok(0.5 * nf * PI.ln() + nf * r.ln() - ln_gamma(0.5 * nf + 1.0))
}

/// Constant k_{n,p} of the moment-entropy inequality.
///
/// ```
/// let k = mmpe::specfun::fano_constant(1, 2.0).unwrap();
/// assert!((k - (2.0 * std::f64::consts::PI * std::f64::consts::E).sqrt()).abs() < 1e-12);
/// ```
pub fn fano_constant(n: usize, p: f64) -> Result<f64> {
    Ok(ln_fano_constant(n, p)?.exp())
}

/// ln k_{n,p}.
pub fn ln_fano_constant(n: usize, p: f64) -> Result<f64> {
    check_dim_order(n, p)?;
    let nf = n as f64;
    Ok(0.5 * PI.ln() + (p / nf).ln() / p + 1.0 / p
        + (ln_gamma(nf / p + 1.0) - ln_gamma(nf / 2.0 + 1.0)) / nf)
}

fn check_dim_order(n: usize, p: f64) -> Result<()> {
    if n == 0 {
        return Err(MmpeError::Domain("dimension must be at least 1".into()));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(MmpeError::Domain(format!("order must be positive, got {p}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_integers_and_half() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-11);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((ln_gamma(100.0) - 359.134_205_369_575_4).abs() < 1e-9);
    }

    #[test]
    fn incomplete_gamma_trivial_values() {
        assert!((upper_incomplete_gamma(1.0, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-14);
        assert!((upper_incomplete_gamma(0.5, 0.0).unwrap() - 1.772_453_850_905_516).abs() < 1e-12);
        assert_eq!(generalized_q(1.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(generalized_q(0.0, 1.0).is_err());
        assert!(generalized_q(-1.0, 1.0).is_err());
        assert!(generalized_q(1.0, -0.5).is_err());
        assert!(gaussian_norm_moment(0, 2.0).is_err());
    }

    #[test]
    fn deep_tail_log_domain() {
        // Q̄(64; 512) is far below f64 range only in linear scale for larger a
        let l = ln_generalized_q(64.0, 2000.0).unwrap();
        assert!(l.is_finite() && l < -1000.0);
    }

    #[test]
    fn gaussian_moments() {
        assert!((gaussian_norm_moment(1, 2.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((gaussian_norm_moment(1, 4.0).unwrap() - 3.0).abs() < 1e-12);
        for n in [1, 3, 17, 512] {
            assert!((gaussian_norm_moment(n, 2.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ball() {
        assert!((uniform_ball_moment(1, 2.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((uniform_ball_moment(2, 2.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((ball_volume(2, 1.0).unwrap() - PI).abs() < 1e-13);
        assert!((ball_volume(3, 2.0).unwrap() - 4.0 / 3.0 * PI * 8.0).abs() < 1e-11);
    }

    #[test]
    fn fano_values() {
        assert!((fano_constant(1, 1.0).unwrap() - 2.0 * std::f64::consts::E).abs() < 1e-12);
        assert!(ln_fano_constant(512, 3.0).unwrap().is_finite());
    }
}
