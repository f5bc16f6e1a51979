use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::bernoulli::bernoulli_f64;
use super::constants::{EULER_GAMMA, GLAISHER_A};
use super::gamma::{gamma_unchecked, ln_gamma_unchecked, ln_sin_pi, sin_pi};
use crate::error::{Error, Result};

/// Distance from s = 1 below which `zeta` reports the pole.
pub const ZETA_POLE_GUARD: f64 = 1e-10;

const EM_TERMS: usize = 15;

/// B_{2j}/(2j)! for j = 1..=15.
fn em_coefficients() -> &'static [f64; EM_TERMS] {
    static COEFFS: OnceLock<[f64; EM_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [0.0; EM_TERMS];
        let mut factorial = 1.0f64;
        for (j, slot) in out.iter_mut().enumerate() {
            let two_j = 2 * (j + 1);
            factorial *= ((two_j - 1) * two_j) as f64;
            *slot = bernoulli_f64(two_j) / factorial;
        }
        out
    })
}

/// The Riemann zeta function ζ(s), s ≠ 1.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() <= ZETA_POLE_GUARD {
        return Err(Error::PoleAtOne { s });
    }
    Ok(zeta_unchecked(s))
}

/// Real ζ(x), x ≠ 1.
pub fn zeta_real(x: f64) -> Result<f64> {
    zeta(Complex64::new(x, 0.0)).map(|z| z.re)
}

pub(crate) fn zeta_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.0 {
        chi(s) * euler_maclaurin(1.0 - s)
    } else {
        euler_maclaurin(s)
    }
}

/// χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s), so that ζ(s) = χ(s) ζ(1−s).
fn chi(s: Complex64) -> Complex64 {
    let log_part = s * 2f64.ln() + (s - 1.0) * PI.ln();
    if s.im.abs() <= 20.0 {
        (log_part).exp() * sin_pi(s * 0.5) * gamma_unchecked(1.0 - s)
    } else {
        (log_part + ln_sin_pi(s * 0.5) + ln_gamma_unchecked(1.0 - s)).exp()
    }
}

fn euler_maclaurin(s: Complex64) -> Complex64 {
    let n = 10usize.max(s.im.abs().ceil() as usize + 10);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let n_pow = (-s * nf.ln()).exp();
    sum += n_pow * nf / (s - 1.0) + n_pow * 0.5;
    let inv_n2 = 1.0 / (nf * nf);
    let mut term = s * n_pow / nf;
    for (j, c) in em_coefficients().iter().enumerate() {
        let delta = term * *c;
        sum += delta;
        if delta.norm() <= 1e-17 * sum.norm() {
            break;
        }
        let a = 2.0 * (j + 1) as f64;
        term *= (s + (a - 1.0)) * (s + a) * inv_n2;
    }
    sum
}

/// ζ'(s) by central differences with one Richardson step (h = 10⁻³).
pub fn zeta_derivative(s: Complex64) -> Result<Complex64> {
    let h = 1e-3;
    if (s - 1.0).norm() <= 2.0 * h {
        return Err(Error::PoleAtOne { s });
    }
    let d = |h: f64| (zeta_unchecked(s + h) - zeta_unchecked(s - h)) / (2.0 * h);
    Ok((4.0 * d(0.5 * h) - d(h)) / 3.0)
}

/// ζ'(2) computed two independent ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPrime2 {
    /// (π²/6)(γ + ln(2π/A¹²)) from the stored constants.
    pub closed_form: f64,
    /// Differentiation of `zeta` at s = 2.
    pub numeric: f64,
}

impl ZetaPrime2 {
    pub fn value(&self) -> f64 {
        self.closed_form
    }

    pub fn discrepancy(&self) -> f64 {
        (self.closed_form - self.numeric).abs()
    }
}

/// ζ'(2) = (π²/6)(γ + ln(2π/A¹²)).
pub fn zeta_prime_2_closed_form() -> f64 {
    PI * PI / 6.0 * (EULER_GAMMA + (2.0 * PI).ln() - 12.0 * GLAISHER_A.ln())
}

pub fn zeta_prime_2() -> ZetaPrime2 {
    let numeric = zeta_derivative(Complex64::new(2.0, 0.0))
        .map(|z| z.re)
        .unwrap_or(f64::NAN);
    ZetaPrime2 {
        closed_form: zeta_prime_2_closed_form(),
        numeric,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn even_integers() {
        assert!((zeta_real(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta_real(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn near_pole() {
        assert!(matches!(zeta(c(1.0, 0.0)), Err(Error::PoleAtOne { .. })));
        let z = zeta(c(1.0 + 1e-6, 0.0)).unwrap().re;
        assert!((z - (1e6 + EULER_GAMMA)).abs() < 1e-4);
    }

    #[test]
    fn negative_side_matches_bernoulli() {
        assert!((zeta_real(-1.0).unwrap() + 1.0 / 12.0).abs() < 1e-15);
        assert!((zeta_real(-3.0).unwrap() - 1.0 / 120.0).abs() < 1e-15);
        for n in 1..=10 {
            assert_eq!(zeta_real(-2.0 * n as f64).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_zero() {
        let z = zeta(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-12, "{z}");
    }

    #[test]
    fn tabulated_values() {
        // mpmath, 30 digits
        let z = zeta(c(0.5, 0.0)).unwrap().re;
        assert!((z + 1.460_354_508_809_586_8).abs() < 1e-14);
        let z = zeta(c(-10.0, 3.0)).unwrap();
        assert!(z.re.is_finite());
        let z = zeta(c(2.0, 5.0)).unwrap();
        let series: Complex64 = (1..200_000).map(|n| (-c(2.0, 5.0) * (n as f64).ln()).exp()).sum();
        assert!((z - series).norm() < 1e-5);
    }

    #[test]
    fn derivative_at_two() {
        let d = zeta_prime_2();
        assert!(d.discrepancy() < 1e-10, "{d:?}");
        assert!((d.value() + 0.937_548_254_315_843_8).abs() < 1e-14);
    }
}
