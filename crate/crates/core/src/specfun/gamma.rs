use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance below which an argument counts as a pole of Γ.
pub const GAMMA_POLE_GUARD: f64 = 1e-12;

// Lanczos approximation with g = 607/128 and 15 terms.
const LANCZOS_SHIFT: f64 = 5.242_187_5;
const LANCZOS_SER0: f64 = 0.999_999_999_999_997_092;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi_real(x: f64) -> f64 {
    let n = (2.0 * x).round();
    let r = x - 0.5 * n;
    let q = (n as i64).rem_euclid(4);
    match q {
        0 => (PI * r).sin(),
        1 => (PI * r).cos(),
        2 => -(PI * r).sin(),
        _ => -(PI * r).cos(),
    }
}

/// cos(πx) with exact zeros at the half-integers.
pub fn cos_pi_real(x: f64) -> f64 {
    let n = (2.0 * x).round();
    let r = x - 0.5 * n;
    let q = (n as i64).rem_euclid(4);
    match q {
        0 => (PI * r).cos(),
        1 => -(PI * r).sin(),
        2 => -(PI * r).cos(),
        _ => (PI * r).sin(),
    }
}

/// sin(πz) for complex z.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let y = PI * z.im;
    Complex64::new(sin_pi_real(z.re) * y.cosh(), cos_pi_real(z.re) * y.sinh())
}

/// cos(πz) for complex z.
pub fn cos_pi(z: Complex64) -> Complex64 {
    let y = PI * z.im;
    Complex64::new(cos_pi_real(z.re) * y.cosh(), -sin_pi_real(z.re) * y.sinh())
}

/// A logarithm of sin(πz) that stays finite for large |Im z|.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 10.0 {
        return sin_pi(z).ln();
    }
    let z = Complex64::new(z.re - 2.0 * (0.5 * z.re).round(), z.im);
    let i = Complex64::i();
    if z.im > 0.0 {
        -i * PI * z + (1.0 - (2.0 * i * PI * z).exp()).ln() + Complex64::new(0.0, 0.5).ln()
    } else {
        i * PI * z + (1.0 - (-2.0 * i * PI * z).exp()).ln() + Complex64::new(0.0, -0.5).ln()
    }
}

fn lanczos_ln(s: Complex64) -> Complex64 {
    let tmp = s + LANCZOS_SHIFT;
    let mut ser = Complex64::new(LANCZOS_SER0, 0.0);
    let mut y = s;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    (s + 0.5) * tmp.ln() - tmp + (ser * SQRT_2PI / s).ln()
}

fn pole_distance(s: Complex64) -> Option<f64> {
    if s.re > 0.5 {
        return None;
    }
    let n = s.re.round();
    Some((s - n).norm())
}

fn check_pole(s: Complex64) -> Result<()> {
    match pole_distance(s) {
        Some(d) if d <= GAMMA_POLE_GUARD => Err(Error::PoleAtNonPositiveInteger { s }),
        _ => Ok(()),
    }
}

/// Γ(s) for s away from the non-positive integers.
pub fn gamma(s: Complex64) -> Result<Complex64> {
    check_pole(s)?;
    Ok(gamma_unchecked(s))
}

/// A logarithm of Γ(s) (not necessarily the principal branch of log Γ).
pub fn ln_gamma(s: Complex64) -> Result<Complex64> {
    check_pole(s)?;
    Ok(ln_gamma_unchecked(s))
}

pub(crate) fn ln_gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re >= 0.5 {
        lanczos_ln(s)
    } else {
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(s) - lanczos_ln(1.0 - s)
    }
}

/// Γ(s) without the pole guard; returns non-finite values at the poles.
pub(crate) fn gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re >= 0.5 {
        lanczos_ln(s).exp()
    } else if s.im.abs() <= 20.0 {
        PI / (sin_pi(s) * lanczos_ln(1.0 - s).exp())
    } else {
        (Complex64::new(PI.ln(), 0.0) - ln_sin_pi(s) - lanczos_ln(1.0 - s)).exp()
    }
}

/// Real Γ(x) for x away from the poles.
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}

const DIGAMMA_BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// The digamma function ψ(s) = Γ'(s)/Γ(s).
pub fn digamma(s: Complex64) -> Result<Complex64> {
    check_pole(s)?;
    Ok(digamma_unchecked(s))
}

pub(crate) fn digamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        let cot = if s.im.abs() > 20.0 {
            Complex64::new(0.0, -s.im.signum())
        } else {
            cos_pi(s) / sin_pi(s)
        };
        return digamma_unchecked(1.0 - s) - PI * cot;
    }
    let mut z = s;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut pow = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in DIGAMMA_BERNOULLI.iter().enumerate() {
        series += pow * (*b / (2.0 * (k + 1) as f64));
        pow *= inv2;
    }
    acc + z.ln() - 0.5 / z - series
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_integers_and_half_integers() {
        assert!((gamma(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((gamma(c(5.0, 0.0)).unwrap() - 24.0).norm() < 1e-12);
        let sqrt_pi = PI.sqrt();
        assert!((gamma(c(0.5, 0.0)).unwrap().re - sqrt_pi).abs() < 1e-14);
        assert!((gamma(c(-0.5, 0.0)).unwrap().re + 2.0 * sqrt_pi).abs() < 1e-13);
        assert!((gamma(c(-1.5, 0.0)).unwrap().re - 4.0 * sqrt_pi / 3.0).abs() < 1e-13);
    }

    #[test]
    fn poles_are_rejected() {
        for n in 0..5 {
            assert!(matches!(
                gamma(c(-(n as f64), 0.0)),
                Err(Error::PoleAtNonPositiveInteger { .. })
            ));
        }
        assert!(gamma(c(-2.0 + 1e-9, 0.0)).is_ok());
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(it)|² = π / (t sinh πt)
        for t in [0.5, 3.0, 10.0, 40.0] {
            let g = gamma(c(0.0, t)).unwrap().norm_sqr();
            let exact = PI / (t * (PI * t).sinh());
            assert!(((g - exact) / exact).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn large_imaginary_part_does_not_overflow() {
        let g = gamma(c(-0.5, 300.0)).unwrap();
        assert!(g.re.is_finite() && g.im.is_finite());
        let h = gamma(c(0.5, 300.0)).unwrap();
        // Γ(s+1) = sΓ(s)
        assert!(((h - c(-0.5, 300.0) * g).norm() / h.norm()) < 1e-10);
    }

    #[test]
    fn digamma_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(c(1.0, 0.0)).unwrap().re + euler).abs() < 1e-14);
        assert!((digamma(c(0.5, 0.0)).unwrap().re + euler + 2.0 * 2f64.ln()).abs() < 1e-14);
        // ψ(s+1) = ψ(s) + 1/s off the real axis and left of zero
        for s in [c(-2.3, 1.1), c(0.2, -7.0), c(3.0, 30.0)] {
            let lhs = digamma(s + 1.0).unwrap();
            let rhs = digamma(s).unwrap() + 1.0 / s;
            assert!((lhs - rhs).norm() < 1e-12, "{s}");
        }
    }

    #[test]
    fn trig_helpers_exact_at_integers() {
        for n in -6..=6 {
            assert_eq!(sin_pi_real(n as f64), 0.0);
            assert_eq!(cos_pi_real(n as f64 + 0.5), 0.0);
        }
        let z = c(0.3, 12.0);
        let direct = sin_pi(z).ln().exp();
        assert!((ln_sin_pi(z).exp() - direct).norm() / direct.norm() < 1e-12);
    }
}
