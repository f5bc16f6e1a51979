use std::sync::OnceLock;

use num_complex::Complex64;

use super::series::SeriesId;
use super::table::ArithmeticTable;
use crate::error::{Error, Result};

/// Primes considered when forming the constant of a coefficient envelope.
const ENVELOPE_PRIME_CAP: u64 = 10_000_000;

fn envelope_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = ENVELOPE_PRIME_CAP as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// C_ε with |φ(n)| ≤ C_ε n^ε for all n, computed as the product over primes
/// of max_e |φ(p^e)| p^{−eε}. Returns `None` if primes beyond the internal
/// cap would contribute (ε too small for this stream).
pub fn coefficient_envelope(id: SeriesId, eps: f64) -> Option<f64> {
    if eps < 0.0 {
        return None;
    }
    if id.bounded_by_one() {
        return Some(1.0);
    }
    if eps == 0.0 {
        return None;
    }
    // A prime contributes only if g(e) > p^{eε} for some e ≥ 1.
    let mut p_star: f64 = 1.0;
    for e in 1..=64 {
        let g = id.prime_power_magnitude(e);
        if g > 1.0 {
            p_star = p_star.max(g.ln() / (e as f64 * eps));
        }
    }
    if p_star > (ENVELOPE_PRIME_CAP as f64).ln() {
        return None;
    }
    let p_star = p_star.exp();
    let mut log_c = 0.0;
    for &p in envelope_primes() {
        let p = p as f64;
        if p >= p_star {
            break;
        }
        let lp = p.ln();
        let mut best: f64 = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for e in 1..=4096u32 {
            let g = id.prime_power_magnitude(e);
            let v = if g > 0.0 { g.ln() - e as f64 * eps * lp } else { f64::NEG_INFINITY };
            best = best.max(v);
            if v < prev && v < 0.0 {
                break;
            }
            prev = v;
        }
        log_c += best;
    }
    Some(log_c.exp())
}

/// Rigorous bound on |Σ_{n>N} φ(n) n^{−s}| for Re s = sigma > 1.
///
/// Uses |φ(n)| ≤ C_ε n^ε and Σ_{n>N} n^{ε−σ} ≤ N^{1+ε−σ}/(σ−1−ε),
/// minimized over a grid of ε in [0, σ−1).
pub fn tail_bound(id: SeriesId, sigma: f64, n: u64) -> f64 {
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    let nf = n as f64;
    let mut best = f64::INFINITY;
    let steps = 48;
    for i in 0..steps {
        let eps = (sigma - 1.0) * i as f64 / steps as f64;
        if let Some(c) = coefficient_envelope(id, eps) {
            let b = c * nf.powf(1.0 + eps - sigma) / (sigma - 1.0 - eps);
            best = best.min(b);
        }
    }
    best
}

/// A Dirichlet partial sum together with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSum {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Σ_{n≤N} φ(n) n^{−s} and a bound on the rest of the series.
pub fn dirichlet_partial(table: &ArithmeticTable, id: SeriesId, s: Complex64, n: u64) -> Result<PartialSum> {
    if s.re <= 1.0 {
        return Err(Error::Divergence { re: s.re });
    }
    if n == 0 || n > table.limit() {
        return Err(Error::OutOfRange { n, limit: table.limit() });
    }
    let coeffs = table.coefficients(id)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for k in (1..=n as usize).rev() {
        let c = coeffs[k];
        if c == 0.0 {
            continue;
        }
        let term = (-s * (k as f64).ln()).exp() * c;
        let y = term - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
    }
    Ok(PartialSum {
        value,
        tail_bound: tail_bound(id, s.re, n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_build;

    #[test]
    fn envelope_dominates_coefficients() {
        let t = sieve_build(20_000).unwrap();
        for id in SeriesId::SUITE {
            for eps in [0.25, 0.5, 1.0] {
                let c = coefficient_envelope(id, eps).unwrap();
                for n in 1..=20_000u64 {
                    let phi = t.coeff(id, n).unwrap().unsigned_abs() as f64;
                    assert!(phi <= c * (n as f64).powf(eps) * (1.0 + 1e-12), "{id} eps={eps} n={n}");
                }
            }
        }
    }

    #[test]
    fn divisor_envelope_at_half() {
        // max_e (e+1) p^{-e/2}: 3/2 at p = 2 (e = 2), 2/√3 at p = 3 (e = 1)
        let c = coefficient_envelope(SeriesId::Dk(2), 0.5).unwrap();
        let expected = 1.5 * 2.0 / 3f64.sqrt();
        assert!((c - expected).abs() < 1e-12, "{c} vs {expected}");
    }

    #[test]
    fn tail_bound_for_constant_stream_is_integral_bound() {
        let b = tail_bound(SeriesId::One, 3.0, 100);
        assert!((b - 100f64.powi(-2) / 2.0).abs() < 1e-15);
        assert!(tail_bound(SeriesId::One, 1.0, 100).is_infinite());
    }

    #[test]
    fn divergence_guard() {
        let t = sieve_build(10).unwrap();
        assert!(matches!(
            dirichlet_partial(&t, SeriesId::One, Complex64::new(0.9, 0.0), 10),
            Err(Error::Divergence { .. })
        ));
        assert!(dirichlet_partial(&t, SeriesId::One, Complex64::new(2.0, 0.0), 11).is_err());
    }
}
