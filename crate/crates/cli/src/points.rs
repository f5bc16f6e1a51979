use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ConfigError;

/// Largest shift applied to the real part of a jittered sample point.
pub const JITTER: f64 = 0.02;

/// Parses `0.5`, `-2`, `2+5i`, `0.25-3i`, `5i` or `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64, ConfigError> {
    let bad = || ConfigError(format!("cannot parse complex number '{text}'"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |s: &str| -> Result<f64, ConfigError> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[i..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// Moves each real part by a uniform amount in [−JITTER, JITTER].
pub fn jitter(points: &[Complex64], rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    points
        .iter()
        .map(|p| Complex64::new(p.re + rng.gen_range(-JITTER..=JITTER), p.im))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("-2").unwrap(), c(-2.0, 0.0));
        assert_eq!(parse_complex("2+5i").unwrap(), c(2.0, 5.0));
        assert_eq!(parse_complex("0.25 - 3i").unwrap(), c(0.25, -3.0));
        assert_eq!(parse_complex("5i").unwrap(), c(0.0, 5.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), c(1e-3, 20.0));
        assert!(parse_complex("two").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn jitter_is_seeded_and_bounded() {
        let pts = vec![Complex64::new(0.5, 2.0); 50];
        let a = jitter(&pts, &mut rng(7));
        let b = jitter(&pts, &mut rng(7));
        assert_eq!(a, b);
        assert!(a.iter().all(|p| (p.re - 0.5).abs() <= JITTER && p.im == 2.0));
        assert_ne!(a, jitter(&pts, &mut rng(8)));
    }
}
