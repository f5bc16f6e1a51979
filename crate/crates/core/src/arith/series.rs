use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::table::MAX_DK;
use crate::error::{Error, Result};
use crate::specfun::zeta;

/// The coefficient stream φ(n) of a Dirichlet series `Σ φ(n) n^{−s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesId {
    /// φ = 1, generating ζ(s).
    One,
    /// φ = μ, generating 1/ζ(s).
    Mu,
    /// φ = d_k, generating ζ^k(s).
    Dk(u32),
    /// φ = |μ|, generating ζ(s)/ζ(2s).
    AbsMu,
    /// φ = 2^ω, generating ζ²(s)/ζ(2s).
    TwoOmega,
    /// φ(n) = d(n²), generating ζ³(s)/ζ(2s).
    DSqArg,
    /// φ(n) = d(n)², generating ζ⁴(s)/ζ(2s).
    DSquared,
}

/// How a stream's generating function is built from ζ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaExpr {
    /// Power of ζ(s) in the numerator (−1 for 1/ζ).
    pub power: i32,
    /// Whether the expression is divided by ζ(2s).
    pub over_zeta_2s: bool,
}

impl SeriesId {
    /// The streams checked by the Dirichlet suite: one per generating
    /// identity, with d_k represented by k = 2 and k = 3.
    pub const SUITE: [SeriesId; 8] = [
        SeriesId::One,
        SeriesId::Mu,
        SeriesId::Dk(2),
        SeriesId::Dk(3),
        SeriesId::AbsMu,
        SeriesId::TwoOmega,
        SeriesId::DSqArg,
        SeriesId::DSquared,
    ];

    pub fn validate(self) -> Result<()> {
        match self {
            SeriesId::Dk(k) if k == 0 || k > MAX_DK => Err(Error::InvalidArgument(format!(
                "d_k needs 1 <= k <= {MAX_DK}, got {k}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn zeta_expr(self) -> ZetaExpr {
        let (power, over_zeta_2s) = match self {
            SeriesId::One => (1, false),
            SeriesId::Mu => (-1, false),
            SeriesId::Dk(k) => (k as i32, false),
            SeriesId::AbsMu => (1, true),
            SeriesId::TwoOmega => (2, true),
            SeriesId::DSqArg => (3, true),
            SeriesId::DSquared => (4, true),
        };
        ZetaExpr { power, over_zeta_2s }
    }

    /// |φ(p^e)|, which depends only on the exponent for every stream here.
    pub fn prime_power_magnitude(self, e: u32) -> f64 {
        match self {
            SeriesId::One => 1.0,
            SeriesId::Mu | SeriesId::AbsMu => {
                if e <= 1 {
                    1.0
                } else {
                    0.0
                }
            }
            SeriesId::Dk(k) => binomial(e + k - 1, k - 1),
            SeriesId::TwoOmega => {
                if e == 0 {
                    1.0
                } else {
                    2.0
                }
            }
            SeriesId::DSqArg => (2 * e + 1) as f64,
            SeriesId::DSquared => ((e + 1) * (e + 1)) as f64,
        }
    }

    /// The smallest K with |φ(n)| ≤ d_K(n) for every n.
    pub fn divisor_rank(self) -> u32 {
        match self {
            SeriesId::One | SeriesId::Mu | SeriesId::AbsMu => 1,
            SeriesId::Dk(k) => k,
            SeriesId::TwoOmega => 2,
            SeriesId::DSqArg => 3,
            SeriesId::DSquared => 4,
        }
    }

    /// True when |φ(n)| ≤ 1 for every n.
    pub fn bounded_by_one(self) -> bool {
        matches!(self, SeriesId::One | SeriesId::Mu | SeriesId::AbsMu | SeriesId::Dk(1))
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesId::One => write!(f, "one"),
            SeriesId::Mu => write!(f, "mu"),
            SeriesId::Dk(k) => write!(f, "d{k}"),
            SeriesId::AbsMu => write!(f, "abs-mu"),
            SeriesId::TwoOmega => write!(f, "two-omega"),
            SeriesId::DSqArg => write!(f, "d-sq-arg"),
            SeriesId::DSquared => write!(f, "d-squared"),
        }
    }
}

impl FromStr for SeriesId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s {
            "one" => SeriesId::One,
            "mu" => SeriesId::Mu,
            "d" => SeriesId::Dk(2),
            "abs-mu" => SeriesId::AbsMu,
            "two-omega" => SeriesId::TwoOmega,
            "d-sq-arg" => SeriesId::DSqArg,
            "d-squared" => SeriesId::DSquared,
            other => match other.strip_prefix('d').and_then(|k| k.parse::<u32>().ok()) {
                Some(k) => SeriesId::Dk(k),
                None => {
                    return Err(Error::UnknownName {
                        kind: "series",
                        name: s.to_string(),
                    })
                }
            },
        };
        id.validate()?;
        Ok(id)
    }
}

impl Serialize for SeriesId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Smallest |ζ(2s)| (or |ζ(s)| for 1/ζ) accepted as a divisor.
pub const DIVISION_FLOOR: f64 = 1e-12;

/// Evaluates a ζ-expression at s.
pub fn eval_zeta_expr(expr: ZetaExpr, s: Complex64) -> Result<Complex64> {
    let z = zeta(s)?;
    let mut value = if expr.power >= 0 {
        z.powi(expr.power)
    } else {
        if z.norm() < DIVISION_FLOOR {
            return Err(Error::DivisionInstability { s, magnitude: z.norm() });
        }
        z.powi(expr.power)
    };
    if expr.over_zeta_2s {
        let z2 = zeta(2.0 * s)?;
        if z2.norm() < DIVISION_FLOOR {
            return Err(Error::DivisionInstability { s, magnitude: z2.norm() });
        }
        value /= z2;
    }
    Ok(value)
}

/// The generating function of the stream at s (meromorphic continuation).
pub fn closed_form(id: SeriesId, s: Complex64) -> Result<Complex64> {
    id.validate()?;
    eval_zeta_expr(id.zeta_expr(), s)
}
