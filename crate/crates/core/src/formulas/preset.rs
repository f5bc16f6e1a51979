use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::case::{CaseId, FormulaCase, MAX_FAR_LEFT_M};
use super::verify::{VerificationReport, Verifier, VerifyOptions};
use crate::error::{Error, Result};
use crate::mellin::TestFunction;

/// The integral representations of ζ(s)Γ(s), ζ²(s)Γ(s) and their quotients
/// by ζ(2s) obtained from f(x) = e^{−x}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PresetId {
    /// ζΓ = ∫ (1/(e^x − 1) − 1/x) x^{s−1} dx on (0, 1).
    ZetaGamma,
    /// ζ²Γ on (0, 1).
    Zeta2Gamma,
    /// ζΓ/ζ(2s) on (1/2, 1).
    QuotZetaGamma,
    /// ζ²Γ/ζ(2s) on (1/2, 1).
    QuotZeta2Gamma,
    /// ζΓ with the extra +1/2 on (−1, 0).
    LeftZetaGamma,
    /// ζ²Γ with the extra −1/4 on (−1, 0).
    LeftZeta2Gamma,
    /// ζΓ on (−2m−1, −2m+1).
    FarLeftZetaGamma(u32),
    /// ζ²Γ on (−2m−1, −2m+1).
    FarLeftZeta2Gamma(u32),
}

impl PresetId {
    /// Every preset, with m = 1 for the far-left pair.
    pub fn all() -> Vec<PresetId> {
        vec![
            PresetId::ZetaGamma,
            PresetId::Zeta2Gamma,
            PresetId::QuotZetaGamma,
            PresetId::QuotZeta2Gamma,
            PresetId::LeftZetaGamma,
            PresetId::LeftZeta2Gamma,
            PresetId::FarLeftZetaGamma(1),
            PresetId::FarLeftZeta2Gamma(1),
        ]
    }

    pub fn case(self) -> CaseId {
        match self {
            PresetId::ZetaGamma => CaseId::MuntzK(1),
            PresetId::Zeta2Gamma => CaseId::MuntzZeta2,
            PresetId::QuotZetaGamma => CaseId::QuotK(1),
            PresetId::QuotZeta2Gamma => CaseId::QuotK(2),
            PresetId::LeftZetaGamma => CaseId::LeftStripK(1),
            PresetId::LeftZeta2Gamma => CaseId::LeftStripK(2),
            PresetId::FarLeftZetaGamma(m) => CaseId::FarLeft { k: 1, m },
            PresetId::FarLeftZeta2Gamma(m) => CaseId::FarLeft { k: 2, m },
        }
    }

    /// One interior point of the strip.
    pub fn default_point(self) -> Complex64 {
        let re = match self {
            PresetId::ZetaGamma | PresetId::Zeta2Gamma => 0.5,
            PresetId::QuotZetaGamma | PresetId::QuotZeta2Gamma => 0.75,
            PresetId::LeftZetaGamma | PresetId::LeftZeta2Gamma => -0.5,
            PresetId::FarLeftZetaGamma(m) | PresetId::FarLeftZeta2Gamma(m) => -2.0 * m as f64,
        };
        Complex64::new(re, 0.0)
    }

    pub fn default_tol(self) -> f64 {
        match self {
            PresetId::ZetaGamma => 1e-8,
            _ => 1e-6,
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetId::ZetaGamma => write!(f, "zeta-gamma"),
            PresetId::Zeta2Gamma => write!(f, "zeta2-gamma"),
            PresetId::QuotZetaGamma => write!(f, "quot-zeta-gamma"),
            PresetId::QuotZeta2Gamma => write!(f, "quot-zeta2-gamma"),
            PresetId::LeftZetaGamma => write!(f, "left-zeta-gamma"),
            PresetId::LeftZeta2Gamma => write!(f, "left-zeta2-gamma"),
            PresetId::FarLeftZetaGamma(m) => write!(f, "far-left-zeta-gamma-m{m}"),
            PresetId::FarLeftZeta2Gamma(m) => write!(f, "far-left-zeta2-gamma-m{m}"),
        }
    }
}

impl FromStr for PresetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName { kind: "preset", name: s.to_string() };
        let far = |rest: &str| -> Result<u32> {
            let m: u32 = rest.parse().map_err(|_| unknown())?;
            if (1..=MAX_FAR_LEFT_M).contains(&m) {
                Ok(m)
            } else {
                Err(unknown())
            }
        };
        Ok(match s {
            "zeta-gamma" => PresetId::ZetaGamma,
            "zeta2-gamma" => PresetId::Zeta2Gamma,
            "quot-zeta-gamma" => PresetId::QuotZetaGamma,
            "quot-zeta2-gamma" => PresetId::QuotZeta2Gamma,
            "left-zeta-gamma" => PresetId::LeftZetaGamma,
            "left-zeta2-gamma" => PresetId::LeftZeta2Gamma,
            _ => {
                if let Some(rest) = s.strip_prefix("far-left-zeta-gamma-m") {
                    PresetId::FarLeftZetaGamma(far(rest)?)
                } else if let Some(rest) = s.strip_prefix("far-left-zeta2-gamma-m") {
                    PresetId::FarLeftZeta2Gamma(far(rest)?)
                } else {
                    return Err(unknown());
                }
            }
        })
    }
}

impl Serialize for PresetId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Verifies a Γ·ζ representation at `s` with f = e^{−x}: f* = Γ, and the
/// series Σ e^{−nx} is taken as 1/(e^x − 1).
pub fn gamma_zeta_preset(verifier: &Verifier, preset: PresetId, s: Complex64, tol: f64) -> Result<VerificationReport> {
    let case = FormulaCase::new(preset.case())?;
    let options = VerifyOptions { closed_form_series: true, ..verifier.options() };
    let v = verifier.clone().with_options(options);
    v.verify(&case, &TestFunction::exp_decay(), &[s], tol)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arith::sieve_build;
    use crate::specfun::{gamma, zeta};

    #[test]
    fn names_round_trip() {
        for p in PresetId::all() {
            assert_eq!(p.to_string().parse::<PresetId>().unwrap(), p);
        }
        assert_eq!("far-left-zeta-gamma-m3".parse::<PresetId>().unwrap(), PresetId::FarLeftZetaGamma(3));
        assert!("far-left-zeta-gamma-m0".parse::<PresetId>().is_err());
        assert!("zeta3-gamma".parse::<PresetId>().is_err());
    }

    #[test]
    fn all_presets_pass() {
        let v = Verifier::new(Arc::new(sieve_build(100_000).unwrap()));
        for p in PresetId::all() {
            let r = gamma_zeta_preset(&v, p, p.default_point(), p.default_tol()).unwrap();
            assert!(r.passed(), "{p}: {:e}", r.max_rel_err());
        }
    }

    #[test]
    fn zeta_gamma_value() {
        let v = Verifier::new(Arc::new(sieve_build(1000).unwrap()));
        let s = Complex64::new(0.5, 0.0);
        let r = gamma_zeta_preset(&v, PresetId::ZetaGamma, s, 1e-8).unwrap();
        let expected = zeta(s).unwrap() * gamma(s).unwrap();
        assert!((r.points[0].lhs - expected).norm() < 1e-13);
        // ζ(1/2) = −1.4603545088095868
        assert!((zeta(s).unwrap().re + 1.460_354_508_809_586_8).abs() < 1e-13);
    }
}
