use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::arith::{eval_zeta_expr, SeriesId, ZetaExpr};
use crate::error::{Error, Result};
use crate::mellin::{class_check, ClassReport, StripDomain, TestFunction};

/// Largest ζ power accepted by the ζ^k families.
pub const MAX_CASE_K: u32 = 8;
/// Largest m accepted by the far-left family.
pub const MAX_FAR_LEFT_M: u32 = 4;
/// Minimum distance of a sample point from the strip edges.
pub const EDGE_MARGIN: f64 = 0.05;

/// One Müntz-type identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    /// ζ^k(s) f*(s) in 0 < Re s < 1 with Σ d_k(n) f(nx).
    MuntzK(u32),
    /// The ζ² identity with its closed-form residue at s = 1.
    MuntzZeta2,
    /// ζ^k(s)/ζ(2s) f*(s) in 1/2 < Re s < 1, k = 1..4.
    QuotK(u32),
    /// ζ^k(s) f*(s) in −1 < Re s < 0.
    LeftStripK(u32),
    /// ζ^k(s) f*(s) in −2m−1 < Re s < −2m+1.
    FarLeft { k: u32, m: u32 },
}

impl CaseId {
    /// Cases exercised by a full run.
    pub fn standard() -> Vec<CaseId> {
        let mut v: Vec<CaseId> = (1..=4).map(CaseId::MuntzK).collect();
        v.push(CaseId::MuntzZeta2);
        v.extend((1..=4).map(CaseId::QuotK));
        v.extend((1..=2).map(CaseId::LeftStripK));
        v.push(CaseId::FarLeft { k: 1, m: 1 });
        v.push(CaseId::FarLeft { k: 2, m: 1 });
        v
    }

    pub fn validate(self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidArgument(reason));
        match self {
            CaseId::MuntzK(k) | CaseId::LeftStripK(k) if k == 0 || k > MAX_CASE_K => {
                bad(format!("k must be in 1..={MAX_CASE_K}, got {k}"))
            }
            CaseId::QuotK(k) if !(1..=4).contains(&k) => bad(format!("quotient k must be in 1..=4, got {k}")),
            CaseId::FarLeft { k, m } if k == 0 || k > MAX_CASE_K || m == 0 || m > MAX_FAR_LEFT_M => {
                bad(format!("far-left needs 1 <= k <= {MAX_CASE_K} and 1 <= m <= {MAX_FAR_LEFT_M}"))
            }
            _ => Ok(()),
        }
    }

    /// The ζ power k.
    pub fn k(self) -> u32 {
        match self {
            CaseId::MuntzK(k) | CaseId::QuotK(k) | CaseId::LeftStripK(k) | CaseId::FarLeft { k, .. } => k,
            CaseId::MuntzZeta2 => 2,
        }
    }

    pub fn is_quotient(self) -> bool {
        matches!(self, CaseId::QuotK(_))
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseId::MuntzK(k) => write!(f, "muntz-k{k}"),
            CaseId::MuntzZeta2 => f.write_str("muntz-zeta2"),
            CaseId::QuotK(k) => write!(f, "quot-k{k}"),
            CaseId::LeftStripK(k) => write!(f, "left-k{k}"),
            CaseId::FarLeft { k, m } => write!(f, "far-left-k{k}-m{m}"),
        }
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName { kind: "case", name: s.to_string() };
        let num = |t: &str| t.parse::<u32>().map_err(|_| unknown());
        let id = if s == "muntz-zeta2" {
            CaseId::MuntzZeta2
        } else if let Some(rest) = s.strip_prefix("far-left-k") {
            let (k, m) = rest.split_once("-m").ok_or_else(unknown)?;
            CaseId::FarLeft { k: num(k)?, m: num(m)? }
        } else if let Some(k) = s.strip_prefix("muntz-k") {
            CaseId::MuntzK(num(k)?)
        } else if let Some(k) = s.strip_prefix("quot-k") {
            CaseId::QuotK(num(k)?)
        } else if let Some(k) = s.strip_prefix("left-k") {
            CaseId::LeftStripK(num(k)?)
        } else {
            return Err(unknown());
        };
        id.validate().map_err(|_| unknown())?;
        Ok(id)
    }
}

impl Serialize for CaseId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A case with its strip, class requirement and coefficient stream.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaCase {
    id: CaseId,
    strip: StripDomain,
    m_min: u32,
}

impl FormulaCase {
    pub fn new(id: CaseId) -> Result<Self> {
        id.validate()?;
        let (lo, hi, m_min) = match id {
            // m ≥ 1 + k/2 (and m ≥ 2 for the line integral at Re s > 1)
            CaseId::MuntzK(k) => (0.0, 1.0, ((k + 3) / 2).max(2)),
            CaseId::MuntzZeta2 => (0.0, 1.0, 2),
            CaseId::QuotK(k) => (0.5, 1.0, if k <= 2 { 2 } else { 3 }),
            // m ≥ 1 + 3k/2
            CaseId::LeftStripK(k) => (-1.0, 0.0, (3 * k + 3) / 2),
            // l ≥ 1 + k(2m + 3/2)
            CaseId::FarLeft { k, m } => {
                let mf = m as f64;
                (-2.0 * mf - 1.0, -2.0 * mf + 1.0, 1 + 2 * k * m + (3 * k + 1) / 2)
            }
        };
        Ok(Self { id, strip: StripDomain::open(lo, hi)?, m_min })
    }

    pub fn id(&self) -> CaseId {
        self.id
    }

    pub fn strip(&self) -> &StripDomain {
        &self.strip
    }

    pub fn m_min(&self) -> u32 {
        self.m_min
    }

    pub fn k(&self) -> u32 {
        self.id.k()
    }

    /// The coefficient stream whose Dirichlet series is the ζ-expression.
    pub fn series(&self) -> SeriesId {
        match self.id {
            CaseId::QuotK(1) => SeriesId::AbsMu,
            CaseId::QuotK(2) => SeriesId::TwoOmega,
            CaseId::QuotK(3) => SeriesId::DSqArg,
            CaseId::QuotK(_) => SeriesId::DSquared,
            _ if self.k() == 1 => SeriesId::One,
            _ => SeriesId::Dk(self.k()),
        }
    }

    pub fn zeta_expr(&self) -> ZetaExpr {
        ZetaExpr { power: self.k() as i32, over_zeta_2s: self.id.is_quotient() }
    }

    /// The ζ-expression Φ(s) multiplying f*(s) on the left-hand side.
    pub fn phi(&self, s: Complex64) -> Result<Complex64> {
        eval_zeta_expr(self.zeta_expr(), s)
    }

    /// Real poles of Φ f* x^{−s} crossed when the line moves from Re s > 1
    /// into the strip: s = 1 and every non-positive integer right of it.
    pub fn crossed_poles(&self) -> Vec<i64> {
        let mut v = vec![1];
        let lo = self.strip.lo().ceil() as i64;
        let mut j = 0;
        while j >= lo && (j as f64) >= self.strip.hi() {
            v.push(j);
            j -= 1;
        }
        v
    }

    /// Default sample points: edge-avoiding and, in the critical strip,
    /// spread in height.
    pub fn default_samples(&self) -> Vec<Complex64> {
        let re: Vec<f64> = match self.id {
            CaseId::MuntzK(_) | CaseId::MuntzZeta2 => vec![0.25, 0.5, 0.75],
            CaseId::QuotK(_) => vec![0.6, 0.75, 0.9],
            CaseId::LeftStripK(_) => vec![-0.75, -0.5, -0.25],
            CaseId::FarLeft { m, .. } => vec![-2.0 * m as f64 - 0.5, -2.0 * m as f64 + 0.5],
        };
        let im: Vec<f64> = match self.id {
            CaseId::MuntzK(_) | CaseId::MuntzZeta2 => vec![0.0, 2.0, 5.0],
            _ => vec![0.0],
        };
        im.iter()
            .flat_map(|&t| re.iter().map(move |&r| Complex64::new(r, t)))
            .collect()
    }

    /// Checks that a sample point lies inside the strip, clear of its edges.
    pub fn check_point(&self, s: Complex64) -> Result<()> {
        self.strip.check(s)?;
        if self.strip.margin(s) < EDGE_MARGIN {
            return Err(Error::StripViolation { s, strip: format!("{} with margin {EDGE_MARGIN}", self.strip) });
        }
        Ok(())
    }

    /// Enforces the case's class hypothesis: α > 1, enough declared
    /// derivatives, and a decay check that confirms the declaration.
    pub fn check_class(&self, f: &TestFunction) -> Result<ClassReport> {
        let violation = |reason: String| Error::ClassViolation {
            case: self.id.to_string(),
            function: f.name().to_string(),
            reason,
        };
        if !(f.alpha() > 1.0) {
            return Err(violation(format!("alpha = {} is not > 1", f.alpha())));
        }
        if f.alpha() <= self.strip.hi() {
            return Err(violation(format!("alpha = {} does not clear the strip", f.alpha())));
        }
        if f.k_max() < self.m_min {
            return Err(violation(format!(
                "smoothness budget m = {} is below the required {}",
                f.k_max(),
                self.m_min
            )));
        }
        let report = class_check(f);
        if !report.pass() {
            return Err(violation(format!("derivative orders {:?} fail the decay check", report.failing)));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in CaseId::standard() {
            assert_eq!(id.to_string().parse::<CaseId>().unwrap(), id);
        }
        assert_eq!("far-left-k2-m3".parse::<CaseId>().unwrap(), CaseId::FarLeft { k: 2, m: 3 });
        assert!("quot-k5".parse::<CaseId>().is_err());
        assert!("muntz".parse::<CaseId>().is_err());
        assert!("left-k0".parse::<CaseId>().is_err());
    }

    #[test]
    fn hypotheses() {
        let m = |id| FormulaCase::new(id).unwrap().m_min();
        assert_eq!(m(CaseId::MuntzK(1)), 2);
        assert_eq!(m(CaseId::MuntzK(3)), 3);
        assert_eq!(m(CaseId::MuntzK(4)), 3);
        assert_eq!(m(CaseId::QuotK(2)), 2);
        assert_eq!(m(CaseId::QuotK(3)), 3);
        assert_eq!(m(CaseId::LeftStripK(1)), 3);
        assert_eq!(m(CaseId::LeftStripK(2)), 4);
        assert_eq!(m(CaseId::FarLeft { k: 1, m: 1 }), 5);
        assert_eq!(m(CaseId::FarLeft { k: 2, m: 1 }), 8);
        assert_eq!(m(CaseId::FarLeft { k: 1, m: 2 }), 7);
    }

    #[test]
    fn strips_and_poles() {
        let c = FormulaCase::new(CaseId::FarLeft { k: 1, m: 2 }).unwrap();
        assert_eq!((c.strip().lo(), c.strip().hi()), (-5.0, -3.0));
        assert_eq!(c.crossed_poles(), vec![1, 0, -1, -2, -3]);
        let c = FormulaCase::new(CaseId::LeftStripK(2)).unwrap();
        assert_eq!(c.crossed_poles(), vec![1, 0]);
        let c = FormulaCase::new(CaseId::QuotK(3)).unwrap();
        assert_eq!(c.crossed_poles(), vec![1]);
        assert_eq!(c.series(), SeriesId::DSqArg);
    }

    #[test]
    fn class_enforcement() {
        let quot3 = FormulaCase::new(CaseId::QuotK(3)).unwrap();
        let err = quot3.check_class(&TestFunction::power_law(3)).unwrap_err();
        assert!(matches!(err, Error::ClassViolation { .. }));
        assert!(quot3.check_class(&TestFunction::exp_decay()).is_ok());
        let left2 = FormulaCase::new(CaseId::LeftStripK(2)).unwrap();
        assert!(left2.check_class(&TestFunction::power_law(5)).is_ok());
        let far = FormulaCase::new(CaseId::FarLeft { k: 1, m: 1 }).unwrap();
        assert!(far.check_class(&TestFunction::power_law(5)).is_err());
    }

    #[test]
    fn sample_points_inside() {
        for id in CaseId::standard() {
            let c = FormulaCase::new(id).unwrap();
            for s in c.default_samples() {
                c.check_point(s).unwrap();
            }
        }
    }
}
