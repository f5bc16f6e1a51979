use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Distance from an excluded abscissa below which a point is rejected.
pub const PUNCTURE_GUARD: f64 = 1e-12;

/// The open strip lo < Re s < hi minus the real points in `excluded`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripDomain {
    lo: f64,
    hi: f64,
    excluded: Vec<f64>,
}

impl StripDomain {
    pub fn new(lo: f64, hi: f64, excluded: Vec<f64>) -> Result<Self> {
        if !(lo < hi) || hi.is_nan() {
            return Err(Error::InvalidArgument(format!("empty strip ({lo}, {hi})")));
        }
        if let Some(e) = excluded.iter().find(|&&e| !(e > lo && e < hi)) {
            return Err(Error::InvalidArgument(format!("excluded point {e} outside ({lo}, {hi})")));
        }
        Ok(Self { lo, hi, excluded })
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Vec::new())
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn excluded(&self) -> &[f64] {
        &self.excluded
    }

    pub fn contains(&self, s: Complex64) -> bool {
        self.check(s).is_ok()
    }

    /// Distance from Re s to the nearer edge (negative outside).
    pub fn margin(&self, s: Complex64) -> f64 {
        (s.re - self.lo).min(self.hi - s.re)
    }

    pub fn check(&self, s: Complex64) -> Result<()> {
        if !(s.re > self.lo && s.re < self.hi) {
            return Err(Error::StripViolation { s, strip: self.to_string() });
        }
        if self
            .excluded
            .iter()
            .any(|&e| (s - Complex64::new(e, 0.0)).norm() <= PUNCTURE_GUARD)
        {
            return Err(Error::Puncture { s });
        }
        Ok(())
    }
}

impl fmt::Display for StripDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)?;
        if !self.excluded.is_empty() {
            let pts: Vec<String> = self.excluded.iter().map(|e| e.to_string()).collect();
            write!(f, " \\ {{{}}}", pts.join(", "))?;
        }
        Ok(())
    }
}
