use std::sync::OnceLock;

use num_complex::Complex64;

use super::zeta::zeta_unchecked;
use crate::error::{Error, Result};

/// Growth bound for |ζ(σ ± it)|, t ≥ t0:
///
/// * `M` for σ ≥ 2,
/// * `M L(t)` for 1 ≤ σ < 2,
/// * `M t^{(1−σ)/2} L(t)` for 0 ≤ σ < 1,
/// * `M t^{1/2−σ} L(t)` for σ < 0,
///
/// with `L(t) = max(1, ln t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaGrowthEnvelope {
    m: f64,
    t0: f64,
}

/// Exponents of one envelope branch: the bound is `M · L(t)^log_power · t^t_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchExponents {
    pub log_power: u32,
    pub t_power: f64,
}

pub fn branch_exponents(sigma: f64) -> BranchExponents {
    if sigma >= 2.0 {
        BranchExponents { log_power: 0, t_power: 0.0 }
    } else if sigma >= 1.0 {
        BranchExponents { log_power: 1, t_power: 0.0 }
    } else if sigma >= 0.0 {
        BranchExponents { log_power: 1, t_power: 0.5 * (1.0 - sigma) }
    } else {
        BranchExponents { log_power: 1, t_power: 0.5 - sigma }
    }
}

fn shape(sigma: f64, t: f64) -> f64 {
    let b = branch_exponents(sigma);
    let log = t.ln().max(1.0);
    log.powi(b.log_power as i32) * t.powf(b.t_power)
}

/// Abscissas swept when calibrating `M`.
pub const CALIBRATION_SIGMAS: [f64; 13] = [
    -3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0,
];

impl ZetaGrowthEnvelope {
    pub fn new(m: f64, t0: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Domain {
                what: "envelope constant M",
                value: m,
                domain: "(0, inf)".into(),
            });
        }
        if !(t0 > 1.0 && t0.is_finite()) {
            return Err(Error::Domain {
                what: "envelope threshold t0",
                value: t0,
                domain: "(1, inf)".into(),
            });
        }
        Ok(Self { m, t0 })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// The envelope value at (σ, t).
    pub fn bound(&self, sigma: f64, t: f64) -> Result<f64> {
        if !(t >= self.t0) {
            return Err(Error::Domain {
                what: "envelope height t",
                value: t,
                domain: format!("[{}, inf)", self.t0),
            });
        }
        Ok(self.m * shape(sigma, t))
    }

    /// Chooses `M` as `safety` times the largest ratio |ζ(σ+it)| / shape(σ, t)
    /// over the grid `sigmas × {t0, t0 + step, …, t_max}`.
    pub fn calibrate(t0: f64, sigmas: &[f64], t_max: f64, step: f64, safety: f64) -> Result<Self> {
        let mut worst: f64 = 0.0;
        let steps = ((t_max - t0) / step).floor() as usize;
        for &sigma in sigmas {
            for i in 0..=steps {
                let t = t0 + i as f64 * step;
                let z = zeta_unchecked(Complex64::new(sigma, t)).norm();
                worst = worst.max(z / shape(sigma, t));
            }
        }
        Self::new(safety * worst, t0)
    }

    /// The envelope calibrated once per process for t0 = 2 on t ∈ [2, 200]
    /// (step 0.5) with safety factor 2.
    pub fn calibrated() -> &'static Self {
        static ENV: OnceLock<ZetaGrowthEnvelope> = OnceLock::new();
        ENV.get_or_init(|| {
            Self::calibrate(2.0, &CALIBRATION_SIGMAS, 200.0, 0.5, 2.0)
                .expect("calibration grid yields a positive constant")
        })
    }
}

/// Free-function form of [`ZetaGrowthEnvelope::bound`].
pub fn growth_envelope(env: &ZetaGrowthEnvelope, sigma: f64, t: f64) -> Result<f64> {
    env.bound(sigma, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches() {
        let env = ZetaGrowthEnvelope::new(1.0, 2.0).unwrap();
        assert_eq!(env.bound(3.0, 100.0).unwrap(), 1.0);
        let t: f64 = 50.0;
        assert!((env.bound(0.5, t).unwrap() - t.powf(0.25) * t.ln()).abs() < 1e-12);
        assert!((env.bound(-1.0, t).unwrap() - t.powf(1.5) * t.ln()).abs() < 1e-9);
        assert!((env.bound(1.5, t).unwrap() - t.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ZetaGrowthEnvelope::new(0.0, 2.0).is_err());
        assert!(ZetaGrowthEnvelope::new(1.0, 1.0).is_err());
        let env = ZetaGrowthEnvelope::new(1.0, 2.0).unwrap();
        assert!(env.bound(0.5, 1.5).is_err());
    }

    #[test]
    fn non_increasing_in_sigma() {
        let env = ZetaGrowthEnvelope::new(1.0, 1.5).unwrap();
        for &t in &[1.5, 2.0, 2.7, 10.0, 1e3] {
            let mut prev = f64::INFINITY;
            for i in 0..=80 {
                let sigma = -3.0 + 0.075 * i as f64;
                let b = env.bound(sigma, t).unwrap();
                assert!(b <= prev * (1.0 + 1e-14), "t={t} sigma={sigma}");
                prev = b;
            }
        }
    }
}
