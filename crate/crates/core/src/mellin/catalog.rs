use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate_real, QuadOptions};
use crate::specfun::{digamma, gamma, gamma_real};

/// Highest derivative order any catalog entry can evaluate.
pub const MAX_DERIVATIVE: u32 = 16;

/// Highest smoothness budget a catalog entry may declare.
pub const MAX_K: u32 = 8;

/// Shape of a catalog function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    /// e^{−x}
    ExpDecay,
    /// e^{−x²}
    Gaussian,
    /// (1 + x)^{−m}
    PowerLaw { m: u32 },
    /// exp(1 − 1/(1 − x²)) on [0, 1), zero beyond
    Bump,
}

/// A function f on [0, ∞) with analytic derivatives, a declared decay
/// exponent α (f^{(j)}(x) = O(x^{−α−j})) and smoothness budget k_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    name: String,
    profile: Profile,
    alpha: f64,
    k_max: u32,
}

/// Names accepted by [`TestFunction::by_name`].
pub const CATALOG_NAMES: [&str; 5] = ["exp", "gaussian", "power3", "power5", "bump"];

impl TestFunction {
    pub fn new(name: impl Into<String>, profile: Profile, alpha: f64, k_max: u32) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::Domain {
                what: "decay exponent alpha",
                value: alpha,
                domain: "(1, inf)".into(),
            });
        }
        if k_max > MAX_K {
            return Err(Error::Domain {
                what: "smoothness budget k_max",
                value: k_max as f64,
                domain: format!("[0, {MAX_K}]"),
            });
        }
        if let Profile::PowerLaw { m } = profile {
            if m < 2 {
                return Err(Error::InvalidArgument(format!("power law needs m >= 2, got {m}")));
            }
        }
        Ok(Self { name: name.into(), profile, alpha, k_max })
    }

    pub fn exp_decay() -> Self {
        Self { name: "exp".into(), profile: Profile::ExpDecay, alpha: 20.0, k_max: 8 }
    }

    pub fn gaussian() -> Self {
        Self { name: "gaussian".into(), profile: Profile::Gaussian, alpha: 20.0, k_max: 8 }
    }

    /// (1 + x)^{−m} with α = m. The smoothness budget is the largest order
    /// for which the decay regression on [10, 10⁴] is still within its
    /// tolerance: 2 for m = 3 and 4 for m = 5.
    pub fn power_law(m: u32) -> Self {
        let k_max = match m {
            0..=2 => 1,
            3 => 2,
            4 => 3,
            _ => 4,
        };
        Self {
            name: format!("power{m}"),
            profile: Profile::PowerLaw { m: m.max(2) },
            alpha: m.max(2) as f64,
            k_max,
        }
    }

    pub fn bump() -> Self {
        Self { name: "bump".into(), profile: Profile::Bump, alpha: 20.0, k_max: 8 }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "exp" => Ok(Self::exp_decay()),
            "gaussian" => Ok(Self::gaussian()),
            "power3" => Ok(Self::power_law(3)),
            "power5" => Ok(Self::power_law(5)),
            "bump" => Ok(Self::bump()),
            _ => Err(Error::UnknownName { kind: "function", name: name.into() }),
        }
    }

    /// The same function with a different declared decay exponent.
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        Self::new(self.name.clone(), self.profile, alpha, self.k_max)?;
        self.alpha = alpha;
        Ok(self)
    }

    /// The same function with a different smoothness budget.
    pub fn with_k_max(mut self, k_max: u32) -> Result<Self> {
        Self::new(self.name.clone(), self.profile, self.alpha, k_max)?;
        self.k_max = k_max;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// Right edge of the support, if bounded.
    pub fn support_end(&self) -> Option<f64> {
        match self.profile {
            Profile::Bump => Some(1.0),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_derivative(0, x)
    }

    /// f^{(j)}(x) for x ≥ 0 and j ≤ [`MAX_DERIVATIVE`].
    pub fn eval_derivative(&self, j: u32, x: f64) -> f64 {
        assert!(j <= MAX_DERIVATIVE, "derivative order {j} above {MAX_DERIVATIVE}");
        match self.profile {
            Profile::ExpDecay => sign(j) * (-x).exp(),
            Profile::Gaussian => sign(j) * hermite(j, x) * (-x * x).exp(),
            Profile::PowerLaw { m } => sign(j) * rising(m as f64, j) * (1.0 + x).powi(-((m + j) as i32)),
            Profile::Bump => bump_derivatives(j, x)[j as usize],
        }
    }

    /// ln |f^{(j)}(x)|, finite where f^{(j)}(x) would underflow.
    pub fn ln_abs_derivative(&self, j: u32, x: f64) -> f64 {
        match self.profile {
            Profile::ExpDecay => -x,
            Profile::Gaussian => hermite(j, x).abs().ln() - x * x,
            Profile::PowerLaw { m } => rising(m as f64, j).ln() - (m as f64 + j as f64) * (1.0 + x).ln(),
            Profile::Bump => self.eval_derivative(j, x).abs().ln(),
        }
    }

    /// f^{(j)}(0).
    pub fn deriv_at_zero(&self, j: u32) -> f64 {
        match self.profile {
            Profile::ExpDecay => sign(j),
            Profile::Gaussian => {
                if j % 2 == 1 {
                    0.0
                } else {
                    let n = j / 2;
                    sign(n) * factorial(j) / factorial(n)
                }
            }
            Profile::PowerLaw { m } => sign(j) * rising(m as f64, j),
            Profile::Bump => bump_derivatives(j, 0.0)[j as usize],
        }
    }

    pub fn has_exact_transform(&self) -> bool {
        !matches!(self.profile, Profile::Bump)
    }

    /// Closed-form Mellin transform (meromorphic continuation), if known.
    pub fn exact_transform(&self, s: Complex64) -> Result<Option<Complex64>> {
        Ok(match self.profile {
            Profile::ExpDecay => Some(gamma(s)?),
            Profile::Gaussian => Some(0.5 * gamma(0.5 * s)?),
            Profile::PowerLaw { m } => {
                let mf = m as f64;
                Some(gamma(s)? * gamma(mf - s)? / gamma_real(mf)?)
            }
            Profile::Bump => None,
        })
    }

    /// Derivative of the closed-form transform, if known.
    pub fn exact_transform_deriv(&self, s: Complex64) -> Result<Option<Complex64>> {
        Ok(match self.profile {
            Profile::ExpDecay => Some(gamma(s)? * digamma(s)?),
            Profile::Gaussian => Some(0.25 * gamma(0.5 * s)? * digamma(0.5 * s)?),
            Profile::PowerLaw { m } => {
                let mf = m as f64;
                let value = gamma(s)? * gamma(mf - s)? / gamma_real(mf)?;
                Some(value * (digamma(s)? - digamma(mf - s)?))
            }
            Profile::Bump => None,
        })
    }

    /// ∫_y^∞ f(u) du for y ≥ 0.
    pub fn tail_integral(&self, y: f64) -> f64 {
        match self.profile {
            Profile::ExpDecay => (-y).exp(),
            Profile::Gaussian => 0.5 * PI.sqrt() * libm::erfc(y),
            Profile::PowerLaw { m } => (1.0 + y).powf(1.0 - m as f64) / (m as f64 - 1.0),
            Profile::Bump => {
                if y >= 1.0 {
                    0.0
                } else {
                    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-14, max_subdivisions: 200 };
                    integrate_real(|u| self.eval(u), y, 1.0, opts).0
                }
            }
        }
    }

    /// ∫_y^∞ |f^{(r)}(u)| du for y ≥ 0.
    pub fn derivative_tail_integral(&self, r: u32, y: f64) -> f64 {
        if r == 0 {
            return self.tail_integral(y);
        }
        let numeric = |lo: f64, hi: f64| {
            if lo >= hi {
                return 0.0;
            }
            let opts = QuadOptions { abs_tol: 1e-18, rel_tol: 1e-10, max_subdivisions: 400 };
            let width = (hi - lo) / 16.0;
            (0..16)
                .map(|i| {
                    let a = lo + width * i as f64;
                    integrate_real(|u| self.eval_derivative(r, u).abs(), a, a + width, opts).0
                })
                .sum::<f64>()
        };
        match self.profile {
            Profile::ExpDecay => (-y).exp(),
            Profile::Gaussian => numeric(y, y.max(0.0) + 30.0),
            Profile::PowerLaw { m } => {
                let e = m as f64 + r as f64;
                rising(m as f64, r) * (1.0 + y).powf(1.0 - e) / (e - 1.0)
            }
            Profile::Bump => numeric(y.min(1.0), 1.0),
        }
    }

    /// An upper bound on ∫_y^∞ |f(u)| u^a du for y > 0.
    pub fn tail_moment_bound(&self, a: f64, y: f64) -> f64 {
        match self.profile {
            Profile::ExpDecay => {
                if a <= 0.0 {
                    y.powf(a) * (-y).exp()
                } else if y > 2.0 * a {
                    y.powf(a) * (-y).exp() / (1.0 - a / y)
                } else {
                    gamma_real(a + 1.0).unwrap_or(f64::INFINITY)
                }
            }
            Profile::Gaussian => {
                // u^a e^{-u²} = u^{a-1} · u e^{-u²}
                if a <= 1.0 {
                    0.5 * y.powf(a - 1.0) * (-y * y).exp()
                } else if 2.0 * y * y > 2.0 * (a - 1.0) {
                    0.5 * y.powf(a - 1.0) * (-y * y).exp() / (1.0 - (a - 1.0) / (2.0 * y * y))
                } else {
                    0.5 * gamma_real(0.5 * (a + 1.0)).unwrap_or(f64::INFINITY)
                }
            }
            Profile::PowerLaw { m } => {
                let e = m as f64 - a - 1.0;
                if e > 0.0 {
                    y.powf(-e) / e
                } else {
                    f64::INFINITY
                }
            }
            Profile::Bump => {
                if y >= 1.0 {
                    0.0
                } else {
                    (1.0 - y) * y.powf(a).max(1.0)
                }
            }
        }
    }

    /// A point beyond which |f| < `floor` (used to size series cutoffs).
    pub fn negligible_beyond(&self, floor: f64) -> f64 {
        match self.profile {
            Profile::ExpDecay => (-floor.ln()).max(0.0),
            Profile::Gaussian => (-floor.ln()).max(0.0).sqrt(),
            Profile::PowerLaw { m } => floor.powf(-1.0 / m as f64),
            Profile::Bump => 1.0,
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::by_name(s)
    }
}

fn sign(j: u32) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Rising factorial (a)_j for real a.
fn rising(a: f64, j: u32) -> f64 {
    (0..j).map(|i| a + i as f64).product()
}

/// Physicists' Hermite polynomial H_j(x).
fn hermite(j: u32, x: f64) -> f64 {
    let mut h0 = 1.0;
    if j == 0 {
        return h0;
    }
    let mut h1 = 2.0 * x;
    for n in 1..j {
        let h2 = 2.0 * x * h1 - 2.0 * n as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// f, f', …, f^{(j)} of the bump at x via Faà di Bruno-style recursion on
/// f' = g' f with g(x) = 1 − 1/(1 − x²).
fn bump_derivatives(j: u32, x: f64) -> Vec<f64> {
    let j = j as usize;
    let mut out = vec![0.0; j + 1];
    if !(0.0..1.0).contains(&x.abs()) {
        return out;
    }
    let g = 1.0 - 1.0 / (1.0 - x * x);
    let f0 = g.exp();
    if f0 == 0.0 {
        return out;
    }
    out[0] = f0;
    // g^{(i)}(x) = −½ i! [(1−x)^{−i−1} + (−1)^i (1+x)^{−i−1}], i ≥ 1
    let mut gd = vec![0.0; j + 1];
    let mut fact = 1.0;
    for (i, slot) in gd.iter_mut().enumerate().skip(1) {
        fact *= i as f64;
        let a = (1.0 - x).powi(-(i as i32) - 1);
        let b = (1.0 + x).powi(-(i as i32) - 1);
        *slot = -0.5 * fact * (a + sign(i as u32) * b);
    }
    // f^{(n+1)} = Σ_{i=0}^{n} C(n, i) g^{(i+1)} f^{(n−i)}
    for n in 0..j {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for i in 0..=n {
            acc += binom * gd[i + 1] * out[n - i];
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
        out[n + 1] = acc;
    }
    out
}
