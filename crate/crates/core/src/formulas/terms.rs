use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// The residue of G(w) x^{−w} at a pole w₀, as a function of x:
/// x^{−w₀} Σ_i c_i (ln x)^i.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLogTerm {
    pub pole: Complex64,
    pub coeffs: Vec<Complex64>,
    /// Absolute uncertainty of each coefficient.
    pub error: f64,
}

impl PowerLogTerm {
    pub fn new(pole: Complex64, coeffs: Vec<Complex64>, error: f64) -> Self {
        Self { pole, coeffs, error }
    }

    /// From the principal part a_{−1}, a_{−2}, … of G at w₀: since
    /// x^{−w} = x^{−w₀} Σ_r (−ln x)^r (w − w₀)^r / r!, the residue has
    /// c_r = a_{−1−r} (−1)^r / r!.
    pub fn from_principal_part(pole: Complex64, principal: &[Complex64], error: f64) -> Self {
        let mut fact = 1.0;
        let coeffs = principal
            .iter()
            .enumerate()
            .map(|(r, &a)| {
                if r > 0 {
                    fact *= r as f64;
                }
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                a * sign / fact
            })
            .collect();
        Self { pole, coeffs, error }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let l = x.ln();
        let mut poly = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            poly = poly * l + c;
        }
        (-self.pole * l).exp() * poly
    }

    /// An upper bound on |term(x)|.
    pub fn magnitude(&self, x: f64) -> f64 {
        let l = x.ln().abs();
        let poly: f64 = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * l + c.norm());
        x.powf(-self.pole.re) * poly
    }

    /// Bound on the effect of the coefficient errors at x.
    pub fn error_at(&self, x: f64) -> f64 {
        let l = x.ln().abs();
        let mut acc = 0.0;
        let mut p = 1.0;
        for _ in &self.coeffs {
            acc += p;
            p *= l;
        }
        self.error * acc * x.powf(-self.pole.re)
    }

    /// ∫₀^{x₀} term(x) x^{s−1} dx, which needs Re s > Re w₀.
    pub fn integral_below(&self, s: Complex64, x0: f64) -> Result<Complex64> {
        let a = s - self.pole;
        if !(a.re > 0.0) {
            return Err(Error::NotIntegrable { exponent: self.pole, residual: a.re });
        }
        Ok(self.poly_integral(a, x0.ln()))
    }

    /// ∫_{x₀}^∞ term(x) x^{s−1} dx, which needs Re s < Re w₀.
    pub fn integral_above(&self, s: Complex64, x0: f64) -> Result<Complex64> {
        let a = s - self.pole;
        if !(a.re < 0.0) {
            return Err(Error::NotIntegrable { exponent: self.pole, residual: a.re });
        }
        Ok(-self.poly_integral(a, x0.ln()))
    }

    /// Σ_i c_i ∫_{−∞}^{U} e^{au} u^i du
    /// = e^{aU} Σ_i c_i Σ_{r≤i} (−1)^r i!/(i−r)! U^{i−r} / a^{r+1}.
    fn poly_integral(&self, a: Complex64, u: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let mut inner = Complex64::new(0.0, 0.0);
            let mut falling = 1.0;
            let mut a_pow = a;
            for r in 0..=i {
                if r > 0 {
                    falling *= (i - r + 1) as f64;
                    a_pow *= a;
                }
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                inner += sign * falling * u.powi((i - r) as i32) / a_pow;
            }
            total += c * inner;
        }
        (a * u).exp() * total
    }

    /// Bound on the coefficient-error contribution to
    /// [`Self::integral_below`] (for x₀ ≤ 1) or [`Self::integral_above`]
    /// (for x₀ ≥ 1); on those ranges |ln x| is monotone and the bound is
    /// e^{aU} Σ_i Σ_{r≤i} i!/(i−r)! |U|^{i−r} / |a|^{r+1}, a = σ − Re w₀.
    pub fn integral_error(&self, sigma: f64, x0: f64) -> f64 {
        if self.error == 0.0 {
            return 0.0;
        }
        let a = sigma - self.pole.re;
        let u = x0.ln();
        let mut total = 0.0;
        for i in 0..self.coeffs.len() {
            let mut falling = 1.0;
            for r in 0..=i {
                if r > 0 {
                    falling *= (i - r + 1) as f64;
                }
                total += falling * u.abs().powi((i - r) as i32) / a.abs().powi(r as i32 + 1);
            }
        }
        self.error * (a * u).exp() * total
    }
}
