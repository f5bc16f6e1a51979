use num_complex::Complex64;
use serde::Serialize;

use super::catalog::TestFunction;
use super::strip::StripDomain;
use crate::contour::{vertical_line_integral_adaptive, LineIntegral};
use crate::error::{Error, Result};
use crate::quad::integrate_vec;

/// Default absolute tolerance of a numerical Mellin transform.
pub const DEFAULT_TRANSFORM_TOL: f64 = 1e-10;

const MAX_SUBDIVISIONS: usize = 3000;

/// A computed value with an estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Approx {
    pub value: Complex64,
    pub error: f64,
}

impl Approx {
    pub fn exact(value: Complex64) -> Self {
        Self { value, error: 0.0 }
    }
}

/// (s)_n = s(s+1)…(s+n−1), with (s)_0 = 1.
pub fn pochhammer(s: Complex64, n: u32) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (s + j as f64))
}

/// Integrates `g(x) (ln x)^log_power x^{w−1}` over (0, ∞) for every w in `ws`
/// with shared node evaluations. `decay` is the exponent with
/// g(x) = O(x^{−decay}); every w needs 0 < Re w < decay.
pub(crate) fn moments<G: Fn(f64) -> f64>(
    g: &G,
    ws: &[Complex64],
    decay: f64,
    support_end: Option<f64>,
    log_power: u32,
    tol: f64,
) -> Result<Vec<Approx>> {
    let dim = ws.len();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let s_min = ws.iter().map(|w| w.re).fold(f64::INFINITY, f64::min);
    let s_max = ws.iter().map(|w| w.re).fold(f64::NEG_INFINITY, f64::max);
    if !(s_min > 0.0) || !(s_max < decay) {
        let bad = ws.iter().find(|w| !(w.re > 0.0 && w.re < decay)).copied().unwrap_or(ws[0]);
        return Err(Error::StripViolation { s: bad, strip: format!("(0, {decay})") });
    }
    let tols = vec![0.5 * tol; dim];
    let mut values = vec![Complex64::new(0.0, 0.0); dim];
    let mut errors = vec![0.0; dim];
    let mut requested = 0.0;
    let mut achieved: f64 = 0.0;
    let mut converged = true;

    // (0, 1]: x = u^p makes x^{w−1} dx = p u^{pw−1} du bounded at u = 0.
    let p = if s_min < 1.0 { 1.0 / s_min } else { 1.0 };
    let head_end = support_end.map_or(1.0, |e| e.min(1.0));
    let u_end = head_end.powf(1.0 / p);
    let head = integrate_vec(
        |u, out: &mut [Complex64]| {
            let lu = u.ln();
            let x = (p * lu).exp();
            let mut gx = g(x) * p;
            if log_power > 0 {
                gx *= (p * lu).powi(log_power as i32);
            }
            for (slot, w) in out.iter_mut().zip(ws) {
                *slot = if gx == 0.0 { Complex64::new(0.0, 0.0) } else { ((p * w - 1.0) * lu).exp() * gx };
            }
        },
        dim,
        &[0.0, u_end],
        &tols,
        1e-14,
        MAX_SUBDIVISIONS,
    );
    for c in 0..dim {
        values[c] += head.values[c];
        errors[c] += head.errors[c];
    }
    converged &= head.converged;
    requested += 0.5 * tol;
    achieved = achieved.max(head.errors.iter().cloned().fold(0.0, f64::max));

    // [1, ∞): x = 1/u, then u = v^q so the u^{decay−w−1} endpoint is tame.
    if support_end.map_or(true, |e| e > 1.0) {
        let beta = decay - s_max - 1.0;
        let q = if beta < 0.0 { 1.0 / (beta + 1.0) } else { 1.0 };
        let v_start = support_end.map_or(0.0, |e| (1.0 / e).powf(1.0 / q));
        let tail = integrate_vec(
            |v, out: &mut [Complex64]| {
                let lv = v.ln();
                let lu = q * lv;
                let x = (-lu).exp();
                let mut gx = g(x) * q;
                if log_power > 0 {
                    gx *= (-lu).powi(log_power as i32);
                }
                for (slot, w) in out.iter_mut().zip(ws) {
                    *slot = if gx == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        ((-w - 1.0) * lu + (q - 1.0) * lv).exp() * gx
                    };
                }
            },
            dim,
            &[v_start, 1.0],
            &tols,
            1e-14,
            MAX_SUBDIVISIONS,
        );
        for c in 0..dim {
            values[c] += tail.values[c];
            errors[c] += tail.errors[c];
        }
        converged &= tail.converged;
        requested += 0.5 * tol;
        achieved = achieved.max(tail.errors.iter().cloned().fold(0.0, f64::max));
    }
    if !converged {
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if achieved > tol.max(1e-13 * scale) * 10.0 {
            return Err(Error::QuadratureNonConvergence { achieved, requested });
        }
    }
    Ok(values
        .into_iter()
        .zip(errors)
        .map(|(value, error)| Approx { value, error })
        .collect())
}

/// The strip −n < Re s < α, punctured at 0, −1, …, −(n−1).
pub fn continuation_domain(f: &TestFunction, n: u32) -> StripDomain {
    let excluded = (0..n).map(|j| -(j as f64)).collect();
    StripDomain::new(-(n as f64), f.alpha(), excluded).expect("alpha > 1 > -n")
}

/// f*(s) = ∫₀^∞ f(x) x^{s−1} dx for 0 < Re s < α.
pub fn transform(f: &TestFunction, s: Complex64) -> Result<Approx> {
    transform_with_tol(f, s, DEFAULT_TRANSFORM_TOL)
}

pub fn transform_with_tol(f: &TestFunction, s: Complex64, tol: f64) -> Result<Approx> {
    transform_continued_with_tol(f, s, 0, tol)
}

/// The continuation f*(s) = (−1)ⁿ/(s)_n ∫₀^∞ f^{(n)}(x) x^{s+n−1} dx,
/// valid for −n < Re s < α away from 0, −1, …, −(n−1).
pub fn transform_continued(f: &TestFunction, s: Complex64, n: u32) -> Result<Approx> {
    transform_continued_with_tol(f, s, n, DEFAULT_TRANSFORM_TOL)
}

pub fn transform_continued_with_tol(f: &TestFunction, s: Complex64, n: u32, tol: f64) -> Result<Approx> {
    Ok(transform_continued_many(f, &[s], n, tol)?[0])
}

fn transform_continued_many(f: &TestFunction, ss: &[Complex64], n: u32, tol: f64) -> Result<Vec<Approx>> {
    if n > f.k_max() {
        return Err(Error::Domain {
            what: "continuation order n",
            value: n as f64,
            domain: format!("[0, {}] (k_max of {})", f.k_max(), f.name()),
        });
    }
    let domain = continuation_domain(f, n);
    for &s in ss {
        domain.check(s)?;
    }
    let ws: Vec<Complex64> = ss.iter().map(|s| s + n as f64).collect();
    let g = |x: f64| f.eval_derivative(n, x);
    let raw = moments(&g, &ws, f.alpha() + n as f64, f.support_end(), 0, tol)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(ss
        .iter()
        .zip(raw)
        .map(|(&s, m)| {
            let poch = pochhammer(s, n);
            Approx {
                value: m.value * sign / poch,
                error: m.error / poch.norm(),
            }
        })
        .collect())
}

/// Smallest continuation order that puts Re s + n at or above 1/2.
fn auto_order(f: &TestFunction, s: Complex64) -> Result<u32> {
    let n = if s.re >= 0.5 { 0 } else { (0.5 - s.re).ceil() as u32 };
    let n = n.min(f.k_max());
    continuation_domain(f, n).check(s)?;
    Ok(n)
}

/// f*(s) anywhere in its domain of continuation: the closed form when the
/// catalog has one, otherwise quadrature at the smallest admissible order.
pub fn mellin_value(f: &TestFunction, s: Complex64, tol: f64) -> Result<Approx> {
    Ok(mellin_values(f, &[s], tol)?[0])
}

/// Batched [`mellin_value`]; points sharing a continuation order share
/// quadrature nodes.
pub fn mellin_values(f: &TestFunction, ss: &[Complex64], tol: f64) -> Result<Vec<Approx>> {
    if f.has_exact_transform() {
        return ss
            .iter()
            .map(|&s| {
                f.exact_transform(s)
                    .map(|v| Approx::exact(v.expect("closed form available")))
            })
            .collect();
    }
    let mut out = vec![Approx::exact(Complex64::new(0.0, 0.0)); ss.len()];
    let orders: Vec<u32> = ss.iter().map(|&s| auto_order(f, s)).collect::<Result<_>>()?;
    let mut distinct = orders.clone();
    distinct.sort_unstable();
    distinct.dedup();
    for n in distinct {
        let idx: Vec<usize> = (0..ss.len()).filter(|&i| orders[i] == n).collect();
        let pts: Vec<Complex64> = idx.iter().map(|&i| ss[i]).collect();
        let vals = transform_continued_many(f, &pts, n, tol)?;
        for (i, v) in idx.into_iter().zip(vals) {
            out[i] = v;
        }
    }
    Ok(out)
}

/// (f*)'(s) for 0 < Re s < α: closed form when known, else ∫ f(x) ln x x^{s−1} dx.
pub fn mellin_derivative(f: &TestFunction, s: Complex64, tol: f64) -> Result<Approx> {
    if let Some(v) = f.exact_transform_deriv(s)? {
        return Ok(Approx::exact(v));
    }
    let g = |x: f64| f.eval(x);
    Ok(moments(&g, &[s], f.alpha(), f.support_end(), 1, tol)?[0])
}

/// Residue of f* at s = −n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativeResidue {
    pub value: f64,
    /// True when the residue vanishes, i.e. −n is a removable point.
    pub removable: bool,
}

/// res_{s=−n} f*(s) = f^{(n)}(0)/n! for n < k_max.
pub fn residue_at_negative(f: &TestFunction, n: u32) -> Result<NegativeResidue> {
    if n >= f.k_max() {
        return Err(Error::Domain {
            what: "pole order n",
            value: n as f64,
            domain: format!("[0, {}) (k_max of {})", f.k_max(), f.name()),
        });
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let value = f.deriv_at_zero(n) / fact;
    Ok(NegativeResidue { value, removable: value == 0.0 })
}

/// C(σ) = ∫₀^∞ |f^{(k)}(x)| x^{σ+k−1} dx with k = k_max, so that
/// |f*(σ+it)| ≤ C(σ)/|t|^k.
pub fn decay_bound_constant(f: &TestFunction, sigma: f64) -> Result<f64> {
    decay_bound_constant_of_order(f, sigma, f.k_max())
}

/// C(σ) for an explicit derivative order k ≤ k_max.
pub fn decay_bound_constant_of_order(f: &TestFunction, sigma: f64, k: u32) -> Result<f64> {
    let s = Complex64::new(sigma, 0.0);
    let k = k.min(f.k_max());
    if !(sigma > -(k as f64) && sigma < f.alpha()) {
        return Err(Error::StripViolation {
            s,
            strip: format!("({}, {})", -(k as f64), f.alpha()),
        });
    }
    let g = |x: f64| f.eval_derivative(k, x).abs();
    let w = Complex64::new(sigma + k as f64, 0.0);
    let m = moments(&g, &[w], f.alpha() + k as f64, f.support_end(), 0, 1e-12)?[0];
    Ok(m.value.re + m.error)
}

/// (1/2πi) ∫_{σ−i∞}^{σ+i∞} F(s) x^{−s} ds, truncated where the integral
/// stops changing by more than `tol`.
pub fn inverse_transform<F: Fn(Complex64) -> Complex64>(
    big_f: F,
    x: f64,
    sigma: f64,
    tol: f64,
) -> Result<LineIntegral> {
    vertical_line_integral_adaptive(big_f, sigma, x, tol, 1e5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(c(3.0, 1.0), 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(2.0, 0.0), 3), c(24.0, 0.0));
        assert_eq!(pochhammer(c(-3.0, 0.0), 3), c(-6.0, 0.0));
        assert_eq!(pochhammer(c(-2.0, 0.0), 2) * c(0.0, 0.0), c(0.0, 0.0));
    }

    #[test]
    fn exponential_transform_is_gamma() {
        let f = TestFunction::exp_decay();
        for s in [c(1.0, 0.0), c(0.5, 0.0), c(0.05, 3.0), c(2.5, -7.0), c(4.9, 0.5)] {
            let t = transform(&f, s).unwrap();
            let g = gamma(s).unwrap();
            assert!((t.value - g).norm() < 1e-9, "{s}: {} vs {g}", t.value);
        }
    }

    #[test]
    fn gaussian_and_power_law() {
        let g = transform(&TestFunction::gaussian(), c(1.0, 0.0)).unwrap();
        assert!((g.value.re - 0.5 * PI.sqrt()).abs() < 1e-10);
        let p = TestFunction::power_law(3);
        let s = c(0.7, 2.0);
        let num = transform(&p, s).unwrap().value;
        let exact = p.exact_transform(s).unwrap().unwrap();
        assert!((num - exact).norm() < 1e-9);
    }

    #[test]
    fn continuation_reaches_left_of_zero() {
        let f = TestFunction::exp_decay();
        let v = transform_continued(&f, c(-0.5, 0.0), 1).unwrap();
        assert!((v.value.re + 2.0 * PI.sqrt()).abs() < 1e-8);
        let v = transform_continued(&f, c(0.5, 0.0), 2).unwrap();
        assert!((v.value.re - PI.sqrt()).abs() < 1e-8);
        assert!(matches!(transform_continued(&f, c(-1.0, 0.0), 3), Err(Error::Puncture { .. })));
        assert!(matches!(transform_continued(&f, c(-1.5, 0.0), 1), Err(Error::StripViolation { .. })));
        assert!(transform_continued(&TestFunction::power_law(3), c(-2.5, 0.0), 3).is_err());
    }

    #[test]
    fn bump_transform_consistency() {
        let f = TestFunction::bump();
        let s = c(-1.3, 0.8);
        let a = transform_continued(&f, s, 2).unwrap().value;
        let b = transform_continued(&f, s, 4).unwrap().value;
        assert!((a - b).norm() < 1e-8);
        let m = mellin_value(&f, s, 1e-10).unwrap().value;
        assert!((a - m).norm() < 1e-8);
    }

    #[test]
    fn derivative_at_one() {
        let e = TestFunction::exp_decay();
        let d = mellin_derivative(&e, c(1.0, 0.0), 1e-12).unwrap();
        assert!((d.value.re + crate::specfun::EULER_GAMMA).abs() < 1e-13);
        // ∫ e^{-x} ln x dx through the quadrature path
        let g = |x: f64| (-x).exp();
        let m = moments(&g, &[c(1.0, 0.0)], 20.0, None, 1, 1e-12).unwrap()[0];
        assert!((m.value.re + crate::specfun::EULER_GAMMA).abs() < 1e-10);
    }

    #[test]
    fn residues_at_negative_integers() {
        let e = TestFunction::exp_decay();
        assert_eq!(residue_at_negative(&e, 0).unwrap().value, 1.0);
        assert_eq!(residue_at_negative(&e, 1).unwrap().value, -1.0);
        let g = residue_at_negative(&TestFunction::gaussian(), 1).unwrap();
        assert!(g.removable);
        assert!(residue_at_negative(&TestFunction::power_law(3), 2).is_err());
    }

    #[test]
    fn decay_constant_examples() {
        let f = TestFunction::exp_decay().with_k_max(2).unwrap();
        let c1 = decay_bound_constant(&f, 1.0).unwrap();
        assert!((c1 - 2.0).abs() < 1e-9);
        let g = gamma(c(1.0, 10.0)).unwrap().norm();
        assert!(g <= c1 / 100.0);
    }

    #[test]
    fn inverse_of_gamma_is_exponential() {
        for x in [1.0, 2.0] {
            let r = inverse_transform(|s| gamma(s).unwrap(), x, 2.0, 1e-8).unwrap();
            assert!((r.value.re - (-x).exp()).abs() < 1e-8, "{x}");
        }
    }
}
