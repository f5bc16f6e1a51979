use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use super::case::FormulaCase;
use super::terms::PowerLogTerm;
use crate::arith::{eval_zeta_expr, ZetaExpr};
use crate::contour::{circle_moments_batched, DEFAULT_RADIUS};
use crate::error::{Error, Result};
use crate::mellin::{mellin_derivative, mellin_value, mellin_values, TestFunction};
use crate::specfun::{ln_gamma, zeta, zeta_neg_odd, EULER_GAMMA, GLAISHER_A};

/// Absolute tolerance of contour Laurent coefficients.
pub const LAURENT_TOL: f64 = 1e-13;
/// Tolerance of the f* values used on contours and in closed forms.
const INNER_TOL: f64 = 1e-13;
/// Ordinates of ζ zeros used by the quotient endpoint expansion.
const ZERO_HEIGHT: f64 = 100.0;
const ZERO_SCAN_STEP: f64 = 0.05;

/// A residue value with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueValue {
    pub value: f64,
    pub error: f64,
}

/// Φ(w) f*(w) at a batch of points.
pub(crate) fn h_values(expr: ZetaExpr, f: &TestFunction, pts: &[Complex64]) -> Result<Vec<Complex64>> {
    let fs = mellin_values(f, pts, INNER_TOL)?;
    pts.iter()
        .zip(fs)
        .map(|(&w, fv)| Ok(eval_zeta_expr(expr, w)? * fv.value))
        .collect()
}

/// Principal part a_{−1}, …, a_{−order} of Φ f* at `center`, from contour
/// moments, with the last-doubling change as its uncertainty.
pub fn principal_part(
    expr: ZetaExpr,
    f: &TestFunction,
    center: Complex64,
    order: usize,
    radius: f64,
) -> Result<(Vec<Complex64>, f64)> {
    let m = circle_moments_batched(|pts| h_values(expr, f, pts), center, radius, order, LAURENT_TOL)?;
    Ok((m.values, m.delta.max(LAURENT_TOL)))
}

/// Residue at s = 1 of ζ^k(s) f*(s) x^{−s} in closed form:
/// f*(1)/x for k = 1 and (1/x)[(f*)′(1) + 2γ f*(1) − f*(1) ln x] for k = 2.
pub fn polynomial_correction(f: &TestFunction, k: u32, x: f64) -> Result<ResidueValue> {
    let term = closed_pole_one(f, k, false)?;
    Ok(ResidueValue { value: term.eval(x).re, error: term.error_at(x) })
}

/// Residue at s = 1 of ζ^k(s) f*(s) x^{−s}/ζ(2s): closed forms for
/// k = 1, 2 and contour coefficients for k = 3, 4.
pub fn quotient_residue(f: &TestFunction, k: u32, x: f64) -> Result<ResidueValue> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidArgument(format!("quotient residue needs k in 1..=4, got {k}")));
    }
    let term = if k <= 2 {
        closed_pole_one(f, k, true)?
    } else {
        numeric_pole_one(ZetaExpr { power: k as i32, over_zeta_2s: true }, f, k as usize, DEFAULT_RADIUS)?
    };
    Ok(ResidueValue { value: term.eval(x).re, error: term.error_at(x) })
}

fn closed_pole_one(f: &TestFunction, k: u32, quotient: bool) -> Result<PowerLogTerm> {
    let one = Complex64::new(1.0, 0.0);
    let v = mellin_value(f, one, INNER_TOL)?;
    let (f1, e1) = (v.value.re, v.error);
    let coeffs: Vec<f64>;
    let mut error = e1;
    match (k, quotient) {
        (1, false) => coeffs = vec![f1],
        (1, true) => coeffs = vec![6.0 / (PI * PI) * f1],
        (2, _) => {
            let d = mellin_derivative(f, one, INNER_TOL)?;
            error += d.error;
            let constant = if quotient {
                // 2γ − 2ζ′(2)/ζ(2) = 24 ln A − ln 4π²
                24.0 * GLAISHER_A.ln() - (4.0 * PI * PI).ln()
            } else {
                2.0 * EULER_GAMMA
            };
            let scale = if quotient { 6.0 / (PI * PI) } else { 1.0 };
            coeffs = vec![scale * (d.value.re + constant * f1), -scale * f1];
            error *= scale * (1.0 + constant.abs());
        }
        _ => {
            return Err(Error::InvalidArgument(format!("closed-form residue needs k in 1..=2, got {k}")));
        }
    }
    Ok(PowerLogTerm::new(
        one,
        coeffs.into_iter().map(|c| Complex64::new(c, 0.0)).collect(),
        error,
    ))
}

fn numeric_pole_one(expr: ZetaExpr, f: &TestFunction, order: usize, radius: f64) -> Result<PowerLogTerm> {
    let one = Complex64::new(1.0, 0.0);
    let (a, delta) = principal_part(expr, f, one, order, radius)?;
    Ok(PowerLogTerm::from_principal_part(one, &real_parts(&a), delta))
}

fn real_parts(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|c| Complex64::new(c.re, 0.0)).collect()
}

/// The residue at s = 1 subtracted by a case: closed forms for k ≤ 2,
/// contour coefficients otherwise.
pub fn pole_one_term(case: &FormulaCase, f: &TestFunction) -> Result<PowerLogTerm> {
    let k = case.k();
    if k <= 2 {
        closed_pole_one(f, k, case.id().is_quotient())
    } else {
        numeric_pole_one(case.zeta_expr(), f, k as usize, DEFAULT_RADIUS)
    }
}

/// ζ(−j) for j ≥ 0.
pub(crate) fn zeta_at_nonpositive(j: u32) -> f64 {
    if j == 0 {
        -0.5
    } else if j % 2 == 0 {
        0.0
    } else {
        zeta_neg_odd((j + 1) / 2)
    }
}

/// Residue at s = −j of ζ^k(s) f*(s) x^{−s}: ζ^k(−j) f^{(j)}(0)/j! · x^j,
/// or `None` when it vanishes.
pub fn zeta_power_negative_term(k: u32, f: &TestFunction, j: u32) -> Option<PowerLogTerm> {
    let z = zeta_at_nonpositive(j).powi(k as i32);
    let fact: f64 = (1..=j).map(|i| i as f64).product();
    let a = z * f.deriv_at_zero(j) / fact;
    if a == 0.0 {
        return None;
    }
    Some(PowerLogTerm::new(Complex64::new(-(j as f64), 0.0), vec![Complex64::new(a, 0.0)], 0.0))
}

/// Residue at s = −j of the quotient integrand (pole order ≤ 2), from
/// contour coefficients; needs a closed-form f*.
pub fn quotient_negative_term(case: &FormulaCase, f: &TestFunction, j: u32) -> Result<PowerLogTerm> {
    let center = Complex64::new(-(j as f64), 0.0);
    let (a, delta) = principal_part(case.zeta_expr(), f, center, 2, DEFAULT_RADIUS)?;
    Ok(PowerLogTerm::from_principal_part(center, &real_parts(&a), delta))
}

/// Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it), real for real t.
fn hardy_z(t: f64) -> Result<f64> {
    let theta = ln_gamma(Complex64::new(0.25, 0.5 * t))?.im - 0.5 * t * PI.ln();
    Ok((Complex64::new(0.0, theta).exp() * zeta(Complex64::new(0.5, t))?).re)
}

/// Ordinates of the zeros of ζ on the critical line up to a little beyond
/// [`ZERO_HEIGHT`], from sign changes of Z refined by bisection.
fn zero_ordinates() -> Result<&'static [f64]> {
    static ZEROS: OnceLock<Vec<f64>> = OnceLock::new();
    if let Some(z) = ZEROS.get() {
        return Ok(z);
    }
    let mut zeros = Vec::new();
    let mut t = 10.0;
    let mut zt = hardy_z(t)?;
    while t < ZERO_HEIGHT + 10.0 {
        let t2 = t + ZERO_SCAN_STEP;
        let z2 = hardy_z(t2)?;
        if zt == 0.0 || zt.signum() != z2.signum() {
            let (mut a, mut b, mut za) = (t, t2, zt);
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                let zm = hardy_z(mid)?;
                if zm.signum() == za.signum() {
                    a = mid;
                    za = zm;
                } else {
                    b = mid;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        t = t2;
        zt = z2;
    }
    Ok(ZEROS.get_or_init(|| zeros))
}

/// Residues of the quotient integrand at s = ρ/2 for the zeros ρ = 1/2 + iγ
/// with 0 < γ ≤ [`ZERO_HEIGHT`], and their conjugates.
pub fn quotient_zero_terms(case: &FormulaCase, f: &TestFunction) -> Result<Vec<PowerLogTerm>> {
    let gammas = zero_ordinates()?;
    let mut out = Vec::new();
    for (i, &g) in gammas.iter().enumerate() {
        if g > ZERO_HEIGHT {
            break;
        }
        let prev = if i == 0 { 2.0 * g } else { g - gammas[i - 1] };
        let next = gammas.get(i + 1).map_or(prev, |&n| n - g);
        // neighbouring poles sit at half the ordinate gap in the s-plane
        let radius = DEFAULT_RADIUS.min(0.125 * prev.min(next));
        let center = Complex64::new(0.25, 0.5 * g);
        let (a, delta) = principal_part(case.zeta_expr(), f, center, 1, radius)?;
        out.push(PowerLogTerm::new(center, vec![a[0]], delta));
        out.push(PowerLogTerm::new(center.conj(), vec![a[0].conj()], delta));
    }
    Ok(out)
}

/// Closed form against contour route for one residue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueComparison {
    pub family: &'static str,
    pub k: u32,
    /// The pole: 1, or −j for the residues at non-positive integers.
    pub pole: i64,
    pub x: f64,
    pub function: String,
    pub closed_form: Option<f64>,
    pub numeric: f64,
    /// Contour values at radii 0.2 and 0.3.
    pub radius_values: [f64; 2],
    pub difference: Option<f64>,
    pub radius_spread: f64,
    pub pass: bool,
}

/// Agreement required between routes and between radii.
pub const RESIDUE_AGREEMENT: f64 = 1e-8;

/// Compares the closed-form residue of Φ(s) f*(s) x^{−s} with
/// (1/2πi)∮ Φ f* x^{−s} ds. `quotient` selects ζ^k/ζ(2s) over ζ^k.
pub fn compare_residue(f: &TestFunction, k: u32, quotient: bool, pole: i64, x: f64) -> Result<ResidueComparison> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("x must be positive, got {x}")));
    }
    if pole > 1 || (quotient && pole != 1) {
        return Err(Error::InvalidArgument(format!("no residue formula for pole {pole}")));
    }
    if k == 0 || k > 8 || (quotient && k > 4) {
        return Err(Error::InvalidArgument(format!("unsupported k = {k}")));
    }
    let expr = ZetaExpr { power: k as i32, over_zeta_2s: quotient };
    let center = Complex64::new(pole as f64, 0.0);
    let order = if pole == 1 { k as usize } else { 1 };
    let numeric_at = |radius: f64| -> Result<f64> {
        let (a, _) = principal_part(expr, f, center, order, radius)?;
        Ok(PowerLogTerm::from_principal_part(center, &a, 0.0).eval(x).re)
    };
    let numeric = numeric_at(DEFAULT_RADIUS)?;
    let radius_values = [numeric_at(0.2)?, numeric_at(0.3)?];
    let closed_form = match (pole, quotient, k) {
        (1, false, 1 | 2) => Some(polynomial_correction(f, k, x)?.value),
        (1, true, 1 | 2) => Some(quotient_residue(f, k, x)?.value),
        (1, _, _) => None,
        (j, _, _) => Some(zeta_power_negative_term(k, f, (-j) as u32).map_or(0.0, |t| t.eval(x).re)),
    };
    let difference = closed_form.map(|c| (c - numeric).abs());
    let radius_spread = (radius_values[0] - radius_values[1]).abs();
    let scale = numeric.abs().max(1.0);
    let pass = difference.map_or(true, |d| d <= RESIDUE_AGREEMENT * scale) && radius_spread <= RESIDUE_AGREEMENT * scale;
    Ok(ResidueComparison {
        family: if quotient { "quotient" } else { "zeta" },
        k,
        pole,
        x,
        function: f.name().to_string(),
        closed_form,
        numeric,
        radius_values,
        difference,
        radius_spread,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::case::CaseId;

    #[test]
    fn closed_forms_at_exp() {
        let f = TestFunction::exp_decay();
        assert!((polynomial_correction(&f, 1, 2.0).unwrap().value - 0.5).abs() < 1e-15);
        assert!((polynomial_correction(&f, 2, 1.0).unwrap().value - EULER_GAMMA).abs() < 1e-14);
        let e = 1f64.exp();
        let v = polynomial_correction(&f, 2, e).unwrap().value;
        assert!((v - (EULER_GAMMA - 1.0) / e).abs() < 1e-14);
        let q1 = quotient_residue(&f, 1, 1.0).unwrap().value;
        assert!((q1 - 6.0 / (PI * PI)).abs() < 1e-15);
        let q2 = quotient_residue(&f, 2, 1.0).unwrap().value;
        let expected = 6.0 / (PI * PI) * (-EULER_GAMMA + (GLAISHER_A.powi(24) / (4.0 * PI * PI)).ln());
        assert!((q2 - expected).abs() < 1e-13);
    }

    #[test]
    fn routes_agree() {
        let f = TestFunction::exp_decay();
        for x in [0.5, 1.0, 2.0] {
            for (k, q) in [(1, false), (2, false), (1, true), (2, true)] {
                let c = compare_residue(&f, k, q, 1, x).unwrap();
                assert!(c.pass, "{c:?}");
            }
            for q in [false, true] {
                for k in [3, 4] {
                    let c = compare_residue(&f, k, q, 1, x).unwrap();
                    assert!(c.radius_spread < 1e-8, "{c:?}");
                }
            }
            let c = compare_residue(&f, 1, false, 0, x).unwrap();
            assert!(c.pass && (c.numeric + 0.5).abs() < 1e-12, "{c:?}");
            let c = compare_residue(&f, 2, false, -1, x).unwrap();
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn first_zeros() {
        let z = zero_ordinates().unwrap();
        assert!((z[0] - 14.134725141734693).abs() < 1e-9);
        assert!((z[1] - 21.022039638771555).abs() < 1e-9);
        assert_eq!(z.iter().filter(|&&g| g <= 100.0).count(), 29);
    }

    #[test]
    fn zero_residue_matches_derivative_formula() {
        // res_{ρ/2} ζ(s)Γ(s)/ζ(2s) = ζ(ρ/2)Γ(ρ/2)/(2ζ′(ρ))
        let case = FormulaCase::new(CaseId::QuotK(1)).unwrap();
        let f = TestFunction::exp_decay();
        let terms = quotient_zero_terms(&case, &f).unwrap();
        let rho = Complex64::new(0.5, zero_ordinates().unwrap()[0]);
        let h = 1e-5;
        let dz = (zeta(rho + h).unwrap() - zeta(rho - h).unwrap()) / (2.0 * h);
        let w = rho / 2.0;
        let expected = zeta(w).unwrap() * crate::specfun::gamma(w).unwrap() / (2.0 * dz);
        assert!((terms[0].coeffs[0] - expected).norm() < 1e-9 * expected.norm(), "{:?} {expected}", terms[0]);
    }
}
