use num_complex::Complex64;

use super::case::FormulaCase;
use super::line::LINE_SIGMA;
use super::residues::{pole_one_term, zeta_power_negative_term};
use crate::arith::eval_zeta_expr;
use crate::contour::{shift_line, DecayModel, LineIntegralSpec, PoleTerm, ShiftReport};
use crate::error::{Error, Result};
use crate::mellin::{decay_bound_constant_of_order, mellin_value, TestFunction};
use crate::specfun::zeta_real;

const TRANSFORM_TOL: f64 = 1e-13;

/// Moves the line of (1/2πi) ∫ Φ(s) f*(s) x^{−s} ds from Re s = 2 to
/// Re s = `sigma` inside the case's strip and checks that the change equals
/// the residues crossed on the way.
///
/// On both lines |f*| ≤ C(σ)/|t|^k with k the declared smoothness, |ζ^k| is
/// covered by the calibrated envelope, and 1/|ζ(2s)| ≤ ζ(2σ).
pub fn pole_shift(case: &FormulaCase, f: &TestFunction, sigma: f64, x: f64, tol: f64, t_max: f64) -> Result<ShiftReport> {
    case.check_point(Complex64::new(sigma, 0.0))?;
    case.check_class(f)?;
    let k = case.k();
    let quotient = case.id().is_quotient();
    let model = |s: f64| -> Result<DecayModel> {
        let mut c = decay_bound_constant_of_order(f, s, f.k_max())?;
        if quotient {
            c *= zeta_real(2.0 * s)?;
        }
        Ok(DecayModel { k: f.k_max(), c, zeta_power: k })
    };
    let left = LineIntegralSpec::new(sigma, x, 0.25 * tol, model(sigma)?).with_conjugate_symmetry(true).with_t_max(t_max);
    let right = LineIntegralSpec::new(LINE_SIGMA, x, 0.25 * tol, model(LINE_SIGMA)?)
        .with_conjugate_symmetry(true)
        .with_t_max(t_max);
    let mut poles = Vec::new();
    for p in case.crossed_poles() {
        let term = if p == 1 {
            pole_one_term(case, f)?
        } else if quotient {
            return Err(Error::InvalidArgument(format!("{} does not cross s = {p}", case.id())));
        } else {
            match zeta_power_negative_term(k, f, (-p) as u32) {
                Some(t) => t,
                None => continue,
            }
        };
        poles.push(PoleTerm { location: term.pole, residue: term.eval(x), error: term.error_at(x) });
    }
    let expr = case.zeta_expr();
    shift_line(
        |s| {
            let phi = eval_zeta_expr(expr, s).unwrap_or(Complex64::new(f64::NAN, 0.0));
            let fs = mellin_value(f, s, TRANSFORM_TOL).map(|a| a.value).unwrap_or(Complex64::new(f64::NAN, 0.0));
            phi * fs
        },
        &left,
        &right,
        &poles,
    )
}
