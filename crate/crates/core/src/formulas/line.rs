use num_complex::Complex64;
use serde::Serialize;

use super::series::series_side;
use crate::arith::{closed_form, ArithmeticTable, SeriesId};
use crate::contour::{vertical_line_integral, DecayModel, LineIntegralSpec};
use crate::error::Result;
use crate::mellin::{decay_bound_constant, mellin_value, TestFunction};

/// Default cap on the truncation height.
pub const DEFAULT_T_MAX: f64 = 1e4;
/// Abscissa of the line where every stream's Dirichlet series converges.
pub const LINE_SIGMA: f64 = 2.0;
const SERIES_TOL: f64 = 1e-16;
const TRANSFORM_TOL: f64 = 1e-13;

/// Σ φ(n) f(nx) against (1/2πi) ∫_{(σ)} D(s) f*(s) x^{−s} ds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineIdentityReport {
    pub series: SeriesId,
    pub function: String,
    pub sigma: f64,
    pub x: f64,
    pub series_value: f64,
    pub line_value: f64,
    pub height: f64,
    /// Tail plus quadrature estimate of the line integral.
    pub line_error: f64,
    pub rel_err: f64,
    pub pass: bool,
}

/// Checks the Dirichlet-series form of the Mellin inversion at one x.
///
/// On Re s = σ > 1, |D(s)| ≤ Σ |φ(n)| n^{−σ}, which is the generating
/// function of |φ| at σ; with |f*(σ+it)| ≤ C(σ)/|t|^k that gives the decay
/// model bounding the truncated tail.
pub fn line_identity(
    table: &ArithmeticTable,
    id: SeriesId,
    f: &TestFunction,
    x: f64,
    tol: f64,
    t_max: f64,
) -> Result<LineIdentityReport> {
    let sigma = LINE_SIGMA;
    let abs_id = if id == SeriesId::Mu { SeriesId::AbsMu } else { id };
    let d_bound = closed_form(abs_id, Complex64::new(sigma, 0.0))?.re;
    let decay = DecayModel {
        k: f.k_max(),
        c: decay_bound_constant(f, sigma)? * d_bound,
        zeta_power: 0,
    };
    let series = series_side(table, f, id, x, SERIES_TOL)?;
    let target = tol * series.value.abs();
    let spec = LineIntegralSpec::new(sigma, x, 0.1 * target, decay).with_conjugate_symmetry(true).with_t_max(t_max);
    spec.validate()?;
    let line = vertical_line_integral(
        |s| {
            let d = closed_form(id, s).unwrap_or(Complex64::new(f64::NAN, 0.0));
            let fs = mellin_value(f, s, TRANSFORM_TOL).map(|a| a.value).unwrap_or(Complex64::new(f64::NAN, 0.0));
            d * fs
        },
        &spec,
    )?;
    let rel_err = (line.value.re - series.value).abs() / series.value.abs();
    Ok(LineIdentityReport {
        series: id,
        function: f.name().to_string(),
        sigma,
        x,
        series_value: series.value,
        line_value: line.value.re,
        height: line.height,
        line_error: line.error(),
        rel_err,
        pass: rel_err <= tol && rel_err.is_finite(),
    })
}
