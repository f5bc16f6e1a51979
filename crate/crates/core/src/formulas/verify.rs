use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::case::{CaseId, FormulaCase};
use super::residues::{
    h_values, pole_one_term, quotient_negative_term, quotient_zero_terms, zeta_power_negative_term,
};
use super::series::SeriesEvaluator;
use super::terms::PowerLogTerm;
use crate::arith::{closed_form, ArithmeticTable, SeriesId};
use crate::contour::{circle_mean_batched, DEFAULT_RADIUS};
use crate::error::{Error, Result};
use crate::mellin::{mellin_values, Approx, Profile, TestFunction, MAX_DERIVATIVE};
use crate::quad::integrate_vec;

/// Candidate split points between the endpoint expansion and quadrature,
/// tried from the largest down.
const X_LO_LADDER: [f64; 13] = [1.0, 0.5, 0.25, 0.1, 0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4];
/// Depth of the quotient expansion at s = 0, −1, −2, ….
const QUOTIENT_DEPTH: u32 = 10;
/// Terms of the expansion at infinity used beyond [`UPPER_X`].
const UPPER_TERMS: u32 = 60;
/// Upper cut when the series has a convergent expansion at infinity.
const UPPER_X: f64 = 8.0;
/// Tolerance of f* values on the left-hand side.
const LHS_TOL: f64 = 1e-13;
/// Shares of the relative tolerance given to each approximation.
const ENDPOINT_SHARE: f64 = 0.05;
const QUADRATURE_SHARE: f64 = 0.05;
const SERIES_SHARE: f64 = 0.05;
const TRUNCATION_SHARE: f64 = 0.01;
/// Smallest series tolerance requested from a pointwise bracket evaluation.
const SERIES_TOL_FLOOR: f64 = 1e-17;

/// Tuning of [`Verifier::verify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub max_subdivisions: usize,
    /// Largest upper cut of the outer integral.
    pub x_hi_cap: f64,
    /// Replace Σ e^{−nx} by 1/(e^x − 1) (used by the Γ·ζ presets).
    pub closed_form_series: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { max_subdivisions: 6000, x_hi_cap: 1e6, closed_form_series: false }
    }
}

/// Error estimates of one right-hand side, by source.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ErrorBudget {
    /// Omitted terms of Σ φ(n) f(nx) inside the outer integral.
    pub series_tail: f64,
    /// Quadrature error of f* on the left-hand side.
    pub inner_quadrature: f64,
    /// Adaptive quadrature error of the outer integral.
    pub outer_quadrature: f64,
    /// Uncertainty of residue coefficients (closed forms with numeric f*,
    /// or contour Laurent coefficients).
    pub residue: f64,
    /// Remainder of the small-x expansion of the bracket.
    pub endpoint: f64,
    /// Series part of the integral beyond the upper cut.
    pub truncation: f64,
}

impl ErrorBudget {
    pub fn total(&self) -> f64 {
        self.series_tail + self.inner_quadrature + self.outer_quadrature + self.residue + self.endpoint + self.truncation
    }

    fn max(self, o: Self) -> Self {
        Self {
            series_tail: self.series_tail.max(o.series_tail),
            inner_quadrature: self.inner_quadrature.max(o.inner_quadrature),
            outer_quadrature: self.outer_quadrature.max(o.outer_quadrature),
            residue: self.residue.max(o.residue),
            endpoint: self.endpoint.max(o.endpoint),
            truncation: self.truncation.max(o.truncation),
        }
    }
}

/// Both sides of an identity at one sample point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub s: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    /// abs_err / scale.
    pub rel_err: f64,
    /// |lhs|, or 1 where the left side vanishes identically (a zero of
    /// ζ^k of order k ≥ 2 against a simple pole of f*), so that the error
    /// there is absolute.
    pub scale: f64,
    pub budget: ErrorBudget,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of checking one identity for one function at several points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub case: CaseId,
    pub function: String,
    pub tol: f64,
    /// Below x_lo the bracket is replaced by its residue expansion.
    pub x_lo: f64,
    /// Beyond x_hi only the residue corrections are integrated.
    pub x_hi: f64,
    pub expansion_terms: usize,
    pub points: Vec<PointReport>,
    /// Componentwise maximum over the points.
    pub budget: ErrorBudget,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The worst relative error over the points.
    pub fn max_rel_err(&self) -> f64 {
        self.points.iter().map(|p| p.rel_err).fold(0.0, f64::max)
    }
}

/// Runs identities against a shared arithmetic table.
#[derive(Debug, Clone)]
pub struct Verifier {
    table: Arc<ArithmeticTable>,
    options: VerifyOptions,
}

struct Prepared {
    series: SeriesEvaluator,
    corrections: Vec<PowerLogTerm>,
    groups: Vec<Vec<PowerLogTerm>>,
    /// Convergent expansion of the series for x > 1, when f has one.
    upper: Vec<PowerLogTerm>,
}

struct Split {
    x_lo: f64,
    included: usize,
    /// Absolute error of the expansion near x_lo (pointwise).
    error: f64,
}

impl Prepared {
    fn correction_sum(&self, x: f64) -> f64 {
        self.corrections.iter().map(|t| t.eval(x).re).sum()
    }

    fn bracket(&self, x: f64, tol: f64) -> Result<(f64, f64)> {
        let v = self.series.eval(x, tol)?;
        Ok((v.value - self.correction_sum(x), v.tail))
    }

    fn expansion(&self, x: f64, groups: usize) -> f64 {
        self.groups[..groups]
            .iter()
            .flat_map(|g| g.iter())
            .map(|t| t.eval(x).re)
            .sum()
    }

    fn group_magnitude(&self, g: usize, x: f64) -> f64 {
        self.groups[g].iter().map(|t| t.magnitude(x)).sum()
    }

    /// Groups to keep at x (stopping at the smallest term of a divergent
    /// expansion) and the size of the first omitted group.
    fn truncation(&self, x: f64) -> (usize, f64) {
        let n = self.groups.len();
        if n == 0 {
            return (0, 0.0);
        }
        let mags: Vec<f64> = (0..n).map(|g| self.group_magnitude(g, x)).collect();
        let g_min = (0..n).fold(0, |best, g| if mags[g] < mags[best] { g } else { best });
        if g_min == n - 1 {
            (n, 0.0)
        } else {
            (g_min, mags[g_min])
        }
    }
}

/// For x > 1 every nx exceeds 1 and
/// Σ φ(n) (1 + nx)^{−m} = Σ_r C(−m, r) D(m + r) x^{−m−r},
/// D the Dirichlet series of φ: the residues of Φ f* x^{−s} at the poles
/// s = m, m+1, … of f*, with signs reversed.
fn upper_expansion(id: SeriesId, m: u32) -> Result<Vec<PowerLogTerm>> {
    let mut binom = 1.0;
    (0..UPPER_TERMS)
        .map(|r| {
            if r > 0 {
                binom *= -((m + r - 1) as f64) / r as f64;
            }
            let w = (m + r) as f64;
            let d = closed_form(id, Complex64::new(w, 0.0))?.re;
            Ok(PowerLogTerm::new(Complex64::new(w, 0.0), vec![Complex64::new(binom * d, 0.0)], 0.0))
        })
        .collect()
}

/// ∫_{x_lo}^{x_hi} x^{σ−1} dx.
fn power_measure(sigma: f64, x_lo: f64, x_hi: f64) -> f64 {
    if sigma.abs() < 1e-12 {
        (x_hi / x_lo).ln()
    } else {
        ((x_hi.powf(sigma) - x_lo.powf(sigma)) / sigma).abs()
    }
}

/// Series tolerance inside the outer integral over [x_lo, x_hi].
fn series_tolerance(samples: &[Complex64], targets: &[f64], x_lo: f64, x_hi: f64) -> f64 {
    samples
        .iter()
        .zip(targets)
        .map(|(s, t)| SERIES_SHARE * t / power_measure(s.re, x_lo, x_hi))
        .fold(f64::INFINITY, f64::min)
        .max(SERIES_TOL_FLOOR)
}

impl Verifier {
    pub fn new(table: Arc<ArithmeticTable>) -> Self {
        Self { table, options: VerifyOptions::default() }
    }

    pub fn with_options(mut self, options: VerifyOptions) -> Self {
        self.options = options;
        self
    }

    pub fn table(&self) -> &Arc<ArithmeticTable> {
        &self.table
    }

    pub fn options(&self) -> VerifyOptions {
        self.options
    }

    fn prepare(&self, case: &FormulaCase, f: &TestFunction) -> Result<Prepared> {
        let series = SeriesEvaluator::new(&self.table, f, case.series())?
            .with_closed_form(self.options.closed_form_series);
        let mut corrections = vec![pole_one_term(case, f)?];
        for &j in case.crossed_poles().iter().filter(|&&j| j <= 0) {
            corrections.extend(zeta_power_negative_term(case.k(), f, (-j) as u32));
        }
        let mut groups = Vec::new();
        if case.id().is_quotient() {
            if !f.has_exact_transform() {
                return Err(Error::InvalidArgument(format!(
                    "the quotient expansion needs a closed-form transform, {} has none",
                    f.name()
                )));
            }
            groups.push(quotient_zero_terms(case, f)?);
            for j in 0..=QUOTIENT_DEPTH {
                groups.push(vec![quotient_negative_term(case, f, j)?]);
            }
        } else {
            let first = (-case.strip().lo()).round() as u32;
            for j in first..=MAX_DERIVATIVE {
                if let Some(t) = zeta_power_negative_term(case.k(), f, j) {
                    groups.push(vec![t]);
                }
            }
        }
        let upper = match f.profile() {
            Profile::PowerLaw { m } => upper_expansion(case.series(), m)?,
            _ => Vec::new(),
        };
        Ok(Prepared { series, corrections, groups, upper })
    }

    /// The bracketed function whose Mellin transform the identity asserts:
    /// Σ φ(n) f(nx) minus the residues crossed on the way into the strip.
    pub fn bracket(&self, case: &FormulaCase, f: &TestFunction, x: f64) -> Result<f64> {
        case.check_class(f)?;
        let p = self.prepare(case, f)?;
        Ok(p.bracket(x, SERIES_TOL_FLOOR.max(1e-16 / x))?.0)
    }

    fn lhs(&self, case: &FormulaCase, f: &TestFunction, samples: &[Complex64]) -> Result<Vec<(Approx, f64)>> {
        let removable = |s: &Complex64| s.im == 0.0 && s.re <= 0.0 && (s.re - s.re.round()).abs() < 1e-9;
        let regular: Vec<Complex64> = samples.iter().copied().filter(|s| !removable(s)).collect();
        let mut fs = mellin_values(f, &regular, LHS_TOL)?.into_iter();
        let mut out = Vec::with_capacity(samples.len());
        for s in samples {
            let n = s.re.round();
            if removable(s) && case.k() >= 2 && !case.id().is_quotient() && n < 0.0 && n % 2.0 == 0.0 {
                out.push((Approx::exact(Complex64::new(0.0, 0.0)), 1.0));
            } else if removable(s) {
                // Φ vanishes where f* has a pole; the product is the mean of
                // its values on a small circle.
                let expr = case.zeta_expr();
                let m = circle_mean_batched(
                    |pts| h_values(expr, f, pts),
                    Complex64::new(s.re.round(), 0.0),
                    DEFAULT_RADIUS,
                    1e-14,
                )?;
                out.push((Approx { value: m.value, error: m.delta }, m.value.norm()));
            } else {
                let fv = fs.next().expect("one value per regular point");
                let phi = case.phi(*s)?;
                let value = phi * fv.value;
                out.push((Approx { value, error: phi.norm() * fv.error }, value.norm()));
            }
        }
        Ok(out)
    }

    /// Picks x_lo: the largest ladder value where the truncated expansion
    /// agrees with the directly evaluated bracket and its remainder is
    /// within the endpoint share of the tolerance at every point.
    fn choose_split(&self, p: &Prepared, samples: &[Complex64], targets: &[f64], lo: f64, x_hi: f64) -> Result<Split> {
        let mut best: Option<(f64, Split)> = None;
        for &x in X_LO_LADDER.iter().filter(|&&x| x < x_hi) {
            // the outer integral must be able to evaluate the series here
            match p.bracket(x, series_tolerance(samples, targets, x, x_hi)) {
                Err(Error::SlowConvergence { .. }) => break,
                Err(e) => return Err(e),
                Ok(_) => {}
            }
            let (included, omitted) = p.truncation(x);
            // pointwise error that would use up the endpoint share
            let allowed = samples
                .iter()
                .zip(targets)
                .map(|(s, t)| ENDPOINT_SHARE * t * (s.re - lo) / x.powf(s.re))
                .fold(f64::INFINITY, f64::min);
            let probe_tol = (0.1 * allowed).max(SERIES_TOL_FLOOR);
            let mut diff: f64 = 0.0;
            let mut failed = false;
            for probe in [x, 0.6 * x] {
                match p.bracket(probe, probe_tol) {
                    Ok((b, tail)) => {
                        let e = p.expansion(probe, included);
                        let noise = 1e-15 * p.correction_sum(probe).abs();
                        diff = diff.max((b - e).abs() + tail + noise);
                    }
                    Err(Error::SlowConvergence { .. }) => {
                        failed = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if failed {
                break;
            }
            let error = omitted.max(diff);
            let ratio = samples
                .iter()
                .zip(targets)
                .map(|(s, t)| error * x.powf(s.re) / (s.re - lo) / (ENDPOINT_SHARE * t))
                .fold(0.0, f64::max);
            let split = Split { x_lo: x, included, error };
            if ratio <= 1.0 {
                return Ok(split);
            }
            if best.as_ref().map_or(true, |(r, _)| ratio < *r) {
                best = Some((ratio, split));
            }
        }
        best.map(|(_, s)| s).ok_or_else(|| Error::SlowConvergence { x: X_LO_LADDER[0], limit: self.table.limit() })
    }

    /// Upper cut X with Σ_n |φ(n)| ∫_X^∞ |f(nx)| x^{σ−1} dx below the
    /// truncation share at every point; returns X and the bounds.
    fn choose_upper(&self, f: &TestFunction, p: &Prepared, samples: &[Complex64], targets: &[f64]) -> Result<(f64, Vec<f64>)> {
        if let Some(last) = p.upper.last() {
            // the first omitted term bounds the rest (ratio below 1/2)
            let next = 2.0 * last.coeffs[0].norm();
            let bounds = samples
                .iter()
                .map(|s| 2.0 * next * UPPER_X.powf(s.re - last.pole.re - 1.0) / (last.pole.re + 1.0 - s.re))
                .collect();
            return Ok((UPPER_X, bounds));
        }
        let coeffs = self.table.coefficients(p.series_id())?;
        let bound = |x_hi: f64, sigma: f64| -> f64 {
            let mut total = 0.0;
            for n in 1..coeffs.len().min(100_000) {
                let c = coeffs[n].abs();
                if c == 0.0 {
                    continue;
                }
                let nf = n as f64;
                let term = c * nf.powf(-sigma) * f.tail_moment_bound(sigma - 1.0, nf * x_hi);
                total += term;
                if term < 1e-30 * total.max(1e-300) || term == 0.0 {
                    break;
                }
            }
            total
        };
        let mut x_hi = match f.support_end() {
            Some(end) => (2.0 * X_LO_LADDER[0]).max(end),
            None => 8.0,
        };
        loop {
            let bounds: Vec<f64> = samples.iter().map(|s| bound(x_hi, s.re)).collect();
            if bounds.iter().zip(targets).all(|(b, t)| *b <= TRUNCATION_SHARE * t) {
                return Ok((x_hi, bounds));
            }
            x_hi *= 2.0;
            if x_hi > self.options.x_hi_cap {
                return Err(Error::Truncation {
                    reason: format!("series part beyond x = {} still exceeds its share", self.options.x_hi_cap),
                });
            }
        }
    }

    /// Checks Φ(s) f*(s) = ∫₀^∞ bracket(x) x^{s−1} dx at each sample.
    ///
    /// The right side is split at x_lo and x_hi: below x_lo the bracket is
    /// replaced by the residues of Φ f* x^{−s} left of the strip and
    /// integrated exactly; on [x_lo, x_hi] it is integrated in v = ln x by
    /// vector Gauss–Kronrod; beyond x_hi the corrections are integrated
    /// exactly and the series part is bounded.
    pub fn verify(&self, case: &FormulaCase, f: &TestFunction, samples: &[Complex64], tol: f64) -> Result<VerificationReport> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidArgument("no sample points".into()));
        }
        case.check_class(f)?;
        for &s in samples {
            case.check_point(s)?;
        }
        let (lhs, scales): (Vec<Approx>, Vec<f64>) = self.lhs(case, f, samples)?.into_iter().unzip();
        let targets: Vec<f64> = scales.iter().map(|m| tol * m.max(1e-300)).collect();
        let p = self.prepare(case, f)?;
        let lo = case.strip().lo();
        let (x_hi, trunc_bounds) = self.choose_upper(f, &p, samples, &targets)?;
        let split = self.choose_split(&p, samples, &targets, lo, x_hi)?;
        let x_lo = split.x_lo;
        let measure = |sigma: f64| power_measure(sigma, x_lo, x_hi);
        let tau = series_tolerance(samples, &targets, x_lo, x_hi);

        let (a, b) = (x_lo.ln(), x_hi.ln());
        let panels = ((b - a).ceil() as usize).max(1);
        let breaks: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
        let abs_tols: Vec<f64> = targets.iter().map(|t| QUADRATURE_SHARE * t).collect();
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let max_tail = RefCell::new(0.0f64);
        let out = integrate_vec(
            |v, slots: &mut [Complex64]| {
                let x = v.exp();
                match p.bracket(x, tau) {
                    Ok((bx, tail)) => {
                        let mut mt = max_tail.borrow_mut();
                        *mt = mt.max(tail);
                        for (slot, s) in slots.iter_mut().zip(samples) {
                            *slot = (s * v).exp() * bx;
                        }
                    }
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        slots.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                    }
                }
            },
            samples.len(),
            &breaks,
            &abs_tols,
            0.0,
            self.options.max_subdivisions,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let max_tail = max_tail.into_inner();

        let included: Vec<&PowerLogTerm> = p.groups[..split.included].iter().flatten().collect();
        let mut points = Vec::with_capacity(samples.len());
        let mut budget = ErrorBudget::default();
        for (i, &s) in samples.iter().enumerate() {
            let mut rhs = out.values[i];
            let mut residue_err = 0.0;
            for t in &included {
                rhs += t.integral_below(s, x_lo)?;
                residue_err += t.integral_error(s.re, x_lo);
            }
            for t in &p.upper {
                rhs += t.integral_above(s, x_hi)?;
            }
            for c in &p.corrections {
                rhs -= c.integral_above(s, x_hi)?;
                residue_err += c.integral_error(s.re, x_hi);
                let inside = c.error_at(x_lo) * x_lo.powf(s.re) + c.error_at(x_hi) * x_hi.powf(s.re);
                residue_err += inside * (b - a);
            }
            let pb = ErrorBudget {
                series_tail: max_tail * measure(s.re),
                inner_quadrature: lhs[i].error,
                outer_quadrature: out.errors[i],
                residue: residue_err,
                endpoint: split.error * x_lo.powf(s.re) / (s.re - lo),
                truncation: trunc_bounds[i],
            };
            budget = budget.max(pb);
            let abs_err = (lhs[i].value - rhs).norm();
            let rel_err = abs_err / scales[i];
            points.push(PointReport {
                s,
                lhs: lhs[i].value,
                rhs,
                abs_err,
                rel_err,
                scale: scales[i],
                budget: pb,
                pass: rel_err <= tol,
            });
        }
        let verdict = if points.iter().all(|p| p.pass) { Verdict::Pass } else { Verdict::Fail };
        Ok(VerificationReport {
            case: case.id(),
            function: f.name().to_string(),
            tol,
            x_lo,
            x_hi,
            expansion_terms: included.len(),
            points,
            budget,
            verdict,
        })
    }
}

impl Prepared {
    fn series_id(&self) -> SeriesId {
        self.series.id()
    }
}
