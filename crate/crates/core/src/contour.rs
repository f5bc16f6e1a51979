//! Integrals along vertical lines, line shifts with residue accounting, and
//! residues or Laurent coefficients from circular contours.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::integrate_vec;
use crate::specfun::{branch_exponents, ZetaGrowthEnvelope};

/// Bound |F(σ+it)| ≤ C · envelope(σ, t)^zeta_power / |t|^k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayModel {
    pub k: u32,
    pub c: f64,
    pub zeta_power: u32,
}

/// Parameters of a truncated vertical-line integral
/// (1/2πi) ∫_{σ−iT}^{σ+iT} F(s) x^{−s} ds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegralSpec {
    pub sigma: f64,
    pub x: f64,
    pub tol: f64,
    pub t_max: f64,
    pub decay: DecayModel,
    /// Opt-in: F(conj s) = conj F(s), so only t ≥ 0 is integrated.
    pub conjugate_symmetric: bool,
    pub envelope: ZetaGrowthEnvelope,
}

impl LineIntegralSpec {
    pub fn new(sigma: f64, x: f64, tol: f64, decay: DecayModel) -> Self {
        Self {
            sigma,
            x,
            tol,
            t_max: 1e4,
            decay,
            conjugate_symmetric: false,
            envelope: *ZetaGrowthEnvelope::calibrated(),
        }
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_conjugate_symmetry(mut self, on: bool) -> Self {
        self.conjugate_symmetric = on;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if !(self.t_max >= 10.0) {
            return Err(Error::InvalidArgument(format!("t_max must be at least 10, got {}", self.t_max)));
        }
        if self.decay.k < 2 {
            return Err(Error::Truncation {
                reason: format!("decay order k = {} < 2 is not absolutely integrable", self.decay.k),
            });
        }
        if !(self.x > 0.0) {
            return Err(Error::InvalidArgument(format!("x must be positive, got {}", self.x)));
        }
        Ok(())
    }

    /// Analytic bound on the part of the line integral beyond height T.
    pub fn tail_bound(&self, t: f64) -> f64 {
        let DecayModel { k, c, zeta_power } = self.decay;
        let b = branch_exponents(self.sigma);
        let p = zeta_power as f64;
        let a = k as f64 - p * b.t_power;
        if a <= 1.0 {
            return f64::INFINITY;
        }
        let log_power = zeta_power * b.log_power;
        let scale = c * self.envelope.m().powf(p) * self.x.powf(-self.sigma) / PI;
        // ∫_T^∞ (ln t)^P t^{−a} dt = P! T^{1−a} Σ_{r≤P} y^r/r! / (a−1)^{P+1}, y = (a−1) ln T
        let y = (a - 1.0) * t.ln();
        let mut sum = 0.0;
        let mut term = 1.0;
        for r in 0..=log_power {
            if r > 0 {
                term *= y / r as f64;
            }
            sum += term;
        }
        let fact: f64 = (1..=log_power).map(|r| r as f64).product();
        scale * fact * t.powf(1.0 - a) * sum / (a - 1.0).powi(log_power as i32 + 1)
    }

    /// Smallest height whose tail bound is below tol/2.
    pub fn truncation_height(&self) -> Result<f64> {
        self.validate()?;
        let floor = 10f64.max(self.envelope.t0()).max(std::f64::consts::E);
        let target = 0.5 * self.tol;
        if self.tail_bound(floor) <= target {
            return Ok(floor);
        }
        let cap_tail = self.tail_bound(self.t_max);
        if !(cap_tail <= target) {
            return Err(Error::CapExceeded { cap: self.t_max, tail: cap_tail });
        }
        let (mut lo, mut hi) = (floor.ln(), self.t_max.ln());
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.tail_bound(mid.exp()) <= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi.exp())
    }
}

/// A truncated line integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineIntegral {
    pub value: Complex64,
    /// Bound (or estimate, for the adaptive variant) of the omitted tails.
    pub tail_estimate: f64,
    pub quadrature_error: f64,
    pub height: f64,
}

impl LineIntegral {
    pub fn error(&self) -> f64 {
        self.tail_estimate + self.quadrature_error
    }
}

const PANEL_HEIGHT: f64 = 2.0;

fn panels(lo: f64, hi: f64) -> Vec<f64> {
    let n = ((hi - lo) / PANEL_HEIGHT).ceil().max(1.0) as usize;
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

fn integrate_segment<F: Fn(Complex64) -> Complex64>(
    big_f: &F,
    sigma: f64,
    x: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (Complex64, f64, bool) {
    let ln_x = x.ln();
    let out = integrate_vec(
        |t, v: &mut [Complex64]| {
            let s = Complex64::new(sigma, t);
            v[0] = big_f(s) * (-s * ln_x).exp() / (2.0 * PI);
        },
        1,
        &panels(lo, hi),
        &[tol],
        1e-14,
        20_000,
    );
    (out.values[0], out.errors[0], out.converged)
}

/// (1/2πi) ∫ F(s) x^{−s} ds along Re s = σ, truncated at the height where
/// the decay model's tail bound falls below tol/2.
pub fn vertical_line_integral<F: Fn(Complex64) -> Complex64>(big_f: F, spec: &LineIntegralSpec) -> Result<LineIntegral> {
    let height = spec.truncation_height()?;
    let tail = spec.tail_bound(height);
    let qtol = 0.5 * spec.tol;
    let (value, err, ok) = if spec.conjugate_symmetric {
        let (v, e, ok) = integrate_segment(&big_f, spec.sigma, spec.x, 0.0, height, 0.5 * qtol);
        (Complex64::new(2.0 * v.re, 0.0), 2.0 * e, ok)
    } else {
        integrate_segment(&big_f, spec.sigma, spec.x, -height, height, qtol)
    };
    if !ok && err > qtol {
        return Err(Error::QuadratureNonConvergence { achieved: err, requested: qtol });
    }
    Ok(LineIntegral { value, tail_estimate: tail, quadrature_error: err, height })
}

/// Line integral without a decay model: the height doubles from 16 until
/// the added outer segments change the value by less than tol/4.
pub fn vertical_line_integral_adaptive<F: Fn(Complex64) -> Complex64>(
    big_f: F,
    sigma: f64,
    x: f64,
    tol: f64,
    t_cap: f64,
) -> Result<LineIntegral> {
    let mut height = 16.0f64.min(t_cap);
    let qtol = 0.25 * tol;
    let (mut value, mut err, ok) = integrate_segment(&big_f, sigma, x, -height, height, qtol);
    if !ok && err > qtol {
        return Err(Error::QuadratureNonConvergence { achieved: err, requested: qtol });
    }
    loop {
        let next = 2.0 * height;
        if next > t_cap {
            return Err(Error::CapExceeded { cap: t_cap, tail: f64::NAN });
        }
        let (upper, e1, _) = integrate_segment(&big_f, sigma, x, height, next, 0.25 * qtol);
        let (lower, e2, _) = integrate_segment(&big_f, sigma, x, -next, -height, 0.25 * qtol);
        let increment = upper + lower;
        value += increment;
        err += e1 + e2;
        height = next;
        if increment.norm() < 0.25 * tol {
            return Ok(LineIntegral { value, tail_estimate: increment.norm(), quadrature_error: err, height });
        }
    }
}

/// A pole crossed when moving a line: its location and the residue of
/// F(s)x^{−s} there, with the uncertainty of that residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleTerm {
    pub location: Complex64,
    pub residue: Complex64,
    pub error: f64,
}

/// Outcome of checking I(b) − I(a) = Σ residues between the lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftReport {
    pub left: LineIntegral,
    pub right: LineIntegral,
    pub residue_sum: Complex64,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// max |F(u ± iH) x^{−u}| over a ≤ u ≤ b for H = 10², 10³.
    pub horizontal_maxima: [f64; 2],
    /// False when the horizontal-segment magnitudes do not decrease.
    pub horizontal_decay: bool,
}

/// Verifies (1/2πi)[∫_(b) − ∫_(a)] F(s)x^{−s} ds = Σ res for the listed poles.
pub fn shift_line<F: Fn(Complex64) -> Complex64>(
    big_f: F,
    left: &LineIntegralSpec,
    right: &LineIntegralSpec,
    poles: &[PoleTerm],
) -> Result<ShiftReport> {
    let (a, b) = (left.sigma, right.sigma);
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("shift needs a < b, got a = {a}, b = {b}")));
    }
    if left.x != right.x {
        return Err(Error::InvalidArgument("both lines must use the same x".into()));
    }
    if let Some(p) = poles.iter().find(|p| !(p.location.re > a && p.location.re < b)) {
        return Err(Error::InvalidArgument(format!("pole {} not strictly between the lines", p.location)));
    }
    let x = left.x;
    let mut maxima = [0.0f64; 2];
    for (slot, h) in maxima.iter_mut().zip([1e2, 1e3]) {
        for i in 0..=8 {
            let u = a + (b - a) * i as f64 / 8.0;
            for sign in [1.0, -1.0] {
                let v = big_f(Complex64::new(u, sign * h)).norm() * x.powf(-u);
                if v.is_finite() {
                    *slot = slot.max(v);
                }
            }
        }
    }
    let horizontal_decay = maxima[1] <= maxima[0];
    let left_int = vertical_line_integral(&big_f, left)?;
    let right_int = vertical_line_integral(&big_f, right)?;
    let residue_sum: Complex64 = poles.iter().map(|p| p.residue).sum();
    let gap = (right_int.value - left_int.value - residue_sum).norm();
    let tolerance = left.tol + right.tol + poles.iter().map(|p| p.error).sum::<f64>();
    Ok(ShiftReport {
        left: left_int,
        right: right_int,
        residue_sum,
        gap,
        tolerance,
        pass: gap <= tolerance,
        horizontal_maxima: maxima,
        horizontal_decay,
    })
}

/// Radius used when the caller has no reason to pick another.
pub const DEFAULT_RADIUS: f64 = 0.25;
pub const MIN_CIRCLE_NODES: usize = 64;
pub const MAX_CIRCLE_NODES: usize = 1 << 14;

/// Contour moments (1/2πi) ∮ F(s) (s − c)^j ds, j = 0..count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleMoments {
    pub values: Vec<Complex64>,
    pub nodes: usize,
    /// Largest change between the last two node counts.
    pub delta: f64,
}

/// A residue from a circular contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleResidue {
    pub value: Complex64,
    pub nodes: usize,
    pub delta: f64,
}

/// Trapezoidal rule on |s − c| = r with node doubling (64, 128, …) until
/// successive moment vectors differ by less than `tol`. `big_f` receives a
/// batch of nodes and returns F at each of them.
pub fn circle_moments_batched<F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>>(
    big_f: F,
    center: Complex64,
    radius: f64,
    count: usize,
    tol: f64,
) -> Result<CircleMoments> {
    circle_sums(big_f, center, radius, 0, count, tol)
}

/// (1/2πi) ∮ F(s) (s − c)^p ds for p = first, …, first + count − 1; the
/// trapezoid sum is (1/N) Σ F(node) (node − c)^{p+1}.
fn circle_sums<F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>>(
    mut big_f: F,
    center: Complex64,
    radius: f64,
    first: i32,
    count: usize,
    tol: f64,
) -> Result<CircleMoments> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let mut sums = vec![Complex64::new(0.0, 0.0); count];
    let mut accumulate = |thetas: &[f64], sums: &mut Vec<Complex64>| -> Result<()> {
        let nodes: Vec<Complex64> = thetas.iter().map(|&th| center + Complex64::from_polar(radius, th)).collect();
        let values = big_f(&nodes)?;
        for (&th, v) in thetas.iter().zip(values) {
            for (j, slot) in sums.iter_mut().enumerate() {
                let power = first + j as i32 + 1;
                *slot += v * Complex64::from_polar(1.0, power as f64 * th);
            }
        }
        Ok(())
    };
    let scale = |sums: &[Complex64], n: usize| -> Vec<Complex64> {
        sums.iter()
            .enumerate()
            .map(|(j, s)| s * radius.powi(first + j as i32 + 1) / n as f64)
            .collect()
    };
    let mut n = MIN_CIRCLE_NODES;
    let initial: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
    accumulate(&initial, &mut sums)?;
    let mut current = scale(&sums, n);
    loop {
        let next_n = 2 * n;
        let fresh: Vec<f64> = (0..n).map(|i| 2.0 * PI * (2 * i + 1) as f64 / next_n as f64).collect();
        accumulate(&fresh, &mut sums)?;
        let next = scale(&sums, next_n);
        let delta = next
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        n = next_n;
        current = next;
        if delta < tol {
            return Ok(CircleMoments { values: current, nodes: n, delta });
        }
        if n >= MAX_CIRCLE_NODES {
            return Err(Error::ResidueNonConvergence { nodes: n, delta });
        }
    }
}

/// F(c) as the mean of F over |s − c| = r. Valid at removable points of F,
/// where F(c) itself cannot be evaluated.
pub fn circle_mean_batched<F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>>(
    big_f: F,
    center: Complex64,
    radius: f64,
    tol: f64,
) -> Result<CircleResidue> {
    let m = circle_sums(big_f, center, radius, -1, 1, tol)?;
    Ok(CircleResidue { value: m.values[0], nodes: m.nodes, delta: m.delta })
}

/// Scalar-integrand form of [`circle_moments_batched`].
pub fn circle_moments<F: Fn(Complex64) -> Complex64>(
    big_f: F,
    center: Complex64,
    radius: f64,
    count: usize,
    tol: f64,
) -> Result<CircleMoments> {
    circle_moments_batched(|pts| Ok(pts.iter().map(|&s| big_f(s)).collect()), center, radius, count, tol)
}

/// (1/2πi) ∮_{|s−c|=r} F(s) ds.
pub fn circle_residue<F: Fn(Complex64) -> Complex64>(
    big_f: F,
    center: Complex64,
    radius: f64,
    tol: f64,
) -> Result<CircleResidue> {
    let m = circle_moments(big_f, center, radius, 1, tol)?;
    Ok(CircleResidue { value: m.values[0], nodes: m.nodes, delta: m.delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gamma, zeta, EULER_GAMMA};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gamma_model(sigma: f64) -> DecayModel {
        // |Γ(σ+it)| ≤ Γ(σ+4)/|t|^4
        DecayModel { k: 4, c: gamma(c(sigma + 4.0, 0.0)).unwrap().re, zeta_power: 0 }
    }

    #[test]
    fn inverse_gamma() {
        let spec = LineIntegralSpec::new(2.0, 1.0, 1e-9, gamma_model(2.0));
        let r = vertical_line_integral(|s| gamma(s).unwrap(), &spec).unwrap();
        assert!((r.value.re - (-1f64).exp()).abs() < 1e-9);
        let sym = vertical_line_integral(|s| gamma(s).unwrap(), &spec.with_conjugate_symmetry(true)).unwrap();
        assert!((sym.value - r.value).norm() < 1e-9);
    }

    #[test]
    fn zeta_gamma_line() {
        let spec = LineIntegralSpec::new(2.0, 1.0, 1e-9, DecayModel { zeta_power: 1, ..gamma_model(2.0) });
        let r = vertical_line_integral(|s| zeta(s).unwrap() * gamma(s).unwrap(), &spec).unwrap();
        let e = 1f64.exp();
        assert!((r.value.re - 1.0 / (e - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn cap_and_validation() {
        let model = DecayModel { k: 2, c: 1e6, zeta_power: 0 };
        let spec = LineIntegralSpec::new(2.0, 1.0, 1e-12, model).with_t_max(100.0);
        assert!(matches!(spec.truncation_height(), Err(Error::CapExceeded { .. })));
        let bad = LineIntegralSpec::new(2.0, 1.0, 1e-6, DecayModel { k: 1, c: 1.0, zeta_power: 0 });
        assert!(bad.validate().is_err());
    }

    #[test]
    fn tail_bound_decreases_with_height() {
        let spec = LineIntegralSpec::new(0.5, 1.0, 1e-8, DecayModel { k: 6, c: 10.0, zeta_power: 2 });
        let mut prev = f64::INFINITY;
        for t in [10.0, 20.0, 50.0, 100.0, 1000.0] {
            let b = spec.tail_bound(t);
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn unit_residue() {
        let r = circle_residue(|s| 1.0 / (s - 1.0), c(1.0, 0.0), 0.25, 1e-14).unwrap();
        assert!((r.value - 1.0).norm() < 1e-14);
    }

    #[test]
    fn zeta_squared_gamma_residue() {
        let r = circle_residue(
            |s| zeta(s).unwrap().powi(2) * gamma(s).unwrap(),
            c(1.0, 0.0),
            0.25,
            1e-13,
        )
        .unwrap();
        assert!((r.value.re - EULER_GAMMA).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn laurent_moments() {
        // e^s/(s-1)^3: moments j give the coefficients of (s-1)^{-(j+1)}
        let m = circle_moments(|s| s.exp() / (s - 1.0).powi(3), c(1.0, 0.0), 0.25, 3, 1e-14).unwrap();
        let e = 1f64.exp();
        assert!((m.values[0] - e / 2.0).norm() < 1e-13);
        assert!((m.values[1] - e).norm() < 1e-13);
        assert!((m.values[2] - e).norm() < 1e-13);
    }

    #[test]
    fn mean_at_removable_point() {
        // (e^s − 1)/s extends to 1 at s = 0
        let m = circle_mean_batched(
            |pts| Ok(pts.iter().map(|&s| (s.exp() - 1.0) / s).collect()),
            c(0.0, 0.0),
            0.25,
            1e-14,
        )
        .unwrap();
        assert!((m.value - 1.0).norm() < 1e-14);
    }

    #[test]
    fn nonconvergence_reported() {
        let r = circle_residue(|s| 1.0 / (s - 1.249), c(1.0, 0.0), 0.25, 1e-15);
        assert!(matches!(r, Err(Error::ResidueNonConvergence { .. })));
    }
}
