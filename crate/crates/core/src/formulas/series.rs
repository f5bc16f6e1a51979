use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::arith::{coefficient_envelope, ArithmeticTable, SeriesId};
use crate::error::{Error, Result};
use crate::mellin::{Profile, TestFunction};
use crate::specfun::{bernoulli_f64, zeta_real};

/// Euler–Maclaurin order 2p used for Σ f(nx) with power-law f.
const EM_ORDER: u32 = 4;
const EPS_GRID: [f64; 10] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.75, 1.0];

/// Σ φ(n) f(nx) with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail: f64,
    pub terms: u64,
}

/// (ε, C_ε) pairs with |φ(n)| ≤ C_ε n^ε, cached per stream.
fn envelope_grid(id: SeriesId) -> Vec<(f64, f64)> {
    static CACHE: OnceLock<Mutex<HashMap<SeriesId, Vec<(f64, f64)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("envelope cache").get(&id) {
        return v.clone();
    }
    let grid: Vec<(f64, f64)> = if id.bounded_by_one() {
        vec![(0.0, 1.0)]
    } else {
        EPS_GRID
            .iter()
            .filter_map(|&e| coefficient_envelope(id, e).map(|c| (e, c)))
            .collect()
    };
    cache.lock().expect("envelope cache").insert(id, grid.clone());
    grid
}

/// Evaluates Σ φ(n) f(nx) for one stream and function at many x.
#[derive(Debug, Clone)]
pub struct SeriesEvaluator {
    f: TestFunction,
    id: SeriesId,
    coeffs: Arc<Vec<f64>>,
    grid: Vec<(f64, f64)>,
    limit: u64,
    closed_form: bool,
    /// f is positive and decreasing on (0, ∞).
    monotone: bool,
}

impl SeriesEvaluator {
    pub fn new(table: &ArithmeticTable, f: &TestFunction, id: SeriesId) -> Result<Self> {
        Ok(Self {
            f: f.clone(),
            id,
            coeffs: table.coefficients(id)?,
            grid: envelope_grid(id),
            limit: table.limit(),
            closed_form: false,
            monotone: matches!(f.profile(), Profile::ExpDecay | Profile::Gaussian | Profile::PowerLaw { .. }),
        })
    }

    pub fn id(&self) -> SeriesId {
        self.id
    }

    /// Uses 1/(e^x − 1) for Σ e^{−nx} instead of summing.
    pub fn with_closed_form(mut self, on: bool) -> Self {
        self.closed_form = on && self.id == SeriesId::One && self.f.profile() == Profile::ExpDecay;
        self
    }

    /// Bound on Σ_{n>N} |φ(n) f(nx)| for Nx ≥ 1, from |φ(n)| ≤ C_ε n^ε and
    /// the decrease of t^ε |f(tx)|: at most C_ε x^{−1−ε} ∫_{Nx}^∞ u^ε |f(u)| du.
    fn tail_bound(&self, n: u64, x: f64) -> f64 {
        let y = n as f64 * x;
        self.grid
            .iter()
            .map(|&(eps, c)| c * x.powf(-1.0 - eps) * self.f.tail_moment_bound(eps, y))
            .fold(self.summatory_tail_bound(n, x), f64::min)
    }

    /// The same tail by partial summation against D(t) = Σ_{n≤t} |φ(n)|.
    /// With |φ| ≤ d_K, D(t) ≤ t Σ_{m≤t} d_{K−1}(m)/m ≤ t (1 + ln t)^{K−1},
    /// and for g(t) = f(tx) positive and decreasing
    /// Σ_{n>N} |φ(n)| g(n) ≤ ∫_N^∞ D(t) |g′(t)| dt.
    /// Writing a = 1 + ln N, a + ln r ≤ a r^{1/a} for r ≥ 1 gives
    /// (1 + ln t)^{K−1} ≤ a^{K−1} (t/N)^η with η = (K−1)/a, and integrating
    /// by parts leaves a^{K−1} y^{−η} x^{−1} [y^{1+η} f(y) + (1+η) ∫_y^∞ u^η f]
    /// with y = Nx.
    fn summatory_tail_bound(&self, n: u64, x: f64) -> f64 {
        if !self.monotone || n == 0 {
            return f64::INFINITY;
        }
        let y = n as f64 * x;
        let a = 1.0 + (n as f64).ln();
        let k1 = (self.id.divisor_rank() - 1) as f64;
        let eta = k1 / a;
        a.powf(k1) * y.powf(-eta) / x * (y.powf(1.0 + eta) * self.f.eval(y) + (1.0 + eta) * self.f.tail_moment_bound(eta, y))
    }

    pub fn eval(&self, x: f64, tol: f64) -> Result<SeriesValue> {
        if !(x > 0.0) {
            return Err(Error::InvalidArgument(format!("x must be positive, got {x}")));
        }
        if self.closed_form {
            return Ok(SeriesValue { value: 1.0 / x.exp_m1(), tail: 0.0, terms: 0 });
        }
        if let Some(end) = self.f.support_end() {
            // f(nx) = 0 once nx ≥ end
            let n = ((end / x).ceil() as u64).saturating_sub(1);
            if n > self.limit {
                return Err(Error::SlowConvergence { x, limit: self.limit });
            }
            return Ok(SeriesValue { value: self.partial(n, x), tail: 0.0, terms: n });
        }
        if self.id == SeriesId::One && matches!(self.f.profile(), Profile::PowerLaw { .. }) {
            return self.euler_maclaurin(x, tol);
        }
        let mut n = ((self.f.negligible_beyond(1e-17).max(1.0) / x).ceil() as u64).min(self.limit);
        let mut tail = self.tail_bound(n, x);
        while tail > tol {
            if n == self.limit {
                return Err(Error::SlowConvergence { x, limit: self.limit });
            }
            n = ((n as f64 * 1.25).ceil() as u64).min(self.limit);
            tail = self.tail_bound(n, x);
        }
        Ok(SeriesValue { value: self.partial(n, x), tail, terms: n })
    }

    fn partial(&self, n: u64, x: f64) -> f64 {
        let mut sum = 0.0;
        for k in (1..=n as usize).rev() {
            let c = self.coeffs[k];
            if c != 0.0 {
                sum += c * self.f.eval(k as f64 * x);
            }
        }
        sum
    }

    /// Σ_{n≥1} f(nx) = Σ_{n<N} f(nx) + (1/x)∫_{Nx}^∞ f + f(Nx)/2
    ///   − Σ_{j≤p} B_{2j}/(2j)! x^{2j−1} f^{(2j−1)}(Nx) + R,
    /// |R| ≤ 2ζ(2p)/(2π)^{2p} x^{2p−1} ∫_{Nx}^∞ |f^{(2p)}|.
    fn euler_maclaurin(&self, x: f64, tol: f64) -> Result<SeriesValue> {
        let p = EM_ORDER;
        let factor = 2.0 * zeta_real(2.0 * p as f64)? / (2.0 * std::f64::consts::PI).powi(2 * p as i32);
        let mut n = ((4.0 / x).ceil() as u64).max(8);
        let remainder = |n: u64| factor * x.powi(2 * p as i32 - 1) * self.f.derivative_tail_integral(2 * p, n as f64 * x);
        let mut rem = remainder(n);
        loop {
            if n > self.limit {
                return Err(Error::SlowConvergence { x, limit: self.limit });
            }
            if rem <= tol {
                break;
            }
            n *= 2;
            rem = remainder(n);
        }
        let y = n as f64 * x;
        let mut value = self.partial(n - 1, x) + self.f.tail_integral(y) / x + 0.5 * self.f.eval(y);
        let mut fact = 1.0;
        for j in 1..=p {
            fact *= ((2 * j - 1) * (2 * j)) as f64;
            value -= bernoulli_f64(2 * j as usize) / fact * x.powi(2 * j as i32 - 1) * self.f.eval_derivative(2 * j - 1, y);
        }
        Ok(SeriesValue { value, tail: rem, terms: n })
    }
}

/// Σ φ(n) f(nx) with N grown until the tail bound is below `tol`.
pub fn series_side(table: &ArithmeticTable, f: &TestFunction, id: SeriesId, x: f64, tol: f64) -> Result<SeriesValue> {
    SeriesEvaluator::new(table, f, id)?.eval(x, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_build;

    #[test]
    fn geometric_series() {
        let t = sieve_build(10_000).unwrap();
        let f = TestFunction::exp_decay();
        let v = series_side(&t, &f, SeriesId::One, 1.0, 1e-15).unwrap();
        assert!((v.value - 1.0 / (1f64.exp() - 1.0)).abs() < 1e-15);
        assert!(v.tail <= 1e-15);
    }

    #[test]
    fn divisor_sum() {
        let t = sieve_build(10_000).unwrap();
        let f = TestFunction::exp_decay();
        let v = series_side(&t, &f, SeriesId::Dk(2), 1.0, 1e-15).unwrap();
        assert!((v.value - 0.820_259_511_542_416_8).abs() < 1e-15, "{}", v.value);
    }

    #[test]
    fn squarefree_sum_brute_force() {
        let t = sieve_build(10_000).unwrap();
        let f = TestFunction::exp_decay();
        let v = series_side(&t, &f, SeriesId::AbsMu, 2.0, 1e-16).unwrap();
        let brute: f64 = (1..=30u64)
            .filter(|&n| t.mu(n).unwrap() != 0)
            .map(|n| (-2.0 * n as f64).exp())
            .sum();
        assert!((v.value - brute).abs() < 1e-16);
    }

    #[test]
    fn euler_maclaurin_power_law() {
        let t = sieve_build(100_000).unwrap();
        let f = TestFunction::power_law(3);
        for x in [0.01, 0.1, 1.0] {
            let v = series_side(&t, &f, SeriesId::One, x, 1e-14).unwrap();
            // Σ (1+nx)^{-3} = x^{-3} ζ(3, 1 + 1/x) via direct summation with a long tail
            let direct: f64 = (1..2_000_000u64).map(|n| (1.0 + n as f64 * x).powi(-3)).sum::<f64>()
                + (1.0 + 2_000_000.0 * x).powi(-2) / (2.0 * x);
            assert!((v.value - direct).abs() < 1e-9 * direct, "x={x}: {} vs {direct}", v.value);
        }
    }

    #[test]
    fn small_table_is_reported() {
        let t = sieve_build(100).unwrap();
        let f = TestFunction::power_law(5);
        assert!(matches!(series_side(&t, &f, SeriesId::One, 0.01, 1e-14), Err(Error::SlowConvergence { .. })));
    }

    #[test]
    fn bump_has_finite_support() {
        let t = sieve_build(1000).unwrap();
        let f = TestFunction::bump();
        let v = series_side(&t, &f, SeriesId::Dk(2), 0.1, 1e-15).unwrap();
        let direct: f64 = (1..10u64).map(|n| t.d(n).unwrap() as f64 * f.eval(n as f64 * 0.1)).sum();
        assert!((v.value - direct).abs() < 1e-15);
        assert_eq!(v.tail, 0.0);
    }

    #[test]
    fn too_small_x_is_slow() {
        let t = sieve_build(1000).unwrap();
        let f = TestFunction::exp_decay();
        assert!(matches!(
            series_side(&t, &f, SeriesId::Dk(2), 1e-4, 1e-12),
            Err(Error::SlowConvergence { .. })
        ));
    }
}
