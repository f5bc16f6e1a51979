use serde::Serialize;

use super::catalog::TestFunction;

/// Regression window and sample count for the decay check.
pub const CLASS_WINDOW: (f64, f64) = (10.0, 1e4);
pub const CLASS_SAMPLES: usize = 64;
/// Allowed excess of a fitted slope over −(α + j).
pub const CLASS_SLACK: f64 = 0.1;

/// Fitted decay of one derivative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeDecay {
    pub order: u32,
    /// Least-squares slope of ln|f^{(j)}| against ln x (−∞ when the
    /// derivative vanishes identically on the window).
    pub slope: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Outcome of checking f^{(j)}(x) = O(x^{−α−j}) for j ≤ k_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub function: String,
    pub alpha: f64,
    pub k_max: u32,
    pub derivatives: Vec<DerivativeDecay>,
    pub failing: Vec<u32>,
}

impl ClassReport {
    pub fn pass(&self) -> bool {
        self.failing.is_empty()
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    if points.iter().any(|p| p.1 == f64::NEG_INFINITY) {
        return f64::NEG_INFINITY;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Estimates the decay exponent of each derivative by log-log regression on
/// [10, 10⁴] and compares it with −(α + j) + 0.1.
pub fn class_check(f: &TestFunction) -> ClassReport {
    let (lo, hi) = CLASS_WINDOW;
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut derivatives = Vec::new();
    let mut failing = Vec::new();
    for j in 0..=f.k_max() {
        let pts: Vec<(f64, f64)> = (0..CLASS_SAMPLES)
            .map(|i| {
                let lx = llo + (lhi - llo) * i as f64 / (CLASS_SAMPLES - 1) as f64;
                (lx, f.ln_abs_derivative(j, lx.exp()))
            })
            .collect();
        let s = slope(&pts);
        let threshold = -(f.alpha() + j as f64) + CLASS_SLACK;
        let pass = s <= threshold;
        if !pass {
            failing.push(j);
        }
        derivatives.push(DerivativeDecay { order: j, slope: s, threshold, pass });
    }
    ClassReport {
        function: f.name().to_string(),
        alpha: f.alpha(),
        k_max: f.k_max(),
        derivatives,
        failing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_passes_any_alpha() {
        let f = TestFunction::exp_decay().with_alpha(100.0).unwrap();
        assert!(class_check(&f).pass());
    }

    #[test]
    fn power_law_slopes() {
        let r = class_check(&TestFunction::power_law(3));
        assert!(r.pass(), "{r:?}");
        for d in &r.derivatives {
            assert!((d.slope + 3.0 + d.order as f64).abs() < 0.1, "{d:?}");
        }
        let wrong = TestFunction::power_law(3).with_alpha(5.0).unwrap();
        let r = class_check(&wrong);
        assert!(!r.pass());
        assert_eq!(r.failing, vec![0, 1, 2]);
    }

    #[test]
    fn compact_support_passes() {
        let r = class_check(&TestFunction::bump());
        assert!(r.pass());
        assert!(r.derivatives.iter().all(|d| d.slope == f64::NEG_INFINITY));
    }
}
