//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature on finite intervals.
//!
//! The integrand is vector valued: one abscissa evaluation fills every
//! component, so many transforms of the same function (for example one per
//! sample point `s`) share their node evaluations.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_029_535,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rule for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-13,
            max_subdivisions: 4000,
        }
    }
}

/// Result of a vector-valued integration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadOutput {
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Result of a scalar integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarQuad {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    values: Vec<Complex64>,
    errors: Vec<f64>,
    priority: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.priority.total_cmp(&other.priority) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Workspace {
    dim: usize,
    fc: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    samples: Vec<Vec<Complex64>>,
}

impl Workspace {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            fc: vec![Complex64::new(0.0, 0.0); dim],
            f1: vec![Complex64::new(0.0, 0.0); dim],
            f2: vec![Complex64::new(0.0, 0.0); dim],
            samples: vec![vec![Complex64::new(0.0, 0.0); dim]; 21],
        }
    }
}

fn rule<F: FnMut(f64, &mut [Complex64])>(
    f: &mut F,
    a: f64,
    b: f64,
    ws: &mut Workspace,
) -> (Vec<Complex64>, Vec<f64>) {
    let dim = ws.dim;
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    f(center, &mut ws.fc);
    ws.samples[20].copy_from_slice(&ws.fc);
    for j in 0..10 {
        let dx = half * XGK[j];
        f(center - dx, &mut ws.f1);
        f(center + dx, &mut ws.f2);
        ws.samples[2 * j].copy_from_slice(&ws.f1);
        ws.samples[2 * j + 1].copy_from_slice(&ws.f2);
    }
    let mut values = Vec::with_capacity(dim);
    let mut errors = Vec::with_capacity(dim);
    for c in 0..dim {
        let fc = ws.samples[20][c];
        let mut kron = fc * WGK[10];
        let mut gauss = Complex64::new(0.0, 0.0);
        let mut resabs = WGK[10] * fc.norm();
        for j in 0..10 {
            let pair = ws.samples[2 * j][c] + ws.samples[2 * j + 1][c];
            kron += pair * WGK[j];
            resabs += WGK[j] * (ws.samples[2 * j][c].norm() + ws.samples[2 * j + 1][c].norm());
            if j % 2 == 1 {
                gauss += pair * WG[j / 2];
            }
        }
        let mean = kron * 0.5;
        let mut resasc = WGK[10] * (fc - mean).norm();
        for j in 0..10 {
            resasc += WGK[j]
                * ((ws.samples[2 * j][c] - mean).norm() + (ws.samples[2 * j + 1][c] - mean).norm());
        }
        let value = kron * half;
        let habs = half.abs();
        let mut err = ((kron - gauss) * half).norm();
        let resasc = resasc * habs;
        let resabs = resabs * habs;
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        if !value.re.is_finite() || !value.im.is_finite() {
            err = f64::INFINITY;
        }
        values.push(value);
        errors.push(err);
    }
    (values, errors)
}

fn priority(errors: &[f64], tols: &[f64]) -> f64 {
    errors
        .iter()
        .zip(tols)
        .map(|(e, t)| if t.is_finite() { e / t } else { 0.0 })
        .fold(0.0, f64::max)
}

/// Integrates a vector-valued function over consecutive panels given by
/// `breakpoints` (at least two, increasing).
///
/// `abs_tols[c]` is the absolute tolerance of component `c`; a component
/// with an infinite tolerance is integrated but never drives refinement.
pub fn integrate_vec<F: FnMut(f64, &mut [Complex64])>(
    mut f: F,
    dim: usize,
    breakpoints: &[f64],
    abs_tols: &[f64],
    rel_tol: f64,
    max_subdivisions: usize,
) -> QuadOutput {
    assert!(breakpoints.len() >= 2, "need at least one panel");
    assert_eq!(abs_tols.len(), dim);
    let mut ws = Workspace::new(dim);
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        let (values, errors) = rule(&mut f, w[0], w[1], &mut ws);
        evaluations += 21;
        let p = priority(&errors, abs_tols);
        heap.push(Segment { a: w[0], b: w[1], values, errors, priority: p });
    }
    let mut subdivisions = 0;
    let (mut run_values, mut run_errors) = totals(heap.iter(), dim);
    let converged = loop {
        let done = (0..dim).all(|c| {
            let tol = abs_tols[c].max(rel_tol * run_values[c].norm());
            !abs_tols[c].is_finite() || run_errors[c] <= tol
        });
        if done {
            break true;
        }
        if subdivisions >= max_subdivisions {
            break false;
        }
        let Some(seg) = heap.pop() else { break false };
        if seg.priority == 0.0 {
            frozen.push(seg);
            continue;
        }
        let mid = 0.5 * (seg.a + seg.b);
        let scale = seg.a.abs().max(seg.b.abs()).max(f64::MIN_POSITIVE);
        if (seg.b - seg.a).abs() < 64.0 * f64::EPSILON * scale || mid == seg.a || mid == seg.b {
            frozen.push(seg);
            continue;
        }
        for c in 0..dim {
            run_values[c] -= seg.values[c];
            run_errors[c] -= seg.errors[c];
        }
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (values, errors) = rule(&mut f, lo, hi, &mut ws);
            evaluations += 21;
            for c in 0..dim {
                run_values[c] += values[c];
                run_errors[c] += errors[c];
            }
            let p = priority(&errors, abs_tols);
            heap.push(Segment { a: lo, b: hi, values, errors, priority: p });
        }
        subdivisions += 1;
        if subdivisions % 256 == 0 {
            let (v, e) = totals(heap.iter().chain(frozen.iter()), dim);
            run_values = v;
            run_errors = e;
        }
    };
    let mut all: Vec<Segment> = heap.into_vec();
    all.extend(frozen);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let (values, errors) = totals(all.iter(), dim);
    QuadOutput { values, errors, evaluations, converged }
}

fn totals<'a, I: Iterator<Item = &'a Segment>>(segments: I, dim: usize) -> (Vec<Complex64>, Vec<f64>) {
    let mut values = vec![Complex64::new(0.0, 0.0); dim];
    let mut errors = vec![0.0; dim];
    for seg in segments {
        for c in 0..dim {
            values[c] += seg.values[c];
            errors[c] += seg.errors[c];
        }
    }
    (values, errors)
}

/// Integrates a complex scalar function over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> ScalarQuad {
    integrate_panels(&mut f, &[a, b], opts)
}

/// Integrates a complex scalar function over consecutive panels.
pub fn integrate_panels<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    breakpoints: &[f64],
    opts: QuadOptions,
) -> ScalarQuad {
    let out = integrate_vec(
        |x, out: &mut [Complex64]| out[0] = f(x),
        1,
        breakpoints,
        &[opts.abs_tol],
        opts.rel_tol,
        opts.max_subdivisions,
    );
    ScalarQuad {
        value: out.values[0],
        error: out.errors[0],
        converged: out.converged,
    }
}

/// Integrates a real function over `[a, b]`.
pub fn integrate_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> (f64, f64, bool) {
    let r = integrate(|x| Complex64::new(f(x), 0.0), a, b, opts);
    (r.value.re, r.error, r.converged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_real(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, QuadOptions::default());
        assert!((r.0 - (32.0 - 8.0)).abs() < 1e-13);
        assert!(r.2);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let r = integrate_real(|x| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions::default());
        assert!((r.0 - 2.0).abs() < 1e-9, "{}", r.0);
    }

    #[test]
    fn oscillatory_complex() {
        let r = integrate(|t| Complex64::new(0.0, 20.0 * t).exp(), 0.0, 1.0, QuadOptions::default());
        let exact = (Complex64::new(0.0, 20.0).exp() - 1.0) / Complex64::new(0.0, 20.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn vector_components_share_nodes() {
        let out = integrate_vec(
            |x, v: &mut [Complex64]| {
                v[0] = Complex64::new(x.exp(), 0.0);
                v[1] = Complex64::new(x.cos(), x.sin());
            },
            2,
            &[0.0, 0.5, 1.0],
            &[1e-12, 1e-12],
            0.0,
            100,
        );
        assert!(out.converged);
        assert!((out.values[0].re - (1f64.exp() - 1.0)).abs() < 1e-13);
        assert!((out.values[1] - Complex64::new(1f64.sin(), 1.0 - 1f64.cos())).norm() < 1e-13);
    }

    #[test]
    fn infinite_tolerance_component_does_not_drive_refinement() {
        let out = integrate_vec(
            |x, v: &mut [Complex64]| {
                v[0] = Complex64::new(x, 0.0);
                v[1] = Complex64::new(1.0 / x.abs().sqrt(), 0.0);
            },
            2,
            &[-1.0, 1.0],
            &[1e-12, f64::INFINITY],
            0.0,
            100,
        );
        assert!(out.converged);
        assert_eq!(out.evaluations, 21);
    }
}
