use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use muntz::arith::{closed_form, dirichlet_partial, sieve_build, ArithmeticTable, SeriesId};
use muntz::mellin::{transform_continued, TestFunction};
use muntz::specfun::{gamma, sin_pi, zeta};
use muntz::Complex64;
use proptest::prelude::*;

fn table() -> &'static Arc<ArithmeticTable> {
    static T: OnceLock<Arc<ArithmeticTable>> = OnceLock::new();
    T.get_or_init(|| Arc::new(sieve_build(20_000).unwrap()))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn stream() -> impl Strategy<Value = SeriesId> {
    prop::sample::select(SeriesId::SUITE.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn zeta_conjugate_symmetry(re in -8.0..8.0f64, im in 0.5..40.0f64) {
        let s = Complex64::new(re, im);
        let a = zeta(s.conj()).unwrap();
        let b = zeta(s).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-13 * b.norm().max(1.0));
    }

    #[test]
    fn zeta_continuous_across_reflection_line(im in 0.5..30.0f64) {
        let l = zeta(Complex64::new(-1e-9, im)).unwrap();
        let r = zeta(Complex64::new(1e-9, im)).unwrap();
        prop_assert!((l - r).norm() <= 1e-7 * r.norm().max(1.0));
    }

    #[test]
    fn gamma_reflection(re in -6.0..6.0f64, im in -6.0..6.0f64) {
        let s = Complex64::new(re, im);
        prop_assume!((re - re.round()).abs() > 1e-3 || im.abs() > 1e-3);
        let lhs = gamma(s).unwrap() * gamma(1.0 - s).unwrap();
        let rhs = Complex64::new(PI, 0.0) / sin_pi(s);
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm());
    }

    #[test]
    fn partial_sums_within_tail_bound(id in stream(), sigma in 1.5..4.0f64, t in -20.0..20.0f64, n in 100u64..20_000) {
        let s = Complex64::new(sigma, t);
        let p = dirichlet_partial(table(), id, s, n).unwrap();
        let exact = closed_form(id, s).unwrap();
        prop_assert!((p.value - exact).norm() <= p.tail_bound + 1e-13 * exact.norm().max(1.0));
    }

    #[test]
    fn coefficients_are_multiplicative(id in stream(), m in 1u64..140, n in 1u64..140) {
        prop_assume!(gcd(m, n) == 1);
        let t = table();
        prop_assert_eq!(t.coeff(id, m * n).unwrap(), t.coeff(id, m).unwrap() * t.coeff(id, n).unwrap());
    }

    #[test]
    fn continuation_orders_agree(re in -0.9..3.0f64, im in -5.0..5.0f64) {
        prop_assume!(re.abs() > 0.05 || im.abs() > 0.05);
        let s = Complex64::new(re, im);
        for f in [TestFunction::exp_decay(), TestFunction::gaussian(), TestFunction::power_law(5)] {
            let a = transform_continued(&f, s, 1).unwrap().value;
            let b = transform_continued(&f, s, 3).unwrap().value;
            prop_assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "{}: {a} vs {b}", f.name());
        }
    }
}
