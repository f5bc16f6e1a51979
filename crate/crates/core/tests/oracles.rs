//! Values frozen from mpmath at 40 digits.

use std::f64::consts::PI;

use muntz::arith::{sieve_build, SeriesId};
use muntz::formulas::{compare_residue, series_side};
use muntz::mellin::{mellin_value, transform_with_tol, TestFunction};
use muntz::specfun::{gamma, ln_gamma, zeta};
use muntz::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(got: Complex64, want: Complex64, tol: f64) {
    let err = (got - want).norm() / want.norm().max(1e-300);
    assert!(err <= tol, "got {got}, want {want}, rel err {err:e}");
}

#[test]
fn zeta_values() {
    close(zeta(c(0.5, 2.0)).unwrap(), c(0.440_545_650_340_829_44, -0.311_646_338_435_739_73), 1e-13);
    close(zeta(c(-1.5, 3.0)).unwrap(), c(0.201_328_830_542_150_33, 0.097_149_743_015_620_041), 1e-12);
    close(zeta(c(3.0, 5.0)).unwrap(), c(0.912_526_588_998_971_31, 0.050_842_871_074_571_362), 1e-13);
    close(zeta(c(-7.5, 0.0)).unwrap(), c(0.003_269_039_572_600_220_0, 0.0), 1e-12);
    // first nontrivial zero
    assert!(zeta(c(0.5, 14.134_725_141_734_694)).unwrap().norm() < 1e-13);
}

#[test]
fn gamma_values() {
    close(gamma(c(0.3, 4.0)).unwrap(), c(0.001_164_643_684_811_490_6, 0.003_352_559_888_035_202_4), 1e-12);
    close(gamma(c(-2.5, 0.5)).unwrap(), c(-0.333_875_203_522_432_34, -0.206_457_307_963_608_41), 1e-12);
    let lg = ln_gamma(c(10.0, 20.0)).unwrap();
    assert!((lg.re + 1.702_980_443_956_511).abs() < 1e-12);
    let turns = (lg.im - 52.660_660_425_584_72) / (2.0 * PI);
    assert!((turns - turns.round()).abs() < 1e-12, "{}", lg.im);
}

#[test]
fn series_values() {
    let t = sieve_build(10_000).unwrap();
    let e = TestFunction::exp_decay();
    let g = TestFunction::gaussian();
    let cases = [
        (SeriesId::Dk(2), &e, 0.5, 2.787_252_017_813_457_4),
        (SeriesId::Mu, &e, 1.0, 0.177_613_542_046_741_04),
        (SeriesId::TwoOmega, &e, 2.0, 0.177_712_294_886_805_71),
        (SeriesId::DSquared, &e, 1.0, 1.350_992_319_654_844_6),
        (SeriesId::DSqArg, &e, 1.0, 1.063_617_543_619_427_5),
        (SeriesId::Dk(3), &g, 0.3, 6.505_054_185_220_544),
    ];
    for (id, f, x, want) in cases {
        let v = series_side(&t, f, id, x, 1e-15).unwrap();
        assert!((v.value - want).abs() < 1e-13 * want.abs().max(1.0), "{id} {}: {} vs {want}", f.name(), v.value);
    }
    let p = series_side(&t, &TestFunction::power_law(5), SeriesId::One, 0.25, 1e-15).unwrap();
    assert!((p.value - 0.600_029_497_263_479_46).abs() < 1e-12, "{}", p.value);
}

#[test]
fn power_law_transform() {
    let f = TestFunction::power_law(5);
    let s = c(0.3, 1.0);
    let want = c(-0.276_145_644_488_137_41, -0.118_247_977_904_453_78);
    close(mellin_value(&f, s, 1e-13).unwrap().value, want, 1e-12);
    close(transform_with_tol(&f, s, 1e-13).unwrap().value, want, 1e-10);
}

#[test]
fn residues_at_one() {
    let e = TestFunction::exp_decay();
    let cases = [
        (1, true, 1.0, 0.607_927_101_854_026_63),
        (2, true, 1.0, 1.043_894_515_711_938_3),
        (2, true, 2.0, 0.311_255_779_537_920_52),
        (3, true, 1.0, 0.853_658_887_513_407_48),
        (4, true, 0.5, 6.209_267_647_112_429_5),
        (2, false, 1.0, 0.577_215_664_901_532_86),
        (3, false, 2.0, 0.323_769_608_667_520_04),
    ];
    for (k, quotient, x, want) in cases {
        let r = compare_residue(&e, k, quotient, 1, x).unwrap();
        assert!((r.numeric - want).abs() < 1e-10 * want, "k={k} q={quotient} x={x}: {}", r.numeric);
        if let Some(cf) = r.closed_form {
            assert!((cf - want).abs() < 1e-12 * want, "closed k={k} q={quotient} x={x}: {cf}");
        }
    }
}
