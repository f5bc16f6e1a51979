use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

const TABLE_LEN: usize = 64;

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1u8)];
    for k in 1..=n {
        let next = &row[k - 1] * BigInt::from(n + 1 - k) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// Exact Bernoulli numbers B_0..=B_n (convention B_1 = −1/2).
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::from_integer(BigInt::from(1u8)));
    for m in 1..=n {
        let row = binomial_row(m + 1);
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRational::from_integer(row[k].clone());
            }
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli_numbers(TABLE_LEN))
}

/// The Bernoulli number B_n as an exact rational.
pub fn bernoulli(n: usize) -> BigRational {
    if n <= TABLE_LEN {
        table()[n].clone()
    } else {
        bernoulli_numbers(n).pop().unwrap_or_else(BigRational::zero)
    }
}

/// B_n rounded to the nearest double.
pub fn bernoulli_f64(n: usize) -> f64 {
    bernoulli(n).to_f64().unwrap_or(f64::NAN)
}

/// ζ(1 − 2n) = −B_{2n}/(2n) as an exact rational, n ≥ 1.
pub fn zeta_neg_odd_exact(n: u32) -> BigRational {
    assert!(n >= 1, "zeta_neg_odd is defined for n >= 1");
    let two_n = 2 * n as usize;
    -bernoulli(two_n) / BigRational::from_integer(BigInt::from(two_n))
}

/// ζ(1 − 2n) for n ≥ 1, rounded from the exact rational value.
pub fn zeta_neg_odd(n: u32) -> f64 {
    zeta_neg_odd_exact(n).to_f64().unwrap_or(f64::NAN)
}
