//! Named constants used by the residue corrections.

use std::f64::consts::PI;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Glaisher–Kinkelin constant A.
pub const GLAISHER_A: f64 = 1.282_427_129_100_622_636_875_342_568_87;

/// ζ(2) = π²/6.
pub const PI_SQUARED_OVER_6: f64 = PI * PI / 6.0;

/// Largest n for which `zeta_neg_odd_table` is populated.
pub const NEG_ODD_TABLE_LEN: usize = 20;

/// ζ(1 − 2n) for n = 1..=20 (index n − 1).
pub fn zeta_neg_odd_table() -> [f64; NEG_ODD_TABLE_LEN] {
    let mut out = [0.0; NEG_ODD_TABLE_LEN];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = super::bernoulli::zeta_neg_odd(i as u32 + 1);
    }
    out
}
