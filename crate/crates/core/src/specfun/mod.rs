//! Complex Γ and ζ, Bernoulli numbers, named constants and the vertical
//! growth envelope of ζ.

mod bernoulli;
mod constants;
mod envelope;
mod gamma;
mod zeta;

pub use bernoulli::{bernoulli, bernoulli_f64, bernoulli_numbers, zeta_neg_odd, zeta_neg_odd_exact};
pub use constants::{zeta_neg_odd_table, EULER_GAMMA, GLAISHER_A, NEG_ODD_TABLE_LEN, PI_SQUARED_OVER_6};
pub use envelope::{branch_exponents, growth_envelope, BranchExponents, ZetaGrowthEnvelope, CALIBRATION_SIGMAS};
pub use gamma::{cos_pi, digamma, gamma, gamma_real, ln_gamma, sin_pi, sin_pi_real, GAMMA_POLE_GUARD};
pub use zeta::{zeta, zeta_derivative, zeta_prime_2, zeta_prime_2_closed_form, zeta_real, ZetaPrime2, ZETA_POLE_GUARD};

