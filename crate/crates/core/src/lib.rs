//! Numerical verification of Müntz-type summation formulas.
//!
//! The crate evaluates ζ and Γ, builds arithmetic coefficient tables,
//! computes Mellin transforms of a catalog of test functions, integrates
//! along vertical lines and around circles, and checks identities of the
//! form `Φ(s) f*(s) = ∫₀^∞ B(x) x^{s−1} dx` where `Φ` is a power of ζ
//! (optionally divided by ζ(2s)) and `B` is the arithmetic series
//! `Σ φ(n) f(nx)` minus its residue corrections.

pub mod arith;
pub mod contour;
pub mod error;
pub mod formulas;
pub mod mellin;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
