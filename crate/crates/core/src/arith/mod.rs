//! Arithmetic functions from a linear sieve and their Dirichlet series.

mod dirichlet;
mod series;
mod table;

pub use dirichlet::{coefficient_envelope, dirichlet_partial, tail_bound, PartialSum};
pub use series::{closed_form, eval_zeta_expr, SeriesId, ZetaExpr, DIVISION_FLOOR};
pub use table::{sieve_build, ArithmeticTable, MAX_DK, SIEVE_GUARD};
