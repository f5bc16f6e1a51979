//! Mellin transforms of the test-function catalog: direct quadrature,
//! continuation by integration by parts, residues at the non-positive
//! integers, vertical-line decay constants and inversion.

mod catalog;
mod class;
mod strip;
mod transform;

pub use catalog::{Profile, TestFunction, CATALOG_NAMES, MAX_DERIVATIVE, MAX_K};
pub use class::{class_check, ClassReport, DerivativeDecay, CLASS_SAMPLES, CLASS_SLACK, CLASS_WINDOW};
pub use strip::{StripDomain, PUNCTURE_GUARD};
pub use transform::{
    continuation_domain, decay_bound_constant, decay_bound_constant_of_order, inverse_transform, mellin_derivative,
    mellin_value, mellin_values, pochhammer, residue_at_negative, transform, transform_continued,
    transform_continued_with_tol, transform_with_tol, Approx, NegativeResidue, DEFAULT_TRANSFORM_TOL,
};

