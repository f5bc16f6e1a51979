//! Summation identities: cases, residue corrections, the arithmetic series
//! side and the end-to-end verifier.

mod case;
mod line;
mod preset;
mod report;
mod residues;
mod series;
mod shift;
mod terms;
mod verify;

pub use case::{CaseId, FormulaCase, EDGE_MARGIN, MAX_CASE_K, MAX_FAR_LEFT_M};
pub use residues::{
    compare_residue, pole_one_term, polynomial_correction, principal_part, quotient_negative_term,
    quotient_residue, quotient_zero_terms, zeta_power_negative_term, ResidueComparison, ResidueValue,
    LAURENT_TOL, RESIDUE_AGREEMENT,
};
pub use series::{series_side, SeriesEvaluator, SeriesValue};
pub use shift::pole_shift;
pub use terms::PowerLogTerm;
pub use verify::{ErrorBudget, PointReport, VerificationReport, Verdict, Verifier, VerifyOptions};
pub use line::{line_identity, LineIdentityReport, DEFAULT_T_MAX, LINE_SIGMA};
pub use preset::{gamma_zeta_preset, PresetId};
pub use report::{ReportDocument, ReportEntry, REPORT_SCHEMA};
