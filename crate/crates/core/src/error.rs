use num_complex::Complex64;
use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of zeta at s = 1 (s = {s})")]
    PoleAtOne { s: Complex64 },
    #[error("pole of gamma at non-positive integer (s = {s})")]
    PoleAtNonPositiveInteger { s: Complex64 },
    #[error("{what}: argument {value} outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },
    #[error("sieve limit {requested} exceeds the guard {max}")]
    LimitExceeded { requested: u64, max: u64 },
    #[error("index {n} outside the sieved range 1..={limit}")]
    OutOfRange { n: u64, limit: u64 },
    #[error("Dirichlet series diverges at Re s = {re} (needs Re s > 1)")]
    Divergence { re: f64 },
    #[error("|zeta(2s)| = {magnitude:e} too small to divide by at s = {s}")]
    DivisionInstability { s: Complex64, magnitude: f64 },
    #[error("s = {s} outside the strip {strip}")]
    StripViolation { s: Complex64, strip: String },
    #[error("s = {s} is a puncture point of the continuation")]
    Puncture { s: Complex64 },
    #[error("quadrature did not converge (estimated error {achieved:e}, requested {requested:e})")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },
    #[error("truncation height would exceed the cap {cap} (tail estimate {tail:e} at the cap)")]
    CapExceeded { cap: f64, tail: f64 },
    #[error("line integrand decays too slowly for a truncation bound ({reason})")]
    Truncation { reason: String },
    #[error("circle quadrature did not converge after {nodes} nodes (last change {delta:e})")]
    ResidueNonConvergence { nodes: usize, delta: f64 },
    #[error("series needs more than {limit} terms at x = {x:e}")]
    SlowConvergence { x: f64, limit: u64 },
    #[error("{function} does not meet the hypothesis of {case}: {reason}")]
    ClassViolation {
        case: String,
        function: String,
        reason: String,
    },
    #[error("bracket is not integrable: x^({exponent}) terms leave residual {residual:e}")]
    NotIntegrable { exponent: Complex64, residual: f64 },
    #[error("error budget exceeded: {0}")]
    BudgetBlowout(String),
    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("report serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
