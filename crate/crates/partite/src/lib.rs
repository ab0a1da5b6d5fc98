//! Weighted H-partite graphs and their density Turán problems.
//!
//! A weighted H-partite graph is a subgraph of a blow-up of a small host
//! graph H, with one vertex class per host vertex and a probability
//! distribution on each class. A *transversal* picks one vertex per class
//! and induces a spanning subgraph of H. This crate provides:
//!
//! * the verification kernel: density profiles, transversal enumeration,
//!   forbidden-family checks and machine-checkable certificates ([`weighted`],
//!   [`family`], [`certify`]);
//! * parameterized extremal constructions with their claimed densities and
//!   forbidden families, plus a verifier for each claim ([`constructions`]);
//! * closed-form density thresholds, the Hamiltonicity cubic and spectral
//!   tree thresholds, and a reproducible summary table ([`thresholds`]);
//! * exhaustive/stochastic search for the extremal density over weight-free
//!   combinatorial patterns with an inner maximin weight optimizer
//!   ([`search`]);
//! * random transversal sampling, exact and Monte Carlo property
//!   probabilities, 1-dependence checks and the star absorption witness
//!   ([`sampler`]).
//!
//! All numeric work uses `f64` with a global comparison tolerance of
//! [`COMPARE_TOL`]; per-part weight sums are validated to [`WEIGHT_SUM_TOL`].

pub mod certify;
pub mod constructions;
pub mod family;
pub mod graph;
pub mod json;
mod rng;
pub mod sampler;
pub mod search;
pub mod thresholds;
pub mod weighted;

pub use certify::{check_family_free, Certificate, Verdict};
pub use family::ForbiddenFamily;
pub use graph::{HostGraph, SmallGraph};
pub use weighted::{DensityProfile, PartiteGraph, Transversal, ValidationReport};

/// Global comparison tolerance for densities and claimed values.
pub const COMPARE_TOL: f64 = 1e-9;

/// Tolerance on per-part weight sums (validation).
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Default cap on the number of transversals an exhaustive operation will
/// enumerate before refusing.
pub const DEFAULT_ENUM_CAP: u128 = 100_000_000;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The graph failed validation; the report lists every violation.
    #[error("invalid weighted partite graph:\n{0}")]
    Invalid(ValidationReport),
    /// An exhaustive enumeration would exceed the configured cap.
    #[error("transversal count {count} exceeds the enumeration cap {cap}")]
    EnumerationCap { count: u128, cap: u128 },
    /// A parameter lies outside its documented domain.
    #[error("{0}")]
    Parameter(String),
    /// Exhaustive search space too large for the configured budget.
    #[error(
        "pattern space estimate {estimate:.3e} exceeds the exhaustive budget {budget:.3e}; \
         use stochastic mode or smaller caps"
    )]
    SearchBudget { estimate: f64, budget: f64 },
}

impl Error {
    /// Shorthand for a parameter/domain error.
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
