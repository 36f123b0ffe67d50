//! Combinatorial verification of rank-two limit linear series with canonical
//! determinant on chains of elliptic curves.
//!
//! The crate builds and validates vanishing-sequence tables for the chain
//! degenerations behind the expected-dimension existence results for
//! rank-two canonical-determinant Brill–Noether loci: the (6,5) base chain,
//! the three inductive constructions that extend it, the determinant and
//! semistability side conditions, and the fiber-dimension accounting that
//! pins every construction to the expected dimension
//! `rho = 3g - 3 - C(k+1,2)`.
//!
//! Everything is exact integer arithmetic; nothing here touches actual
//! elliptic curves. Feasibility of prescribed vanishing data is certified
//! through the two adapted-basis criteria (`vanishing::check_semistable_pair`,
//! `vanishing::check_unstable_pair`), which are sufficient for the geometric
//! statements they shadow.

pub mod constructions;
pub mod coverage;
pub mod determinant;
pub mod dimension;
pub mod lstab;
pub mod numerics;
pub mod vanishing;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("feasibility violation at component {component}: {violations:?}")]
    Infeasible {
        component: usize,
        violations: Vec<vanishing::Violation>,
    },
    #[error("table is not standard: {0:?}")]
    NotStandard(Vec<vanishing::StandardViolation>),
    #[error("decode mismatch: {0}")]
    DecodeMismatch(String),
    #[error("construction bug: {0}")]
    ConstructionBug(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("search failure: no derivation path for ({0},{1})")]
    SearchFailure(i64, i64),
    #[error("cannot account ledger: {0}")]
    CannotAccount(String),
    #[error("chain too large for brute force: {n} components (cap {cap})")]
    TooLarge { n: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
