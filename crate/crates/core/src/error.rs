use thiserror::Error;

use crate::p2::Kind;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid variety (a0, a1) = ({a0}, {a1}): need 0 < a0 <= a1")]
    InvalidVariety { a0: i64, a1: i64 },

    #[error("Sym^2 Omega({d}) cohomology is not pinned by the exact-sequence constraints ({candidates} candidates)")]
    AmbiguousConnectingMap { d: i64, candidates: usize },

    #[error("tensor product {left:?} x {right:?} leaves the supported closure {{O, Om, S2Om}}")]
    UnsupportedTensor { left: Kind, right: Kind },

    #[error("unsupported sheaf kind {0:?}")]
    UnsupportedKind(Kind),

    #[error("Riemann-Roch integral is not an integer: {0}")]
    NonIntegralEuler(String),

    #[error("vanishing holds but h0 = {h0} differs from deg * rank = {expected}")]
    InconsistentUlrich { h0: u64, expected: u64 },

    #[error("input is not Ulrich")]
    NotUlrich,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("consistency check failed: {0}")]
    ConsistencyFailure(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;
