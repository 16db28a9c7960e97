//! Error types shared across the engine.

use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// Errors split into two families: invalid input (bad dimensions, broken
/// invariants, malformed documents) and numerical failure (eigensolver or LP
/// non-convergence). The CLI maps the first family to exit code 1 and the
/// second to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, found {found})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e} exceeds tolerance {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e} exceeds tolerance {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("eigensolver failed to converge within {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("state vector has norm {norm} (expected 1 within {tol:.1e})")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("{value} is not an eigenvalue of the observable")]
    EigenvalueNotInSpectrum { value: f64 },

    #[error("zero-probability branch: projecting onto eigenvalue {eigenvalue} has probability {probability:.3e}")]
    ZeroProbabilityBranch { eigenvalue: f64, probability: f64 },

    #[error("bipartite shape {da}x{db} does not factor dimension {dim}")]
    ShapeMismatch { da: usize, db: usize, dim: usize },

    #[error("state does not have maximal Schmidt rank (rank {rank}, need {need})")]
    NotMaximalRank { rank: usize, need: usize },

    #[error("observables do not commute (commutator max entry {deviation:.3e}): {context}")]
    Noncommuting {
        context: String,
        deviation: f64,
    },

    #[error("empty measurement sequence")]
    EmptySequence,

    #[error("unknown observable name '{name}'")]
    UnknownName { name: String },

    #[error("inequality term ({term}) is not measurable in any context")]
    TermNotMeasurable { term: String },

    #[error("strategy space too large: {count} assignments exceeds limit {limit}")]
    StrategyOverflow { count: u128, limit: u128 },

    #[error("outcome atom space too large: {count} atoms exceeds limit {limit}")]
    AtomOverflow { count: u128, limit: u128 },

    #[error("linear program failed: {0}")]
    LpFailure(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scenario field '{field}': {message}")]
    Semantic { field: String, message: String },

    #[error("unknown demo '{0}'")]
    UnknownDemo(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code contract: 0 success, 1 invalid input, 2 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. } | Error::LpFailure(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
