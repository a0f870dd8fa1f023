//! Crate-wide error type.

use crate::fit::LogisticFit;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The inputs are individually valid but jointly unsatisfiable.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The core zone holds a single journal, so the within-core ratio slope
    /// is undefined; callers fall back to the single-journal convention.
    #[error("degenerate core: the core zone contains a single journal")]
    DegenerateCore,

    /// No journal productivity exceeds the zone boundary.
    #[error("empty core: no journal productivity exceeds the zone boundary")]
    EmptyCore,

    /// Iterative fitting exhausted its budget; the best candidate is attached.
    #[error("fit did not converge after {iterations} iterations")]
    NonConvergence {
        best: Box<LogisticFit>,
        iterations: usize,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Malformed or invalid input data, located by file and line.
    #[error("{path}:{line}: {message}")]
    Ingest {
        path: String,
        line: u64,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
