use thiserror::Error;

use crate::exact::Rational;

/// Failures of the checking operations. Verdicts such as "inequality does not
/// hold" are data, not errors; these variants cover inputs an operation cannot
/// meaningfully evaluate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("vertex {vertex} is outside 1..={n}")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid valuation data: {0}")]
    InvalidValuation(String),
    #[error("weight function has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("weights are not compatible with the simplified graph at vertex {vertex}")]
    IncompatibleWeights { vertex: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("system is infeasible")]
    Infeasible,
    #[error("objective is unbounded below")]
    Unbounded,
    #[error("not found: {0}")]
    NotFound(String),
    #[error("vertices 1..={k} are not a chain: arrow ({from}, {to})")]
    ChainViolated { k: usize, from: usize, to: usize },
    #[error("exceptional block is not negative definite (leading minor {index})")]
    NotNegativeDefinite { index: usize },
    #[error("orthogonal shift for {sign} has negative coordinate {index}")]
    NonpositiveCone { sign: char, index: usize },
    #[error("self-intersections of the two shifted classes differ")]
    AsymmetricLattice,
    #[error("shifted class has non-negative square ({0})")]
    NonNegativeSquare(Rational),
    #[error("elimination failed: {0}")]
    EliminationFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("vertex enumeration and simplex disagree: {0}")]
    MethodDisagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
