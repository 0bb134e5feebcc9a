use thiserror::Error;

use crate::spectral::PerronPair;

/// Crate-wide error type. Variants map one-to-one onto the failure modes of
/// the library operations, so callers (notably the CLI) can translate them
/// into exit codes without string matching.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tensor is not weakly irreducible: {0}")]
    NotIrreducible(String),

    #[error("power iteration did not converge in {iterations} iterations (ratio gap {gap:.3e})")]
    NoConvergence {
        iterations: usize,
        gap: f64,
        /// Best iterate seen before giving up, for diagnostics.
        best: Box<PerronPair>,
    },

    #[error("matrix has no null vector at tolerance (residual {0:.3e})")]
    NotSingular(f64),

    #[error("computed null vector changes sign: {0}")]
    NotPositive(String),

    #[error("right-hand side has a component along the left null vector ({0:.3e})")]
    Inconsistent(f64),

    #[error("bordered matrix is numerically singular")]
    SingularBordered,

    #[error("principal submatrix omitting index {0} is singular")]
    SubmatrixSingular(usize),

    #[error("positive off-diagonal entry at ({i}, {j}): not a Z-matrix")]
    NotZMatrix { i: usize, j: usize },

    #[error("null-vector invariant violated: {0}")]
    NullInvariant(String),

    #[error("rank is {got}, expected {expected}")]
    RankDeficient { got: usize, expected: usize },

    #[error("degenerate denominator in dual eigenvalue ratio ({0:.3e})")]
    DegenerateDenominator(f64),

    #[error("vertices {i} and {j} are not tied in the standard part (difference {diff:.3e})")]
    NotTied { i: usize, j: usize, diff: f64 },

    #[error("hypergraph is not connected")]
    NotConnected,

    #[error("unknown built-in instance `{0}`")]
    UnknownInstance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
