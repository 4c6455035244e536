use thiserror::Error;

/// Errors raised by the algebraic and geometric layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector is not in p (theta residual {residual:e})")]
    NotInP { residual: f64 },

    #[error("subspace is not contained in p")]
    SubspaceNotInP,

    #[error("subspace basis is linearly dependent")]
    DependentBasis,

    #[error("subspaces live in different ambient algebras")]
    AmbientMismatch,

    #[error("not a Lie triple system: [[e{i}, e{j}], e{k}] leaves the subspace (residual {residual:e})")]
    NotLieTripleSystem {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),

    #[error("lemma hypothesis violated at m = {m} (residual {residual:e})")]
    HypothesisViolated { m: usize, residual: f64 },

    #[error("LEMMA VIOLATED: [ad_Y^(2n) X, ad_Y^(2m+1) X] leaves s at n = {n}, m = {m} with the hypothesis satisfied (residual {residual:e})")]
    LemmaViolated { n: usize, m: usize, residual: f64 },

    #[error("series truncation K = {k} too small: last term ratio {ratio:e}")]
    TruncationTooSmall { k: usize, ratio: f64 },

    #[error("vector X is not B-orthogonal to s (pairing {pairing:e})")]
    NotNormal { pairing: f64 },

    #[error("restricted root decomposition failed: {0}")]
    RootDecomposition(String),

    #[error("X is not in the maximal abelian subspace")]
    NotInAbelian,

    #[error("unknown root index {0}")]
    UnknownRoot(usize),

    #[error("matrix is not positive definite; element is outside the group or the computation broke down")]
    NotPositiveDefinite,

    #[error("matrix exponential overflow (norm {norm:e})")]
    ExpOverflow { norm: f64 },

    #[error("element does not lie in the realized group (residual {residual:e})")]
    NotInGroup { residual: f64 },

    #[error("algebra has no matrix realization")]
    NoRealization,

    #[error("grid point outside the admissible range")]
    GridBoundary,

    #[error("induced metric is ill-conditioned at this node (min eigenvalue {min_eig:e})")]
    IllConditioned { min_eig: f64 },

    #[error("grid of {nodes} nodes exceeds the limit of {limit}")]
    GridTooLarge { nodes: usize, limit: usize },

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("unknown pair '{0}'")]
    UnknownPair(String),

    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
