use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice must be at least 2x2, got {rows}x{cols}")]
    LatticeTooSmall { rows: usize, cols: usize },

    #[error("{what} index {index} out of range (count {count})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        count: usize,
    },

    #[error("operators act on different qubit counts ({left} vs {right})")]
    QubitMismatch { left: usize, right: usize },

    #[error("product of anticommuting operators has an imaginary phase; not representable")]
    AnticommutingProduct,

    #[error("generators {i} and {j} anticommute")]
    NonCommutingPair { i: usize, j: usize },

    #[error("generator {index} is a product of earlier ones")]
    DependentGenerator { index: usize },

    #[error("operation requires an open boundary, lattice is periodic")]
    NotOpenBoundary,

    #[error("operation requires a periodic lattice")]
    NotPeriodic,

    #[error("boundary config has {got} positions, ring has {expected}")]
    ConfigLengthMismatch { expected: usize, got: usize },

    #[error("geometric amplitude must satisfy 0 < a <= 1, got {a}")]
    BadAmplitude { a: f64 },

    #[error("partition assigns {what}")]
    BadPartition { what: String },

    #[error("state has {got} amplitudes, expected 2^{qubits}")]
    DimensionMismatch { qubits: usize, got: usize },

    #[error("problem size {size} exceeds the dense limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("requested {k} eigenvalues of a dimension-{dim} operator")]
    BadEigenCount { k: usize, dim: usize },

    #[error("eigensolver did not reach tolerance {tol:e} within {iters} iterations (worst residual {residual:e})")]
    NotConverged {
        tol: f64,
        iters: usize,
        residual: f64,
    },

    #[error("LAPACK {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("lowest eigenvalue cluster reaches the end of the {count} provided values (gap tolerance {tol:e}); request more eigenvalues to bound it")]
    AmbiguousCluster { count: usize, tol: f64 },

    #[error("resolvent chain hits a zero energy denominator at step {step}")]
    VanishingDenominator { step: usize },

    #[error("boundary theory requires a positive plaquette coupling")]
    ZeroCoupling,

    #[error("{what}")]
    Invalid { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(what: impl Into<String>) -> Self {
        Error::Invalid { what: what.into() }
    }
}
