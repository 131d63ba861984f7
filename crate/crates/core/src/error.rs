//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |A - A†| entry {deviation:.3e} exceeds {tol:.0e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix entries must be finite")]
    NonFiniteEntries,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("size {size} does not match subsystem dimensions (product {expected})")]
    BadTensorSize { size: usize, expected: usize },

    #[error("subsystem selection is empty")]
    EmptyKeepSet,

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("subsystem index {index} selected more than once")]
    DuplicateSubsystem { index: usize },

    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("state is not normalizable: {reason}")]
    NonNormalizable { reason: String },

    #[error("not a valid density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },

    #[error("invalid probability distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("basis vectors are not orthonormal: max |G - I| entry {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },

    #[error("Pauli eigenbases are only defined for dimension 2 (got {dim})")]
    PauliDimension { dim: usize },

    #[error("MUB construction requires a prime dimension (got {dim})")]
    NonPrimeDimension { dim: usize },

    #[error("requested {requested} bases but at most {max} exist for dimension {dim}")]
    TooManyBases { requested: usize, max: usize, dim: usize },

    #[error("need at least {min} observables (got {got})")]
    TooFewObservables { min: usize, got: usize },

    #[error("invalid scenario: {reason}")]
    InvalidScenario { reason: String },

    #[error("criterion requires {expected} subsystems (got {got})")]
    SiteCount { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("csv check failed: {0}")]
    CsvCheck(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
