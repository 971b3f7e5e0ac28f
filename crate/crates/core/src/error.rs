//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by trajectory construction, index-set algebra, the linear
/// algebra kernel and the solvers built on top of them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("trajectory must have at least one channel and one sample")]
    EmptyTrajectory,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{what}: length {actual}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{what}: {actual} channels, expected {expected}")]
    ChannelMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("scheduling sample {sample} violates the declared bounds on channel {channel}")]
    SchedulingOutOfBounds { sample: usize, channel: usize },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("index {index} out of range for a vector of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("universe {universe} is not divisible by the channel count {n_w}")]
    UniverseNotDivisible { universe: usize, n_w: usize },

    #[error("vector length {len} is not divisible by the channel count {n_w}")]
    LengthNotDivisible { len: usize, n_w: usize },

    #[error("hankel depth {depth} invalid for a signal of length {len}")]
    InvalidDepth { depth: usize, len: usize },

    #[error("horizon {horizon} is below the system lag {lag}; the data-driven representation needs horizon >= lag")]
    HorizonBelowLag { horizon: usize, lag: usize },

    #[error("channel partition does not split 0..{n_w} into inputs and outputs exactly once")]
    InvalidPartition { n_w: usize },

    #[error("invalid system structure: {0}")]
    InvalidStructure(String),

    #[error(
        "constraints are infeasible: residual {residual:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    InfeasibleConstraints { residual: f64, tolerance: f64 },

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:.3e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("leading output coefficient is singular when stepping to sample {step}")]
    SingularLeadingCoefficient { step: usize },

    #[error("kernel representation is malformed: {0}")]
    InvalidKernelRep(String),

    #[error("result kind is {actual}, expected {expected}")]
    WrongResultKind {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("interpolation problem is infeasible (residual {residual:.3e}); the given points are not consistent with the behavior")]
    InfeasibleProblem { residual: f64 },

    #[error("quadratic program infeasible at iteration {iteration}: {source}")]
    SqpIterateInfeasible {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("file format: {0}")]
    Format(String),
}
