use alloc::string::String;

/// Failures of the dense linear-algebra kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("Jacobi SVD did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("least squares needs rows >= cols, got {rows}x{cols}")]
    Underdetermined { rows: usize, cols: usize },
    #[error("design matrix is rank deficient (inverse condition number {rcond:e})")]
    RankDeficient { rcond: f64 },
}

/// Errors reported by the modelling, detection and recovery routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid source configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("lattice index {needed} exceeds the cutoff {cutoff}")]
    OutOfRange { needed: usize, cutoff: usize },
    #[error("no noise subspace: model order {order} leaves no columns for {n} sources")]
    NoNoiseSpace { n: usize, order: usize },
    #[error("only {found} admissible MUSIC peaks for {wanted} sources")]
    PeakShortfall { found: usize, wanted: usize },
    #[error("pair {index} is degenerate: (d +/- g)/2 vanishes")]
    DegeneratePair { index: usize },
    #[error("ill-posed node set: {0}")]
    IllPosed(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
