use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "matrix is not Hermitian: entries ({row},{col}) and ({col},{row}) differ by {deviation:e}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("trace is {trace}, expected 1")]
    TraceNotUnit { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("subsystem dimensions {dims:?} do not multiply to {dim}")]
    BadDims { dims: Vec<usize>, dim: usize },

    #[error("subsystem index {index} out of range for {factors} factors")]
    InvalidSubsystem { index: usize, factors: usize },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("X-state positivity violated: {0}")]
    XStatePositivity(String),

    #[error("need {needed} moments, have {have}")]
    InsufficientMoments { needed: usize, have: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("input is not a 3-qubit X-state: entry ({row},{col}) has magnitude {magnitude:e}")]
    NotXState {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("degenerate denominator in {0}")]
    DegenerateDenominator(&'static str),

    #[error("numerical assertion failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
