use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field has {found} values but the grid has {expected} points")]
    ValueCount { expected: usize, found: usize },

    #[error("field contains a non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("axis {axis} out of range for a {dim}-D grid")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside the supported envelope: {0}")]
    OutsideEnvelope(String),

    #[error("grid too small for the kernel length scale: {0}")]
    GridTooSmall(String),

    #[error("free-surface displacement {min} at index {index} is below the floor {floor}")]
    DepthBelowFloor { min: f64, index: usize, floor: f64 },

    #[error("non-finite value produced at step {step}")]
    NonFiniteState { step: usize },

    #[error("run aborted at step {step}: {source}")]
    Aborted { step: usize, source: Box<Error> },
}
