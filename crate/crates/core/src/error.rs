use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrechetError {
    #[error("chain has no vertices")]
    EmptyChain,
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("vertex {vertex}: expected {expected} coordinates, found {found}")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        vertex: usize,
    },
    #[error("vertex {vertex}: coordinate {coord} is not finite")]
    NonFinite { vertex: usize, coord: usize },
    #[error("parameter {param} outside chain domain [1, {len}]")]
    ParameterOutOfDomain { param: f64, len: usize },
    #[error("cell ({i}, {j}) outside the free space diagram")]
    CellOutOfRange { i: usize, j: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("correspondence violates its contract: {0}")]
    InvalidCorrespondence(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("broken provenance chain: {0}")]
    BrokenProvenance(String),
}

pub type Result<T> = std::result::Result<T, FrechetError>;
