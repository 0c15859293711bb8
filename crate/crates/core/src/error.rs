use thiserror::Error;

/// Errors raised by mesh construction, element definition and assembly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cell {cell} is degenerate (measure {measure:e})")]
    DegenerateCell { cell: usize, measure: f64 },
    #[error("cell {cell} duplicates cell {first}")]
    DuplicateCell { cell: usize, first: usize },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("no element {family} for k={k} in dimension {n}")]
    UnsupportedElement { family: String, k: usize, n: usize },
    #[error("{family} with k={k} in dimension {n} needs degree >= {min}, got {degree}")]
    DegreeTooLow { family: String, k: usize, n: usize, degree: i32, min: i32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular DoF matrix (smallest relative singular value {0:e})")]
    Singular(f64),
    #[error("image of {op} leaves the target space (relative residual {residual:e})")]
    Containment { op: String, residual: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
