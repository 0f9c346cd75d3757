use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("conjugate symmetry violated: imaginary residue {residue:e} exceeds {limit:e}")]
    SymmetryViolation { residue: f64, limit: f64 },

    #[error("unsupported shape: {0}")]
    Shape(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("rank {rank} out of range 1..={max}")]
    Rank { rank: usize, max: usize },

    #[error("dimension {dim} exceeds the oracle size guard of {limit}")]
    SizeGuard { dim: usize, limit: usize },

    #[error("observation mask has no observed entries")]
    EmptyMask,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error("no frames found in {}", .0.display())]
    EmptyDir(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            op,
            detail: detail.into(),
        }
    }
}
