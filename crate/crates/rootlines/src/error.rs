//! Shared error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported label: {0}")]
    UnsupportedLabel(String),
    #[error("{0}")]
    Parse(String),
    #[error("mismatched ambient systems")]
    AmbientMismatch,
    #[error("not a root system: {0}")]
    NotARootSystem(String),
    #[error("unknown Cartan matrix (rank {rank}, {roots} roots)")]
    UnknownCartan { rank: usize, roots: usize },
    #[error("lattice layer {0} not supported (layers 1-2 only)")]
    UnsupportedLayer(usize),
    #[error("non-simply-laced input: {0}")]
    NotSimplyLaced(String),
    #[error("invalid line system: {0}")]
    InvalidLineSystem(String),
    #[error("star-closure escapes the ambient root system at {0:?}")]
    ClosureEscapes(Vec<i64>),
    #[error("line system contains a star: {0:?}")]
    ContainsStar([Vec<i64>; 3]),
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("coweight pairing with root {root:?} is the non-integer {value}")]
    NonIntegralPairing { root: Vec<i64>, value: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
