use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("permutation is not on a geodesic to the full cycle")]
    NotGeodesic,

    #[error("Weingarten system is singular: dimension {n} < order {p}")]
    Singular { n: u64, p: usize },

    #[error("pole: factor vanishes for dimension {n} and cycle length {d}")]
    Pole { n: u64, d: usize },

    #[error("{what}: order {p} exceeds the configured cap {cap}")]
    Capacity { what: &'static str, p: usize, cap: usize },

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("negative eigenvalue {0:e} beyond tolerance")]
    NegativeEigenvalue(f64),

    #[error("linear algebra failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
