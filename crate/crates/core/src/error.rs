use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be an odd integer >= 3, got {0}")]
    InvalidDimension(usize),
    #[error("dimension {0} is not prime; the line families are informationally complete only for prime d")]
    NotPrime(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("power iteration did not converge after {0} iterations")]
    PowerIterationStalled(usize),
    #[error("solver produced a non-finite value at iteration {0}")]
    NonFinite(usize),
    #[error("no support of size <= {0} reproduces the data")]
    NoFeasibleSparseSolution(usize),
    #[error("matrix is rank deficient (numerical rank {rank}, {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
