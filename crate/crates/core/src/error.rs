use thiserror::Error;

use crate::matrix::Subspace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix (rank {rank} of {dim})")]
    SingularMatrix { rank: usize, dim: usize },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("solution is not unique (homogeneous kernel of dimension {})", kernel.dim())]
    NonUniqueSolution { kernel: Subspace },

    #[error("q mismatch between tensor factors")]
    QMismatch,

    #[error("spectral parameter mismatch between L-operators")]
    SpectralParameterMismatch,

    #[error("L00 is singular (rank {rank} of {dim}); vanishing diagonal entries at (factor, index) {offending:?}")]
    SingularL00 {
        rank: usize,
        dim: usize,
        offending: Vec<(usize, usize)>,
    },

    #[error("L-operator parameter {t} is not a^2 = {expected}")]
    WrongParameter { t: String, expected: String },

    #[error("psi-hat does not lower the split grading: {0}")]
    ShapeViolation(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}
