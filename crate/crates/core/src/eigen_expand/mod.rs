//! Eigen-quadruples of Puiseux matrices and the steps that deepen them.
//!
//! A quadruple stores `λ` together with quasi bases of right and left
//! approximate eigenvectors as graded real coefficient lists in powers of
//! `s = t^{1/q}`, measured from `t^{v(Y)}`. Each step extends all of them
//! by one power of `s`.

mod deepen;
mod linalg;
mod pencil;
mod quadruple;
mod simple;

use thiserror::Error;

use crate::series_core::SeriesError;

pub use deepen::{
    deepen, deepen_rank1, deepen_semisimple, expand_perron, residual_valuation, PerronExpansion,
};
pub use linalg::{
    nonnegative_spectral_radius, null_space, numerical_rank, perron_real, pseudo_inverse_on_image,
    PseudoInverse,
};
pub use pencil::{pencil_solve, PencilRoot};
pub use quadruple::{pq_matrices, EigenQuadruple, GradedVector, PQPair, QuasiBasis};
pub use simple::{expand_simple, simple_step, SimpleExpansion};

/// Relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

/// Relative threshold for kernels of pencils and shifted leading terms.
pub const PENCIL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("numerical eigen-solver did not converge")]
    ConvergenceFailure,
    #[error("residual does not lie in the image of the shifted leading term")]
    ResidualNotInImage,
    #[error("tail block of P is singular")]
    GammaSingular,
    #[error("the pencil has no real eigenpair; the quadruple cannot be deepened")]
    PencilEmpty,
    #[error("leading eigenvalue is not semi-simple")]
    NotSemisimple,
    #[error("matrix is not square")]
    NotSquare,
    #[error("ramification {0} is not a positive multiple of the matrix ramification")]
    BadRamification(i64),
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("invalid quadruple: {0}")]
    InvalidQuadruple(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
