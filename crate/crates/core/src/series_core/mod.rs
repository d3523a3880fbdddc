//! Puiseux series and matrices with exact exponents and float coefficients.

mod exponent;
mod matrix;
mod series;

pub use exponent::{common_denominator, Exponent, ParseExponentError, Valuation};
pub use matrix::{solve_linear, vector_val, Positivity, PuiseuxMatrix, PuiseuxVector};
pub use series::{format_power, PuiseuxSeries, DEFAULT_ZERO_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("coefficient of t^{requested} requested beyond truncation {trunc}")]
    BeyondTruncation { requested: Exponent, trunc: Valuation },
    #[error("division by the zero series")]
    ZeroDivision,
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("leading term of the zero matrix")]
    ZeroMatrix,
    #[error("leading term is singular")]
    SingularLeadingTerm,
}
