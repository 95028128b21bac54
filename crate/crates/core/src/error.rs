use thiserror::Error;

use crate::decomp::PartialDecomposition;
use crate::hyperbolic::HyperbolicityReport;
use crate::parser::ParseError;

/// Errors raised by the library.
///
/// Variants fall into three groups: malformed input ([`Error::Parse`] and the
/// precondition variants), certified mathematical answers that are not a
/// success ([`Error::NotDecomposable`], [`Error::NotGenericallyMG`]), and
/// violated guarantees that indicate a bug ([`Error::InternalAssertion`],
/// [`Error::PdHyperbolicityRefuted`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible: {0}")]
    NotDivisible(String),
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("determinant is identically zero")]
    ZeroDeterminant,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("entry ({row}, {col}) is not a linear form: {entry}")]
    NotLinear { row: usize, col: usize, entry: String },
    #[error("entry ({row}, {col}) has degree > 1: {entry}")]
    NotAffineLinear { row: usize, col: usize, entry: String },
    #[error("{0} does not divide the determinant")]
    NotAComponent(String),

    #[error("declared factorization does not match the determinant: {0}")]
    BadFactorization(String),
    #[error("factors are not coprime: {0}")]
    NotCoprime(String),
    #[error("adjugate entry ({}, {}) is not in the ideal (f1, f2)", .row + 1, .col + 1)]
    NotInIdeal { row: usize, col: usize },
    #[error("matrix is not decomposable: adjugate entry ({}, {}) is not in the ideal", .row + 1, .col + 1)]
    NotDecomposable {
        row: usize,
        col: usize,
        partial: Box<PartialDecomposition>,
    },

    #[error("representation is not generically maximally generated")]
    NotGenericallyMG,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("determinant mismatch: {0}")]
    DeterminantMismatch(String),

    #[error("point is not on the hypersurface")]
    PointOffHypersurface,
    #[error("point lies on the hypersurface")]
    PointOnHypersurface,
    #[error("matrix is not positive definite at the point")]
    NotPDAtPoint,
    #[error("search exhausted after {0} halvings")]
    SearchExhausted(u32),

    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error("positive definite representation produced a non-hyperbolic line")]
    PdHyperbolicityRefuted(Box<HyperbolicityReport>),
}

impl Error {
    /// True for errors that signal a violated guarantee rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalAssertion(_) | Error::PdHyperbolicityRefuted(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::InternalAssertion(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
