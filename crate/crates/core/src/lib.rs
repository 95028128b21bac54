//! Exact computations with determinantal representations of projective
//! hypersurfaces: adjugates and coranks, local reduction, linearization,
//! global block decomposition, maximal generation and matrix factorizations,
//! symmetric reduction, and hyperbolicity checks for positive definite
//! symmetric pencils.
//!
//! All arithmetic is over the rationals and exact.

pub mod arith;
pub mod decomp;
pub mod error;
pub mod hyperbolic;
pub mod kernelmod;
pub mod linearize;
pub mod localred;
pub mod matrix;
pub mod parser;
pub mod symmetric;

pub use arith::{LocalRational, Monomial, Polynomial, ProjectivePoint, Rational};
pub use error::{Error, Result};
pub use matrix::{HypersurfaceSpec, LinearMatrix, PolyMatrix, QMatrix};
