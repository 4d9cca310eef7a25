//! Deciding nonnegativity of even symmetric forms through k-point test sets.
//!
//! Forms are kept in the power-sum basis with exact rational coefficients.
//! The exact path (restriction to k-point patterns, Sturm sequences,
//! Jacobian ranks, minor factorizations) runs over [`Rational`]; the same
//! generic code also evaluates over `f64`/`f32` for the numeric oracle.

pub mod error;
pub mod extremal;
pub mod jacobian;
pub mod linalg;
pub mod numeric;
pub mod partition;
pub mod poly;
pub mod region;
pub mod scalar;
pub mod schur;
pub mod symmetric;
pub mod testset;

pub use error::{Error, Result};
pub use partition::Partition;
pub use scalar::{ExactScalar, Scalar};
pub use symmetric::{PowerSumForm, PowerSumTerm};

/// Exact rational scalar used by every certificate.
pub type Rational = num_rational::BigRational;
/// Univariate polynomial over the rationals.
pub type QPoly = poly::UniPoly<Rational>;
/// Multivariate polynomial over the rationals.
pub type QMPoly = poly::MPoly<Rational>;
/// Dense rational matrix.
pub type QMatrix = linalg::Matrix<Rational>;
/// Floating-point matrix used by the numeric paths.
pub type FMatrix = linalg::Matrix<f64>;
