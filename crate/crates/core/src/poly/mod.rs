//! Exact polynomial arithmetic: dense univariate, sparse multivariate and
//! Sturm-sequence root analysis.

pub mod multivariate;
pub mod sturm;
pub mod univariate;

pub use multivariate::MPoly;
pub use sturm::{isolate_real_roots, univariate_nonneg, NonnegOutcome, RootInterval, SturmChain};
pub use univariate::UniPoly;
