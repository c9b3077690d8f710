//! Exact construction of quantum loop algebra modules, L-operators and
//! q-Racah tridiagonal pairs, with two independent computations of the
//! Bockting operator.

pub mod bockting;
pub mod error;
pub mod loperator;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod tdpair;
pub mod uq;

pub use error::{Error, Result};
pub use matrix::{Matrix, Subspace};
pub use report::{Status, VerificationReport, Witness};
pub use scalar::{Factor, ParamSet, Rational};
