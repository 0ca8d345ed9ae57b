//! Exceptional X₁-Laguerre polynomials and their moments.
//!
//! The crate computes the adjusted moments ∫(x+α)^k W^α and canonical
//! moments ∫x^k W^α of the weight W^α(x) = x^α e^{-x}/(x+α)² by several
//! independent routes, builds the polynomials from two moment-determinant
//! systems, and checks everything against quadrature, the classical Laguerre
//! representation and the eigenvalue equation of the exceptional operator.

// Index loops mirror the matrix formulas; `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod format;
pub mod linalg;
pub mod moments;
pub mod oracle;
pub mod poly;
pub mod polys;
pub mod precision;
pub mod specfun;

pub use error::{Error, Result};
