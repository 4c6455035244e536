//! Structured Lie algebras with a Cartan involution, Lie triple systems in
//! `p`, the odd-power extension condition for a normal `X`, restricted roots,
//! and a float model of the symmetric space `G/K` on which the extended
//! immersions `f(t, y) = exp(tX) exp(Y) . o` are measured.
//!
//! Algebraic predicates run in exact rational arithmetic ([`Q`]) or in `f64`,
//! chosen by the scalar type; geometry is `f64` with double-double stencils.
//! The `transvector` binary wraps everything in JSON reports.

pub mod algebra;
pub mod catalog;
pub mod condition;
pub mod error;
pub mod export;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod report;
pub mod roots;
pub mod sampling;
pub mod scalar;
pub mod subspace;

pub use algebra::{AlgebraScalar, AlgebraVector, StructuredLieAlgebra};
pub use error::{Error, Result};
pub use scalar::{Mode, Scalar, Q};
