//! Invariant-form calculus on complex nilmanifolds and solvmanifolds.
//!
//! Forms are left-invariant, so every object here is finite-dimensional: a
//! form is a sparse map from monomials in a fixed coframe `φ¹..φⁿ, φ̄¹..φ̄ⁿ`
//! to coefficients, and a Lie algebra is given by the values `dφ¹..dφⁿ`.

pub mod catalog;
pub mod error;
pub mod existence;
pub mod exterior;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod metric;
pub mod positivity;
pub mod scalar;

pub use error::{Error, Result};
pub use exterior::{Gen, InvariantForm, Monomial};
pub use lie::StructurePresentation;
pub use metric::HermitianMetric;
pub use scalar::{Backend, CFloat, GaussRat, Scalar};
