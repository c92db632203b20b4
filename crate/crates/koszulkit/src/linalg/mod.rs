//! Exact dense linear algebra over the rationals and prime fields.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{rref_rows, vecops, Matrix, Vector};
pub use scalar::{Field, Scalar};
pub use subspace::{is_triple_distributive, Quotient, Subspace};
