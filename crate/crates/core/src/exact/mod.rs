//! Exact rational scalars, vectors, dense matrices and symmetric forms.

mod matrix;
mod rational;

pub(crate) use matrix::solve_square;
pub use matrix::{RatMatrix, RatVector, SymmetricForm};
pub use rational::{int, primitive_scale, rat, ParseRationalError, Rational};

use crate::error::Result;

/// Inverse of a square matrix.
pub fn mat_inverse(m: &RatMatrix) -> Result<RatMatrix> {
    m.inverse()
}

/// Unique solution `x` of `m x = rhs`.
pub fn solve_linear(m: &RatMatrix, rhs: &RatVector) -> Result<RatVector> {
    m.solve(rhs)
}

/// `uᵀ G v` for the form's Gram matrix `G`.
pub fn pair(form: &SymmetricForm, u: &RatVector, v: &RatVector) -> Result<crate::exact::Rational> {
    form.pair(u, v)
}
