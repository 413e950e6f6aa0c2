//! Exact dense linear algebra over the rationals.
//!
//! Everything downstream is phrased in terms of [`Matrix`] and [`Subspace`]. Subspaces
//! are stored in a canonical column-reduced echelon form, so two subspaces are equal
//! exactly when their stored bases are identical.

mod bareiss;
mod matrix;
mod quotient;
mod rational;
mod subspace;
mod tower;

pub use bareiss::{bareiss_rank, determinant};
pub use matrix::{Matrix, Rref};
pub use quotient::QuotientBasis;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use subspace::Subspace;
pub use tower::{solve_tower, BlockSystem};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("subspace of dimension {small} is not contained in the subspace of dimension {big}")]
    NotContained { big: usize, small: usize },
    #[error("matrix shapes do not compose: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
}

pub fn rref(m: &Matrix) -> Rref {
    m.rref()
}

pub fn kernel_basis(m: &Matrix) -> Subspace {
    m.kernel()
}

pub fn image_basis(m: &Matrix) -> Subspace {
    m.image()
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.sum(b)
}

pub fn subspace_intersection(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.intersection(b)
}

pub fn quotient_dim(big: &Subspace, small: &Subspace) -> Result<usize, LinalgError> {
    big.quotient_dim(small)
}
