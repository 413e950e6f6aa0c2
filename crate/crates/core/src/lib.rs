//! Exact computations on bounded double complexes over the rationals.
//!
//! A double complex here is a bigraded rational vector space `A = ⊕ A^{p,q}` with
//! differentials `d1` of bidegree (1,0) and `d2` of bidegree (0,1) satisfying
//! `d1² = 0`, `d2² = 0` and `d1 d2 + d2 d1 = 0`. The crate computes the pages of the
//! spectral sequence of the column filtration, higher-page Bott-Chern and Aeppli
//! cohomologies, page-wise ∂∂̄-lemma verdicts, finite-dimensional harmonic theory,
//! duality pairings and square/zigzag decompositions.

pub mod bca;
pub mod bicomplex;
pub mod hodge;
pub mod linalg;
pub mod models;
pub mod pairing;
pub mod spectral;
pub mod zigzag;

mod error;

pub use error::{Error, Result};
