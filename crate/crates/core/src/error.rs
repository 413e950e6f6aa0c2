use thiserror::Error;

use crate::bca::BcaError;
use crate::bicomplex::ComplexError;
use crate::hodge::HodgeError;
use crate::linalg::LinalgError;
use crate::models::{CdgaError, ShapeError};
use crate::pairing::PairingError;
use crate::spectral::SpectralError;
use crate::zigzag::ZigzagError;

/// Any failure raised by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Bca(#[from] BcaError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Zigzag(#[from] ZigzagError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
