//! Periodic-box spectral infrastructure: grid and wavenumber tables,
//! transforms, exact derivatives, Biot–Savart reconstruction, 2/3-rule
//! dealiasing and norm quadratures.

mod fft;
mod field;
mod grid;
mod norms;
mod ops;

use thiserror::Error;

pub use field::{forward_pair, inverse_many, Axis, RealField, SpectralField};
pub use grid::{make_grid, Grid, MIN_POINTS};
pub use norms::{
    hs_norm, inner_spectral, l2_spectral, lp_norm, lp_norm_vec, weighted_square_sum,
    MAX_SOBOLEV_INDEX,
};
pub use ops::{
    biot_savart, curl, dealias, divergence, is_mean_zero, mixed_derivative, spectral_derivative,
    streamfunction, MAX_DERIVATIVE_ORDER, MEAN_ZERO_TOL,
};

pub(crate) use ops::inverse_laplacian;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("grid size {0} must be even and at least {MIN_POINTS}")]
    GridSize(usize),
    #[error("domain length {0} must be positive and finite")]
    DomainLength(f64),
    #[error("expected {expected} values, found {found}")]
    Length { expected: usize, found: usize },
    #[error("field contains non-finite values")]
    NonFinite,
    #[error("coefficients are not conjugate-symmetric (defect {0:e})")]
    NotHermitian(f64),
    #[error("derivative order {0} outside 1..={MAX_DERIVATIVE_ORDER}")]
    DerivativeOrder(u32),
    #[error("field has nonzero mean {0:e}; the Laplacian is not invertible there")]
    NonZeroMean(f64),
    #[error("L^p exponent {0} must be >= 1")]
    Exponent(f64),
    #[error("Sobolev index {0} outside [0, {MAX_SOBOLEV_INDEX}]")]
    SobolevIndex(f64),
    #[error("operation needs a square grid with equal side lengths")]
    NotSquare,
}
