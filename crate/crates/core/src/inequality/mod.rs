//! Randomized checks of functional inequalities on band-limited periodic
//! fields. Ratios use constant 1 except the one-dimensional interpolation
//! bound, whose constant `√2` is built in.

mod campaign;
mod checks;
mod random;

use thiserror::Error;

pub use campaign::{
    parse_campaign_config, run_campaign, CampaignConfig, CampaignFamily, InequalityReport,
};
pub use checks::{
    check_inequality, commutator, dp_linfty, interp_1d, ladyzhenskaya, log_sobolev,
    log_sobolev_with, slice_sup, trilinear_aniso, CommutatorExponents, InequalityKind,
    LINE_MEAN_TOL, LOG_SOBOLEV_LADDER,
};
pub use random::{derive_seed, sample_field, sample_spectral, RandomFieldSpec};

use crate::spectral::{Axis, SpectralError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InequalityError {
    #[error("degenerate input: the right-hand side vanishes")]
    Degenerate,
    #[error("every sample was degenerate")]
    AllDegenerate,
    #[error("band limit {band_limit} must lie in 1..={cutoff}")]
    BandLimit { band_limit: usize, cutoff: usize },
    #[error("incompatible exponents: {0}")]
    Exponents(String),
    #[error("line {line} along {axis:?} has mean {mean:e}; the check needs mean-zero lines")]
    LineMean { axis: Axis, line: usize, mean: f64 },
    #[error("bands {band_f:?} + {band_g:?} alias on this grid")]
    Aliasing {
        band_f: (i64, i64),
        band_g: (i64, i64),
    },
    #[error("line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
