//! Configuration, experiment drivers and file output.

mod config;
mod experiments;
mod main_run;

use thiserror::Error;

pub use config::{
    parse_config, serialize_config, ConfigError, Dissipation, RunConfig, REQUIRED_KEYS,
};
pub use experiments::{
    epsilon_refinement_experiment, swap_state, swap_symmetry_experiment, validate_eps_ladder,
    velocity_field_distance,
};
pub use main_run::{
    main_run, ExitStatus, MainRunReport, CHECKPOINT_FILE, CSV_FILE, PROP33_TOLERANCE, SUMMARY_FILE,
};

use crate::diagnostics::DiagnosticsError;
use crate::solver::SolverError;
use crate::spectral::SpectralError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Experiment(String),
}
