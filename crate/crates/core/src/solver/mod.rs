//! Time integration of the vorticity–current formulation on the periodic box.

mod checkpoint;
mod integrator;
mod mollifier;
mod params;
mod reference;
mod rhs;
mod run;
mod state;

use thiserror::Error;

use crate::spectral::SpectralError;

pub use checkpoint::{
    load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, CHECKPOINT_MAGIC,
    CHECKPOINT_VERSION,
};
pub use integrator::{step, Solver, BLOW_UP_THRESHOLD, CFL_LIMIT, SCHEME_ORDER};
pub use mollifier::{bump, mollify_initial_data, MollifierSpec};
pub use params::{MhdParams, Preset};
pub use reference::{analytic_reference, reference_rate, ReferenceKind};
pub use rhs::{rhs, Speeds};
pub use run::{initial_state, integrate, run, step_plan, InitialData, RunOutcome};
pub use state::MhdState;

pub(crate) use mollifier::mollify_spectral;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("time step {dt:e} violates the CFL bound (Courant number {cfl:.3}); try dt <= {suggested_dt:e}")]
    Cfl {
        dt: f64,
        cfl: f64,
        suggested_dt: f64,
    },
    #[error("blow-up at t = {t}: max |omega| = {max_abs_omega:e}")]
    BlowUp { t: f64, max_abs_omega: f64 },
    #[error("non-finite values in the nonlinear products")]
    NonFinite,
    #[error("mollifier: {0}")]
    Mollifier(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Diagnostics(#[from] crate::diagnostics::DiagnosticsError),
}

impl SolverError {
    pub fn is_blow_up(&self) -> bool {
        matches!(self, SolverError::BlowUp { .. } | SolverError::NonFinite)
    }
}
