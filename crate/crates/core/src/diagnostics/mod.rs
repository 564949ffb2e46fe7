//! Norms, dissipation integrals and a-priori bound monitors of a run.

mod monitors;
mod output;
mod record;
mod series;

use thiserror::Error;

use crate::spectral::SpectralError;

pub use monitors::{
    bound_monitor, budget_lhs, energy_budget_residual, monitor_trace, regularity_criterion,
    regularity_profile, Monitor, GRONWALL_RATE,
};
pub use output::{
    csv_header, summarize, write_csv, write_summary, MonitorValue, RegularitySummary, RunSummary,
};
pub use record::{
    record_state, record_state_with_tendency, Accumulators, DiagnosticsRecord, N_ACCUM,
};
pub use series::{DiagnosticsSeries, FailureMarker, SeriesMeta};

/// Default exponents for `‖∇u‖_p`.
pub const DEFAULT_P_LADDER: [f64; 6] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("non-finite norm at t = {t} (blow-up)")]
    NonFinite { t: f64 },
    #[error("series is empty")]
    Empty,
    #[error("{0} is undefined: initial value is zero")]
    ZeroInitial(Monitor),
    #[error("{0}")]
    Preset(&'static str),
    #[error("exponent {0} is not in the stored ladder")]
    MissingExponent(f64),
    #[error("invalid exponent {0}")]
    Exponent(f64),
    #[error("record ladder length differs from the series ladder")]
    LadderMismatch,
    #[error("record time {t} does not follow {prev}")]
    TimeOrder { prev: f64, t: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
