use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{mollify_spectral, MhdParams, MhdState, MollifierSpec, Solver, SolverError};
use crate::diagnostics::{
    record_state_with_tendency, DiagnosticsRecord, DiagnosticsSeries, FailureMarker, SeriesMeta,
};
use crate::harness::RunConfig;
use crate::inequality::{derive_seed, sample_spectral, RandomFieldSpec};
use crate::spectral::{dealias, Grid, RealField};

/// Initial vorticity and current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    /// `ω = 2 sin(ax) sin(by)`, `j = 0`.
    TaylorGreen,
    /// `ω = 0`, `b = (sin(by), 0)`.
    MagneticDecay,
    /// Taylor–Green vorticity together with the magnetic shear.
    Mixed,
    /// Independent unit-RMS random `ω` and `j` from [`RandomFieldSpec`].
    Random {
        seed: u64,
        band_limit: usize,
        alpha: f64,
    },
    Zero,
}

impl InitialData {
    pub fn name(&self) -> &'static str {
        match self {
            InitialData::TaylorGreen => "taylor_green",
            InitialData::MagneticDecay => "magnetic_decay",
            InitialData::Mixed => "mixed",
            InitialData::Random { .. } => "random",
            InitialData::Zero => "zero",
        }
    }
}

/// Build the initial state, scaled by `amplitude`, optionally mollified,
/// and projected onto the dealiased band.
pub fn initial_state(
    grid: &Arc<Grid>,
    data: &InitialData,
    amplitude: f64,
    mollifier: Option<&MollifierSpec>,
) -> Result<MhdState, SolverError> {
    let a = TAU / grid.lx();
    let b = TAU / grid.ly();
    let tg = || RealField::from_fn(grid, |x, y| 2.0 * amplitude * (a * x).sin() * (b * y).sin());
    let shear = || RealField::from_fn(grid, |_, y| -amplitude * b * (b * y).cos());
    let zero = || RealField::zeros(grid);
    let state = match *data {
        InitialData::TaylorGreen => MhdState::from_real(&tg(), &zero(), 0.0)?,
        InitialData::MagneticDecay => MhdState::from_real(&zero(), &shear(), 0.0)?,
        InitialData::Mixed => MhdState::from_real(&tg(), &shear(), 0.0)?,
        InitialData::Zero => MhdState::zeros(grid),
        InitialData::Random {
            seed,
            band_limit,
            alpha,
        } => {
            let spec =
                |stream| RandomFieldSpec::new(grid, band_limit, alpha, derive_seed(seed, stream));
            let w =
                sample_spectral(&spec(0)).map_err(|e| SolverError::InvalidState(e.to_string()))?;
            let j =
                sample_spectral(&spec(1)).map_err(|e| SolverError::InvalidState(e.to_string()))?;
            MhdState::new(w.scaled(amplitude), j.scaled(amplitude), 0.0)?
        }
    };
    let (mut w, mut j) = (state.omega_hat().clone(), state.j_hat().clone());
    if let Some(spec) = mollifier {
        w = mollify_spectral(&w, spec)?;
        j = mollify_spectral(&j, spec)?;
    }
    MhdState::new(dealias(&w), dealias(&j), 0.0)
}

/// Result of a time integration. On failure `state` is the last good state
/// and `series.failure` says why the run stopped.
#[derive(Debug)]
pub struct RunOutcome {
    pub state: MhdState,
    pub series: DiagnosticsSeries,
    pub steps: usize,
    pub error: Option<SolverError>,
}

impl RunOutcome {
    pub fn is_blow_up(&self) -> bool {
        self.series.is_blow_up()
    }
}

/// Step count and effective step for reaching `t_end` with steps no longer
/// than `dt`; `dt` is kept when it divides `t_end` up to rounding.
pub fn step_plan(dt: f64, t_end: f64) -> (usize, f64) {
    if t_end == 0.0 {
        return (0, dt);
    }
    let ratio = t_end / dt;
    let n = if (ratio - ratio.round()).abs() <= 1e-9 * ratio {
        ratio.round()
    } else {
        ratio.ceil()
    };
    let n = n.max(1.0) as usize;
    (n, t_end / n as f64)
}

/// Integrate to `t_end`, recording diagnostics at `t = 0`, every
/// `interval` steps and at the end. `observer` sees each recorded state.
pub fn integrate(
    initial: MhdState,
    params: MhdParams,
    dt: f64,
    t_end: f64,
    interval: usize,
    p_ladder: &[f64],
    mut observer: impl FnMut(&MhdState),
) -> Result<RunOutcome, SolverError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SolverError::InvalidParams(format!(
            "dt = {dt} must be positive"
        )));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(SolverError::InvalidParams(format!(
            "t_end = {t_end} must be nonnegative"
        )));
    }
    let interval = interval.max(1);
    let grid = Arc::clone(initial.grid());
    let mut solver = Solver::new(&grid, params)?;
    let (n_steps, h) = step_plan(dt, t_end);
    let mut series = DiagnosticsSeries::new(SeriesMeta {
        params,
        nx: grid.nx(),
        ny: grid.ny(),
        lx: grid.lx(),
        ly: grid.ly(),
        dt: h,
        p_ladder: p_ladder.to_vec(),
    });
    let mut state = initial.with_time(0.0);
    let first = recorded(&mut solver, &state, None, p_ladder)?;
    series.push(first)?;
    observer(&state);
    for k in 1..=n_steps {
        let next = match solver.step(&state, h) {
            Ok(s) => s.with_time(k as f64 * h),
            Err(e) => {
                series.failure = Some(FailureMarker {
                    t: state.t(),
                    blow_up: e.is_blow_up(),
                    message: e.to_string(),
                });
                return Ok(RunOutcome {
                    state,
                    series,
                    steps: k - 1,
                    error: Some(e),
                });
            }
        };
        state = next;
        if k % interval == 0 || k == n_steps {
            match recorded(&mut solver, &state, series.last(), p_ladder) {
                Ok(r) => series.push(r)?,
                Err(e) => {
                    series.failure = Some(FailureMarker {
                        t: state.t(),
                        blow_up: true,
                        message: e.to_string(),
                    });
                    return Ok(RunOutcome {
                        state,
                        series,
                        steps: k,
                        error: Some(SolverError::BlowUp {
                            t: k as f64 * h,
                            max_abs_omega: f64::NAN,
                        }),
                    });
                }
            }
            observer(&state);
        }
    }
    Ok(RunOutcome {
        state,
        series,
        steps: n_steps,
        error: None,
    })
}

fn recorded(
    solver: &mut Solver,
    state: &MhdState,
    prev: Option<&DiagnosticsRecord>,
    p_ladder: &[f64],
) -> Result<DiagnosticsRecord, SolverError> {
    let (dw, dj) = solver.tendency(state)?;
    Ok(record_state_with_tendency(
        state,
        Some((&dw, &dj)),
        prev,
        p_ladder,
    )?)
}

/// Build the grid and initial data described by `config` and integrate.
pub fn run(config: &RunConfig) -> Result<RunOutcome, SolverError> {
    let grid = config.grid()?;
    let mollifier = match config.mollifier_epsilon {
        e if e > 0.0 => Some(MollifierSpec::new(e)?),
        _ => None,
    };
    let initial = initial_state(
        &grid,
        &config.initial_data,
        config.amplitude,
        mollifier.as_ref(),
    )?;
    integrate(
        initial,
        config.params,
        config.dt,
        config.t_end,
        config.diagnostics_interval,
        &config.p_ladder,
        |_| {},
    )
}
