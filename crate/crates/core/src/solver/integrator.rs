//! Integrating-factor fourth-order Runge–Kutta.
//!
//! Diffusion is integrated exactly per mode through `E = exp(-L dt)`; the
//! nonlinear tendencies go through the classical RK4 tableau in the
//! transformed variable `exp(L t) q`.

use std::sync::Arc;

use num_complex::Complex64;

use super::rhs::{Operators, Scratch, Speeds};
use super::{MhdParams, MhdState, SolverError};
use crate::spectral::{Grid, SpectralField};

/// Order of the time discretization.
pub const SCHEME_ORDER: u32 = 4;

/// Advective Courant limit, `dt * (|u1|+|b1|) kmax_x + dt * (|u2|+|b2|) kmax_y`.
pub const CFL_LIMIT: f64 = 1.0;

/// `max |ω|` beyond which a run is declared blown up.
pub const BLOW_UP_THRESHOLD: f64 = 1e8;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

struct Factors {
    dt: f64,
    full_w: Vec<f64>,
    half_w: Vec<f64>,
    full_j: Vec<f64>,
    half_j: Vec<f64>,
}

/// Time stepper holding the mode tables and transform buffers for one grid.
pub struct Solver {
    ops: Operators,
    params: MhdParams,
    scratch: Scratch,
    factors: Option<Factors>,
    stages: Vec<Vec<Complex64>>,
    last_speeds: Speeds,
}

impl Solver {
    pub fn new(grid: &Arc<Grid>, params: MhdParams) -> Result<Self, SolverError> {
        params.validate()?;
        let len = grid.len();
        Ok(Self {
            ops: Operators::new(grid, &params),
            params,
            scratch: Scratch::new(len),
            factors: None,
            stages: vec![vec![ZERO; len]; 10],
            last_speeds: Speeds::default(),
        })
    }

    pub fn params(&self) -> &MhdParams {
        &self.params
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.ops.grid
    }

    /// Collocation maxima of `u` and `b` seen at the start of the last step.
    pub fn last_speeds(&self) -> Speeds {
        self.last_speeds
    }

    /// Advective rate whose product with `dt` is the Courant number.
    pub fn advective_rate(&self, s: Speeds) -> f64 {
        advective_rate(&self.ops.grid, s)
    }

    fn factors(&mut self, dt: f64) -> &Factors {
        if self.factors.as_ref().map(|f| f.dt) != Some(dt) {
            let e = |rate: &[f64], h: f64| rate.iter().map(|r| (-r * h).exp()).collect();
            self.factors = Some(Factors {
                dt,
                full_w: e(&self.ops.rate_omega, dt),
                half_w: e(&self.ops.rate_omega, 0.5 * dt),
                full_j: e(&self.ops.rate_j, dt),
                half_j: e(&self.ops.rate_j, 0.5 * dt),
            });
        }
        self.factors.as_ref().expect("just set")
    }

    /// `(dω/dt, dj/dt)` at `state`: the nonlinear terms minus the
    /// dissipation.
    pub fn tendency(
        &mut self,
        state: &MhdState,
    ) -> Result<(SpectralField, SpectralField), SolverError> {
        if !state.grid().same_shape(&self.ops.grid) {
            return Err(SolverError::GridMismatch);
        }
        let len = self.ops.grid.len();
        let mut nw = vec![ZERO; len];
        let mut nj = vec![ZERO; len];
        let w = state.omega_hat().coeffs();
        let j = state.j_hat().coeffs();
        self.ops
            .nonlinear(&mut self.scratch, w, j, &mut nw, &mut nj)?;
        for idx in 0..len {
            nw[idx] -= self.ops.rate_omega[idx] * w[idx];
            nj[idx] -= self.ops.rate_j[idx] * j[idx];
        }
        let g = &self.ops.grid;
        Ok((
            SpectralField::from_raw(g, nw),
            SpectralField::from_raw(g, nj),
        ))
    }

    /// Advance by `dt`. `dt = 0` returns the state unchanged.
    pub fn step(&mut self, state: &MhdState, dt: f64) -> Result<MhdState, SolverError> {
        if !(dt.is_finite() && dt >= 0.0) {
            return Err(SolverError::InvalidParams(format!(
                "time step {dt} must be finite and nonnegative"
            )));
        }
        if !state.grid().same_shape(&self.ops.grid) {
            return Err(SolverError::GridMismatch);
        }
        if dt == 0.0 {
            return Ok(state.clone());
        }
        self.factors(dt);
        let Self {
            ops,
            scratch,
            factors,
            stages,
            last_speeds,
            ..
        } = self;
        let f = factors.as_ref().expect("computed above");
        let w0 = state.omega_hat().coeffs();
        let j0 = state.j_hat().coeffs();
        let len = w0.len();
        let [k1w, k1j, k2w, k2j, k3w, k3j, k4w, k4j, sw, sj] = &mut stages[..] else {
            unreachable!("ten stage buffers")
        };
        let blown = |t: f64| {
            move |e: SolverError| match e {
                SolverError::NonFinite => SolverError::BlowUp {
                    t,
                    max_abs_omega: f64::NAN,
                },
                other => other,
            }
        };
        let t = state.t();

        let speeds = ops.nonlinear(scratch, w0, j0, k1w, k1j).map_err(blown(t))?;
        *last_speeds = speeds;
        let g = &ops.grid;
        let rate = advective_rate(g, speeds);
        let cfl = dt * rate;
        if cfl > CFL_LIMIT {
            return Err(SolverError::Cfl {
                dt,
                cfl,
                suggested_dt: 0.8 * CFL_LIMIT / rate,
            });
        }
        let h = 0.5 * dt;
        for i in 0..len {
            sw[i] = f.half_w[i] * (w0[i] + h * k1w[i]);
            sj[i] = f.half_j[i] * (j0[i] + h * k1j[i]);
        }
        ops.nonlinear(scratch, sw, sj, k2w, k2j).map_err(blown(t))?;
        for i in 0..len {
            sw[i] = f.half_w[i] * w0[i] + h * k2w[i];
            sj[i] = f.half_j[i] * j0[i] + h * k2j[i];
        }
        ops.nonlinear(scratch, sw, sj, k3w, k3j).map_err(blown(t))?;
        for i in 0..len {
            sw[i] = f.full_w[i] * w0[i] + dt * f.half_w[i] * k3w[i];
            sj[i] = f.full_j[i] * j0[i] + dt * f.half_j[i] * k3j[i];
        }
        ops.nonlinear(scratch, sw, sj, k4w, k4j).map_err(blown(t))?;
        let c = dt / 6.0;
        let mut w1 = vec![ZERO; len];
        let mut j1 = vec![ZERO; len];
        for i in 0..len {
            w1[i] = f.full_w[i] * w0[i]
                + c * (f.full_w[i] * k1w[i] + 2.0 * f.half_w[i] * (k2w[i] + k3w[i]) + k4w[i]);
            j1[i] = f.full_j[i] * j0[i]
                + c * (f.full_j[i] * k1j[i] + 2.0 * f.half_j[i] * (k2j[i] + k3j[i]) + k4j[i]);
        }
        w1[0] = ZERO;
        j1[0] = ZERO;
        let t1 = t + dt;
        let next = MhdState::from_parts(
            SpectralField::from_raw(g, w1),
            SpectralField::from_raw(g, j1),
            t1,
        );
        if !next.is_finite() {
            return Err(SolverError::BlowUp {
                t: t1,
                max_abs_omega: f64::NAN,
            });
        }
        let peak = next.max_abs_omega();
        if !(peak <= BLOW_UP_THRESHOLD) {
            return Err(SolverError::BlowUp {
                t: t1,
                max_abs_omega: peak,
            });
        }
        Ok(next)
    }
}

fn advective_rate(g: &Grid, s: Speeds) -> f64 {
    let (cx, cy) = g.dealias_cutoff();
    let kx = cx as f64 * std::f64::consts::TAU / g.lx();
    let ky = cy as f64 * std::f64::consts::TAU / g.ly();
    (s.u1 + s.b1) * kx + (s.u2 + s.b2) * ky
}

/// One step with a freshly built [`Solver`]; prefer reusing a solver in loops.
pub fn step(state: &MhdState, params: &MhdParams, dt: f64) -> Result<MhdState, SolverError> {
    Solver::new(state.grid(), *params)?.step(state, dt)
}
