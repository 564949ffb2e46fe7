use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{MhdParams, MhdState};
use crate::spectral::{Grid, RealField};

/// Closed-form solutions of the full nonlinear system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// `ω = 2 sin(ax) sin(by)`, `b = 0`. The advection term vanishes identically.
    TaylorGreen,
    /// `u = 0`, `b = (sin(by), 0)`, so `j = -b cos(by)`. Every nonlinear term vanishes.
    MagneticDecay,
}

/// Decay rate of the reference's single active mode set.
pub fn reference_rate(kind: ReferenceKind, params: &MhdParams, grid: &Grid) -> f64 {
    let a = TAU / grid.lx();
    let b = TAU / grid.ly();
    match kind {
        ReferenceKind::TaylorGreen => {
            params.nu1 * a * a + params.nu2 * b * b + params.epsilon * (a * a + b * b)
        }
        ReferenceKind::MagneticDecay => (params.eta2 + params.epsilon) * b * b,
    }
}

/// Exact state at time `t`. On the `2π` box the Taylor–Green amplitude is
/// `exp(-(ν1+ν2) t)` and the magnetic one `exp(-η2 t)`.
pub fn analytic_reference(
    kind: ReferenceKind,
    params: &MhdParams,
    t: f64,
    grid: &Arc<Grid>,
) -> MhdState {
    let a = TAU / grid.lx();
    let b = TAU / grid.ly();
    let decay = (-reference_rate(kind, params, grid) * t).exp();
    let zero = RealField::zeros(grid);
    let state = match kind {
        ReferenceKind::TaylorGreen => {
            let w = RealField::from_fn(grid, |x, y| 2.0 * decay * (a * x).sin() * (b * y).sin());
            MhdState::from_real(&w, &zero, 0.0)
        }
        ReferenceKind::MagneticDecay => {
            let j = RealField::from_fn(grid, |_, y| -b * decay * (b * y).cos());
            MhdState::from_real(&zero, &j, 0.0)
        }
    };
    state
        .expect("reference profiles are mean-zero")
        .with_time(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{l2_spectral, make_grid};

    #[test]
    fn documented_amplitudes() {
        let g = Grid::square(16).unwrap();
        let p = MhdParams::mixed_case_a(0.1, 0.0);
        let s0 = analytic_reference(ReferenceKind::TaylorGreen, &p, 0.0, &g);
        let s1 = analytic_reference(ReferenceKind::TaylorGreen, &p, 1.0, &g);
        let ratio = l2_spectral(s1.omega_hat()) / l2_spectral(s0.omega_hat());
        assert!((ratio - 0.904837418).abs() < 1e-9);
        assert!((l2_spectral(s0.omega_hat()) - TAU).abs() < 1e-12);

        let p = MhdParams::mixed_case_b(0.0, 1.0);
        let m0 = analytic_reference(ReferenceKind::MagneticDecay, &p, 0.0, &g);
        let m1 = analytic_reference(ReferenceKind::MagneticDecay, &p, 2f64.ln(), &g);
        assert!((l2_spectral(m1.j_hat()) / l2_spectral(m0.j_hat()) - 0.5).abs() < 1e-14);
        assert_eq!(m1.t(), 2f64.ln());
    }

    #[test]
    fn magnetic_field_is_a_shear() {
        let g = make_grid(16, 8, 3.0, 2.0).unwrap();
        let s = analytic_reference(ReferenceKind::MagneticDecay, &MhdParams::ideal(), 0.0, &g);
        let (b1, b2) = s.magnetic();
        let b1 = b1.inverse();
        for j in 0..8 {
            let y = g.y(j);
            assert!((b1.at(3, j) - (TAU * y / 2.0).sin()).abs() < 1e-14);
        }
        assert!(b2.rms() < 1e-15);
        assert!(s.omega_hat().rms() < 1e-15);
    }
}
