use std::sync::Arc;

use num_complex::Complex64;

use super::SolverError;
use crate::spectral::{
    biot_savart, curl, forward_pair, inverse_laplacian, is_mean_zero, Grid, RealField,
    SpectralField,
};

/// Vorticity and current density at time `t`, both mean-zero.
#[derive(Debug, Clone)]
pub struct MhdState {
    omega_hat: SpectralField,
    j_hat: SpectralField,
    t: f64,
}

impl MhdState {
    /// Validates finiteness, shape and zero mean; the mean coefficients are
    /// then set to exactly zero.
    pub fn new(
        omega_hat: SpectralField,
        j_hat: SpectralField,
        t: f64,
    ) -> Result<Self, SolverError> {
        if !omega_hat.grid().same_shape(j_hat.grid()) {
            return Err(SolverError::GridMismatch);
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(SolverError::InvalidState(format!(
                "time {t} must be finite and nonnegative"
            )));
        }
        for (name, f) in [("omega", &omega_hat), ("j", &j_hat)] {
            if !f.is_finite() {
                return Err(SolverError::InvalidState(format!(
                    "{name} has non-finite coefficients"
                )));
            }
            if !is_mean_zero(f) {
                return Err(SolverError::InvalidState(format!(
                    "{name} has nonzero mean {}",
                    f.mean()
                )));
            }
        }
        Ok(Self::from_parts(omega_hat, j_hat, t))
    }

    pub(crate) fn from_parts(
        mut omega_hat: SpectralField,
        mut j_hat: SpectralField,
        t: f64,
    ) -> Self {
        omega_hat.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        j_hat.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        Self {
            omega_hat,
            j_hat,
            t,
        }
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self {
            omega_hat: SpectralField::zeros(grid),
            j_hat: SpectralField::zeros(grid),
            t: 0.0,
        }
    }

    /// State from collocation values of `ω` and `j`.
    pub fn from_real(omega: &RealField, j: &RealField, t: f64) -> Result<Self, SolverError> {
        if !omega.grid().same_shape(j.grid()) {
            return Err(SolverError::GridMismatch);
        }
        let (w, c) = forward_pair(omega, j);
        Self::new(w, c, t)
    }

    /// State from velocity and magnetic field samples. Only the curls are
    /// kept, so the mean and any gradient part of the inputs are discarded.
    pub fn from_fields(
        u: (&RealField, &RealField),
        b: (&RealField, &RealField),
        t: f64,
    ) -> Result<Self, SolverError> {
        let (u1, u2) = forward_pair(u.0, u.1);
        let (b1, b2) = forward_pair(b.0, b.1);
        let w = curl(&u1, &u2);
        let j = curl(&b1, &b2);
        if !w.grid().same_shape(j.grid()) {
            return Err(SolverError::GridMismatch);
        }
        Self::new(w, j, t)
    }

    pub fn omega_hat(&self) -> &SpectralField {
        &self.omega_hat
    }

    pub fn j_hat(&self) -> &SpectralField {
        &self.j_hat
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.omega_hat.grid()
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// Mean-zero velocity `(u1, u2)` reconstructed from `ω`.
    pub fn velocity(&self) -> (SpectralField, SpectralField) {
        biot_savart(&self.omega_hat, (0.0, 0.0)).expect("state vorticity is mean-zero")
    }

    /// Mean-zero magnetic field `(b1, b2)` reconstructed from `j`.
    pub fn magnetic(&self) -> (SpectralField, SpectralField) {
        biot_savart(&self.j_hat, (0.0, 0.0)).expect("state current is mean-zero")
    }

    /// Magnetic potential with `Δa = -j`, so that `b = (∂y a, -∂x a)`.
    pub fn magnetic_potential(&self) -> SpectralField {
        inverse_laplacian(&self.j_hat).scaled(-1.0)
    }

    pub fn is_finite(&self) -> bool {
        self.omega_hat.is_finite() && self.j_hat.is_finite() && self.t.is_finite()
    }

    /// `max |ω|` over the collocation points.
    pub fn max_abs_omega(&self) -> f64 {
        self.omega_hat.inverse().max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{divergence, spectral_derivative, Axis};

    #[test]
    fn taylor_green_fields() {
        let g = Grid::square(16).unwrap();
        let u1 = RealField::from_fn(&g, |x, y| x.sin() * y.cos());
        let u2 = RealField::from_fn(&g, |x, y| -x.cos() * y.sin());
        let b1 = RealField::from_fn(&g, |_, y| y.sin());
        let b2 = RealField::zeros(&g);
        let s = MhdState::from_fields((&u1, &u2), (&b1, &b2), 0.0).unwrap();
        let w = s.omega_hat().inverse();
        let j = s.j_hat().inverse();
        for (idx, (wv, jv)) in w.values().iter().zip(j.values()).enumerate() {
            let (x, y) = (g.x(idx % 16), g.y(idx / 16));
            assert!((wv - 2.0 * x.sin() * y.sin()).abs() < 1e-14);
            assert!((jv + y.cos()).abs() < 1e-14);
        }
        let (v1, v2) = s.velocity();
        assert!(divergence(&v1, &v2).rms() < 1e-15);
        // b = (∂y a, -∂x a)
        let a = s.magnetic_potential();
        let (m1, m2) = s.magnetic();
        assert!(spectral_derivative(&a, Axis::Y, 1).unwrap().sub(&m1).rms() < 1e-15);
        assert!(
            spectral_derivative(&a, Axis::X, 1)
                .unwrap()
                .scaled(-1.0)
                .sub(&m2)
                .rms()
                < 1e-15
        );
    }

    #[test]
    fn rejects_mean_and_nan() {
        let g = Grid::square(8).unwrap();
        let one = RealField::from_fn(&g, |x, _| 1.0 + x.sin());
        let z = RealField::zeros(&g);
        assert!(MhdState::from_real(&one, &z, 0.0).is_err());
        assert!(MhdState::from_real(&z, &z, -1.0).is_err());
        assert!(MhdState::from_real(&z, &z, 0.0).is_ok());
        let rect = crate::spectral::make_grid(8, 16, 1.0, 1.0).unwrap();
        assert!(matches!(
            MhdState::from_real(&z, &RealField::zeros(&rect), 0.0),
            Err(SolverError::GridMismatch)
        ));
    }
}
