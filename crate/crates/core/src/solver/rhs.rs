//! Pseudo-spectral tendencies of the vorticity–current system
//!
//! ```text
//! ω_t = -u·∇ω + b·∇j + (ν1 ∂xx + ν2 ∂yy + ε Δ) ω
//! j_t = -u·∇j + b·∇ω + 2 ∂x b1 (∂x u2 + ∂y u1) - 2 ∂x u1 (∂x b2 + ∂y b1)
//!       + (η1 ∂xx + η2 ∂yy + ε Δ) j
//! ```

use std::sync::Arc;

use num_complex::Complex64;

use super::{MhdParams, MhdState, SolverError};
use crate::spectral::{Grid, SpectralField};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest collocation magnitudes of each velocity and field component.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Speeds {
    pub u1: f64,
    pub u2: f64,
    pub b1: f64,
    pub b2: f64,
}

/// Per-mode tables that do not change during a run.
pub(crate) struct Operators {
    pub(crate) grid: Arc<Grid>,
    /// `i k` multipliers for first derivatives, zero on the Nyquist lines.
    dkx: Vec<f64>,
    dky: Vec<f64>,
    inv_k2: Vec<f64>,
    /// Diffusion decay rates `L(k)` of ω and j.
    pub(crate) rate_omega: Vec<f64>,
    pub(crate) rate_j: Vec<f64>,
    mirror: Vec<usize>,
}

/// Reusable transform buffers.
pub(crate) struct Scratch {
    packed: [Vec<Complex64>; 6],
    out: Vec<Complex64>,
}

impl Scratch {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            packed: std::array::from_fn(|_| vec![ZERO; len]),
            out: vec![ZERO; len],
        }
    }
}

#[inline]
fn ik(k: f64, c: Complex64) -> Complex64 {
    Complex64::new(-k * c.im, k * c.re)
}

impl Operators {
    pub(crate) fn new(grid: &Arc<Grid>, params: &MhdParams) -> Self {
        let (nx, ny) = (grid.nx(), grid.ny());
        let (nqx, nqy) = grid.nyquist();
        let dkx = (0..nx)
            .map(|i| if i == nqx { 0.0 } else { grid.kx()[i] })
            .collect();
        let dky = (0..ny)
            .map(|j| if j == nqy { 0.0 } else { grid.ky()[j] })
            .collect();
        let len = grid.len();
        let mut inv_k2 = vec![0.0; len];
        let mut rate_omega = vec![0.0; len];
        let mut rate_j = vec![0.0; len];
        for idx in 0..len {
            let kx2 = grid.kx()[idx % nx].powi(2);
            let ky2 = grid.ky()[idx / nx].powi(2);
            if idx != 0 {
                inv_k2[idx] = 1.0 / (kx2 + ky2);
            }
            let reg = params.epsilon * (kx2 + ky2);
            rate_omega[idx] = params.nu1 * kx2 + params.nu2 * ky2 + reg;
            rate_j[idx] = params.eta1 * kx2 + params.eta2 * ky2 + reg;
        }
        Self {
            grid: Arc::clone(grid),
            dkx,
            dky,
            inv_k2,
            rate_omega,
            rate_j,
            mirror: (0..len).map(|idx| grid.mirror(idx)).collect(),
        }
    }

    /// Dealiased nonlinear tendencies with the mean mode set to zero.
    pub(crate) fn nonlinear(
        &self,
        scratch: &mut Scratch,
        w: &[Complex64],
        j: &[Complex64],
        nw: &mut [Complex64],
        nj: &mut [Complex64],
    ) -> Result<Speeds, SolverError> {
        let nx = self.grid.nx();
        let [p0, p1, p2, p3, p4, p5] = &mut scratch.packed;
        for idx in 0..w.len() {
            let kx = self.dkx[idx % nx];
            let ky = self.dky[idx / nx];
            let inv = self.inv_k2[idx];
            let (wk, jk) = (w[idx], j[idx]);
            // (u1, u2) = (-∂y ψ, ∂x ψ) with Δψ = ω, likewise b from j
            let u1 = ik(ky, wk * inv);
            let u2 = ik(-kx, wk * inv);
            let b1 = ik(ky, jk * inv);
            let b2 = ik(-kx, jk * inv);
            let su = ik(kx, u2) + ik(ky, u1);
            let sb = ik(kx, b2) + ik(ky, b1);
            let i = Complex64::i();
            p0[idx] = u1 + i * u2;
            p1[idx] = b1 + i * b2;
            p2[idx] = ik(kx, wk) + i * ik(ky, wk);
            p3[idx] = ik(kx, jk) + i * ik(ky, jk);
            p4[idx] = ik(kx, b1) + i * su;
            p5[idx] = ik(kx, u1) + i * sb;
        }
        let fft = &self.grid.fft;
        for p in [&mut *p0, &mut *p1, &mut *p2, &mut *p3, &mut *p4, &mut *p5] {
            fft.inverse(p);
        }
        let mut speeds = Speeds::default();
        let out = &mut scratch.out;
        for idx in 0..w.len() {
            let (u1, u2) = (p0[idx].re, p0[idx].im);
            let (b1, b2) = (p1[idx].re, p1[idx].im);
            let (wx, wy) = (p2[idx].re, p2[idx].im);
            let (jx, jy) = (p3[idx].re, p3[idx].im);
            let (dxb1, su) = (p4[idx].re, p4[idx].im);
            let (dxu1, sb) = (p5[idx].re, p5[idx].im);
            let tw = -(u1 * wx + u2 * wy) + (b1 * jx + b2 * jy);
            let tj = -(u1 * jx + u2 * jy) + (b1 * wx + b2 * wy) + 2.0 * (dxb1 * su - dxu1 * sb);
            out[idx] = Complex64::new(tw, tj);
            speeds.u1 = speeds.u1.max(u1.abs());
            speeds.u2 = speeds.u2.max(u2.abs());
            speeds.b1 = speeds.b1.max(b1.abs());
            speeds.b2 = speeds.b2.max(b2.abs());
        }
        if out.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(SolverError::NonFinite);
        }
        fft.forward(out);
        let mask = self.grid.dealias_mask();
        for idx in 0..w.len() {
            if !mask[idx] {
                nw[idx] = ZERO;
                nj[idx] = ZERO;
                continue;
            }
            let z = out[idx];
            let zm = out[self.mirror[idx]].conj();
            nw[idx] = 0.5 * (z + zm);
            let d = 0.5 * (z - zm);
            nj[idx] = Complex64::new(d.im, -d.re);
        }
        nw[0] = ZERO;
        nj[0] = ZERO;
        Ok(speeds)
    }
}

/// Full tendencies `(dω/dt, dj/dt)`, diffusion included.
pub fn rhs(
    state: &MhdState,
    params: &MhdParams,
) -> Result<(SpectralField, SpectralField), SolverError> {
    super::Solver::new(state.grid(), *params)?.tendency(state)
}
