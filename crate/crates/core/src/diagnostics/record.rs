use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::solver::MhdState;
use crate::spectral::{
    inverse_many, l2_spectral, lp_norm_vec, mixed_derivative, SpectralError, SpectralField,
};

/// Time integrals `∫_0^t` on the record cadence.
///
/// Every entry integrates a squared `L^2` norm except `grad_u_lp`, which
/// integrates `‖∇u‖_p` itself, one entry per ladder exponent. When both
/// ends of an interval carry the tendency of the state, the squared norms
/// use the end-corrected trapezoid rule
/// `h/2 (v0 + v1) + h²/12 (v0' - v1')`, which is fourth-order; otherwise,
/// and always for `grad_u_lp`, the plain trapezoid rule.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Accumulators {
    pub u_x: f64,
    pub u_y: f64,
    pub b_x: f64,
    pub b_y: f64,
    pub omega_x: f64,
    pub omega_y: f64,
    pub j_x: f64,
    pub j_y: f64,
    pub grad_u: f64,
    pub grad_b: f64,
    pub grad_j: f64,
    pub grad_omega_x: f64,
    pub grad_omega_y: f64,
    pub grad_j_x: f64,
    pub grad_j_y: f64,
    pub j_sq: f64,
    pub grad_u_lp: Vec<f64>,
}

impl Accumulators {
    fn as_array(&self) -> [f64; N_ACCUM] {
        [
            self.u_x,
            self.u_y,
            self.b_x,
            self.b_y,
            self.omega_x,
            self.omega_y,
            self.j_x,
            self.j_y,
            self.grad_u,
            self.grad_b,
            self.grad_j,
            self.grad_omega_x,
            self.grad_omega_y,
            self.grad_j_x,
            self.grad_j_y,
            self.j_sq,
        ]
    }

    fn from_array(a: [f64; N_ACCUM]) -> Self {
        let [u_x, u_y, b_x, b_y, omega_x, omega_y, j_x, j_y, grad_u, grad_b, grad_j, grad_omega_x, grad_omega_y, grad_j_x, grad_j_y, j_sq] =
            a;
        Self {
            u_x,
            u_y,
            b_x,
            b_y,
            omega_x,
            omega_y,
            j_x,
            j_y,
            grad_u,
            grad_b,
            grad_j,
            grad_omega_x,
            grad_omega_y,
            grad_j_x,
            grad_j_y,
            j_sq,
            grad_u_lp: Vec::new(),
        }
    }
}

/// Snapshot of every monitored norm at one time.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2_u: f64,
    pub l2_b: f64,
    pub l2_omega: f64,
    pub l2_j: f64,
    pub l2_grad_omega: f64,
    pub l2_grad_j: f64,
    pub l2_omega_x: f64,
    pub l2_omega_y: f64,
    pub l2_j_x: f64,
    pub l2_j_y: f64,
    pub l2_u_x: f64,
    pub l2_u_y: f64,
    pub l2_b_x: f64,
    pub l2_b_y: f64,
    pub l2_grad_u: f64,
    pub l2_grad_b: f64,
    pub l2_grad_omega_x: f64,
    pub l2_grad_omega_y: f64,
    pub l2_grad_j_x: f64,
    pub l2_grad_j_y: f64,
    /// `‖ω‖₂² + ‖j‖₂²`.
    pub x: f64,
    pub cross_helicity: f64,
    pub msq_potential: f64,
    pub max_abs_omega: f64,
    /// `‖∇u‖_p` (pointwise Frobenius norm) for each ladder exponent.
    pub grad_u_lp: Vec<f64>,
    pub accum: Accumulators,
    /// Time derivatives of the accumulated squared norms, in
    /// [`Accumulators`] field order.
    #[serde(skip)]
    pub rates: Option<[f64; N_ACCUM]>,
}

/// Number of squared-norm accumulators.
pub const N_ACCUM: usize = 16;

#[derive(Clone, Copy)]
enum Source {
    Omega,
    J,
}

/// Spectral weights `w(kx, ky)` with `‖·‖₂² = area Σ w |ĉ|²` for each
/// accumulator, in field order.
type Weight = fn(f64, f64) -> f64;

fn accum_weights() -> [(Source, Weight); N_ACCUM] {
    use Source::{Omega as W, J};
    [
        (W, |x, y| x * x / (x * x + y * y)),
        (W, |x, y| y * y / (x * x + y * y)),
        (J, |x, y| x * x / (x * x + y * y)),
        (J, |x, y| y * y / (x * x + y * y)),
        (W, |x, _| x * x),
        (W, |_, y| y * y),
        (J, |x, _| x * x),
        (J, |_, y| y * y),
        (W, |_, _| 1.0),
        (J, |_, _| 1.0),
        (J, |x, y| x * x + y * y),
        (W, |x, y| x * x * (x * x + y * y)),
        (W, |x, y| y * y * (x * x + y * y)),
        (J, |x, y| x * x * (x * x + y * y)),
        (J, |x, y| y * y * (x * x + y * y)),
        (J, |_, _| 1.0),
    ]
}

/// `d/dt area Σ w |ĉ|² = 2 area Σ w Re(conj(ĉ) dĉ/dt)`.
fn rate(f: &SpectralField, df: &SpectralField, w: Weight) -> f64 {
    let g = f.grid();
    let nx = g.nx();
    let mut s = 0.0;
    for (idx, (c, d)) in f.coeffs().iter().zip(df.coeffs()).enumerate().skip(1) {
        s += w(g.kx()[idx % nx], g.ky()[idx / nx]) * (c.conj() * d).re;
    }
    2.0 * g.area() * s
}

impl DiagnosticsRecord {
    /// `(‖u‖₂² + ‖b‖₂²)`.
    pub fn energy(&self) -> f64 {
        self.l2_u.powi(2) + self.l2_b.powi(2)
    }

    /// `‖∇ω‖₂² + ‖∇j‖₂²`.
    pub fn gradient_x(&self) -> f64 {
        self.l2_grad_omega.powi(2) + self.l2_grad_j.powi(2)
    }

    /// Scalar columns in output order; the `‖∇u‖_p` columns follow.
    pub fn columns(&self) -> [(&'static str, f64); 42] {
        let a = &self.accum;
        [
            ("t", self.t),
            ("l2_u", self.l2_u),
            ("l2_b", self.l2_b),
            ("l2_omega", self.l2_omega),
            ("l2_j", self.l2_j),
            ("l2_grad_omega", self.l2_grad_omega),
            ("l2_grad_j", self.l2_grad_j),
            ("l2_omega_x", self.l2_omega_x),
            ("l2_omega_y", self.l2_omega_y),
            ("l2_j_x", self.l2_j_x),
            ("l2_j_y", self.l2_j_y),
            ("l2_u_x", self.l2_u_x),
            ("l2_u_y", self.l2_u_y),
            ("l2_b_x", self.l2_b_x),
            ("l2_b_y", self.l2_b_y),
            ("l2_grad_u", self.l2_grad_u),
            ("l2_grad_b", self.l2_grad_b),
            ("l2_grad_omega_x", self.l2_grad_omega_x),
            ("l2_grad_omega_y", self.l2_grad_omega_y),
            ("l2_grad_j_x", self.l2_grad_j_x),
            ("l2_grad_j_y", self.l2_grad_j_y),
            ("X", self.x),
            ("cross_helicity", self.cross_helicity),
            ("msq_potential", self.msq_potential),
            ("max_abs_omega", self.max_abs_omega),
            ("accum_u_x", a.u_x),
            ("accum_u_y", a.u_y),
            ("accum_b_x", a.b_x),
            ("accum_b_y", a.b_y),
            ("accum_omega_x", a.omega_x),
            ("accum_omega_y", a.omega_y),
            ("accum_j_x", a.j_x),
            ("accum_j_y", a.j_y),
            ("accum_grad_u", a.grad_u),
            ("accum_grad_b", a.grad_b),
            ("accum_grad_j", a.grad_j),
            ("accum_grad_omega_x", a.grad_omega_x),
            ("accum_grad_omega_y", a.grad_omega_y),
            ("accum_grad_j_x", a.grad_j_x),
            ("accum_grad_j_y", a.grad_j_y),
            ("accum_j_sq", a.j_sq),
            ("energy", self.energy()),
        ]
    }

    fn squares(&self) -> [f64; N_ACCUM] {
        [
            self.l2_u_x,
            self.l2_u_y,
            self.l2_b_x,
            self.l2_b_y,
            self.l2_omega_x,
            self.l2_omega_y,
            self.l2_j_x,
            self.l2_j_y,
            self.l2_grad_u,
            self.l2_grad_b,
            self.l2_grad_j,
            self.l2_grad_omega_x,
            self.l2_grad_omega_y,
            self.l2_grad_j_x,
            self.l2_grad_j_y,
            self.l2_j,
        ]
        .map(|v| v * v)
    }

    fn all_finite(&self) -> bool {
        self.columns().iter().all(|(_, v)| v.is_finite())
            && self
                .grad_u_lp
                .iter()
                .chain(&self.accum.grad_u_lp)
                .all(|v| v.is_finite())
    }
}

/// Weighted mode sums `area * Σ w(kx, ky) |c|^2`, skipping `k = 0`.
struct ModeSums<'a> {
    f: &'a SpectralField,
}

impl ModeSums<'_> {
    fn sum(&self, w: impl Fn(f64, f64) -> f64) -> f64 {
        let g = self.f.grid();
        let nx = g.nx();
        let mut s = 0.0;
        for (idx, c) in self.f.coeffs().iter().enumerate().skip(1) {
            let n2 = c.norm_sqr();
            if n2 != 0.0 {
                s += w(g.kx()[idx % nx], g.ky()[idx / nx]) * n2;
            }
        }
        g.area() * s
    }
}

/// Compute a record for `state`, advancing the accumulators from `prev`
/// by the plain trapezoid rule.
pub fn record_state(
    state: &MhdState,
    prev: Option<&DiagnosticsRecord>,
    p_ladder: &[f64],
) -> Result<DiagnosticsRecord, DiagnosticsError> {
    record_state_with_tendency(state, None, prev, p_ladder)
}

/// As [`record_state`], also given `(dω/dt, dj/dt)` at `state`; the
/// accumulators then advance with the end-corrected rule whenever `prev`
/// carries a tendency too.
pub fn record_state_with_tendency(
    state: &MhdState,
    tendency: Option<(&SpectralField, &SpectralField)>,
    prev: Option<&DiagnosticsRecord>,
    p_ladder: &[f64],
) -> Result<DiagnosticsRecord, DiagnosticsError> {
    for &p in p_ladder {
        if !(p >= 1.0) {
            return Err(DiagnosticsError::Exponent(p));
        }
    }
    if let Some(prev) = prev {
        if prev.grad_u_lp.len() != p_ladder.len() {
            return Err(DiagnosticsError::LadderMismatch);
        }
        if !(state.t() > prev.t) {
            return Err(DiagnosticsError::TimeOrder {
                prev: prev.t,
                t: state.t(),
            });
        }
    }
    let w = ModeSums {
        f: state.omega_hat(),
    };
    let j = ModeSums { f: state.j_hat() };
    let k2 = |kx: f64, ky: f64| kx * kx + ky * ky;
    let sq = |v: f64| v.max(0.0).sqrt();

    let (u1, u2) = state.velocity();
    let (b1, b2) = state.magnetic();
    let d = |f: &SpectralField, ax, ay| mixed_derivative(f, ax, ay);
    let grads_u = [d(&u1, 1, 0), d(&u1, 0, 1), d(&u2, 1, 0), d(&u2, 0, 1)];
    let grads_b = [d(&b1, 1, 0), d(&b1, 0, 1), d(&b2, 1, 0), d(&b2, 0, 1)];
    let frob = |fs: &[SpectralField]| {
        fs.iter()
            .map(|f| l2_spectral(f).powi(2))
            .sum::<f64>()
            .sqrt()
    };

    let mut real = inverse_many(&[
        &grads_u[0],
        &grads_u[1],
        &grads_u[2],
        &grads_u[3],
        state.omega_hat(),
    ]);
    let omega = real.pop().expect("five fields");
    let refs: Vec<_> = real.iter().collect();
    let grad_u_lp = p_ladder
        .iter()
        .map(|&p| lp_norm_vec(&refs, p))
        .collect::<Result<Vec<_>, _>>()?;

    let cross = state.grid().area()
        * state
            .omega_hat()
            .coeffs()
            .iter()
            .zip(state.j_hat().coeffs())
            .enumerate()
            .skip(1)
            .map(|(idx, (a, b))| (a * b.conj()).re / state.grid().k2(idx))
            .sum::<f64>();

    let mut r = DiagnosticsRecord {
        t: state.t(),
        l2_u: sq(w.sum(|kx, ky| 1.0 / k2(kx, ky))),
        l2_b: sq(j.sum(|kx, ky| 1.0 / k2(kx, ky))),
        l2_omega: l2_spectral(state.omega_hat()),
        l2_j: l2_spectral(state.j_hat()),
        l2_grad_omega: sq(w.sum(k2)),
        l2_grad_j: sq(j.sum(k2)),
        l2_omega_x: sq(w.sum(|kx, _| kx * kx)),
        l2_omega_y: sq(w.sum(|_, ky| ky * ky)),
        l2_j_x: sq(j.sum(|kx, _| kx * kx)),
        l2_j_y: sq(j.sum(|_, ky| ky * ky)),
        l2_u_x: sq(w.sum(|kx, ky| kx * kx / k2(kx, ky))),
        l2_u_y: sq(w.sum(|kx, ky| ky * ky / k2(kx, ky))),
        l2_b_x: sq(j.sum(|kx, ky| kx * kx / k2(kx, ky))),
        l2_b_y: sq(j.sum(|kx, ky| ky * ky / k2(kx, ky))),
        l2_grad_u: frob(&grads_u),
        l2_grad_b: frob(&grads_b),
        l2_grad_omega_x: sq(w.sum(|kx, ky| kx * kx * k2(kx, ky))),
        l2_grad_omega_y: sq(w.sum(|kx, ky| ky * ky * k2(kx, ky))),
        l2_grad_j_x: sq(j.sum(|kx, ky| kx * kx * k2(kx, ky))),
        l2_grad_j_y: sq(j.sum(|kx, ky| ky * ky * k2(kx, ky))),
        x: 0.0,
        cross_helicity: cross,
        msq_potential: j.sum(|kx, ky| 1.0 / k2(kx, ky).powi(2)),
        max_abs_omega: omega.max_abs(),
        grad_u_lp,
        accum: Accumulators::default(),
        rates: None,
    };
    r.x = r.l2_omega.powi(2) + r.l2_j.powi(2);
    if let Some((dw, dj)) = tendency {
        if !dw.grid().same_shape(state.grid()) || !dj.grid().same_shape(state.grid()) {
            return Err(DiagnosticsError::Spectral(SpectralError::Length {
                expected: state.grid().len(),
                found: dw.grid().len().min(dj.grid().len()),
            }));
        }
        r.rates = Some(accum_weights().map(|(src, w)| match src {
            Source::Omega => rate(state.omega_hat(), dw, w),
            Source::J => rate(state.j_hat(), dj, w),
        }));
    }
    if let Some(p) = prev {
        let dt = r.t - p.t;
        let h = 0.5 * dt;
        let (v0, v1) = (p.squares(), r.squares());
        let mut a = p.accum.as_array();
        for i in 0..N_ACCUM {
            a[i] += h * (v0[i] + v1[i]);
            if let (Some(d0), Some(d1)) = (p.rates, r.rates) {
                a[i] += dt * dt / 12.0 * (d0[i] - d1[i]);
            }
        }
        let pa = &p.accum;
        r.accum = Accumulators {
            grad_u_lp: pa
                .grad_u_lp
                .iter()
                .zip(p.grad_u_lp.iter().zip(&r.grad_u_lp))
                .map(|(a, (v0, v1))| a + h * (v0 + v1))
                .collect(),
            ..Accumulators::from_array(a)
        };
    } else {
        r.accum.grad_u_lp = vec![0.0; p_ladder.len()];
    }
    if !r.all_finite() {
        return Err(DiagnosticsError::NonFinite { t: r.t });
    }
    Ok(r)
}
