use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{DiagnosticsError, DiagnosticsRecord, DiagnosticsSeries};
use crate::solver::MhdParams;

/// Rate constant of the explicit Grönwall bound, `X(0) exp((16/η) ∫‖j‖₂²)`.
pub const GRONWALL_RATE: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monitor {
    /// `[X(t) + Σ coeff ∫‖∂ω‖₂² + Σ coeff ∫‖∂j‖₂²] / X(0)`.
    Prop21,
    /// The same with one more derivative on every term.
    Prop22,
    /// `[X(t) + η ∫‖∇j‖₂²] / [X(0) exp((16/η) ∫‖j‖₂²)]`, for `ν = 0`, `η1 = η2 = η`.
    Prop33,
}

impl Monitor {
    pub const ALL: [Monitor; 3] = [Monitor::Prop21, Monitor::Prop22, Monitor::Prop33];

    pub fn name(self) -> &'static str {
        match self {
            Monitor::Prop21 => "prop21",
            Monitor::Prop22 => "prop22",
            Monitor::Prop33 => "prop33",
        }
    }
}

impl fmt::Display for Monitor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Monitor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Monitor::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown monitor '{s}'"))
    }
}

/// `‖u‖₂² + ‖b‖₂²` plus twice the dissipation integrals active for `params`.
pub fn budget_lhs(r: &DiagnosticsRecord, params: &MhdParams) -> f64 {
    let a = &r.accum;
    r.energy()
        + 2.0
            * (params.nu1 * a.u_x
                + params.nu2 * a.u_y
                + params.eta1 * a.b_x
                + params.eta2 * a.b_y
                + params.epsilon * (a.grad_u + a.grad_b))
}

/// `max_t |LHS(t) - LHS(0)| / LHS(0)`; 0 for series with fewer than two
/// records. If `LHS(0) = 0` the absolute deviation is returned.
pub fn energy_budget_residual(series: &DiagnosticsSeries, params: &MhdParams) -> f64 {
    let Some(first) = series.first() else {
        return 0.0;
    };
    let l0 = budget_lhs(first, params);
    let scale = if l0 > 0.0 { l0 } else { 1.0 };
    series
        .records()
        .iter()
        .map(|r| (budget_lhs(r, params) - l0).abs() / scale)
        .fold(0.0, f64::max)
}

/// Monitor ratio at every record time.
pub fn monitor_trace(
    series: &DiagnosticsSeries,
    which: Monitor,
) -> Result<Vec<(f64, f64)>, DiagnosticsError> {
    let first = series.first().ok_or(DiagnosticsError::Empty)?;
    let p = &series.meta.params;
    match which {
        Monitor::Prop21 => {
            let x0 = first.x;
            if x0 == 0.0 {
                return Err(DiagnosticsError::ZeroInitial(which));
            }
            Ok(series
                .records()
                .iter()
                .map(|r| {
                    let a = &r.accum;
                    let v = r.x
                        + p.nu1 * a.omega_x
                        + p.nu2 * a.omega_y
                        + p.eta1 * a.j_x
                        + p.eta2 * a.j_y;
                    (r.t, v / x0)
                })
                .collect())
        }
        Monitor::Prop22 => {
            let x0 = first.gradient_x();
            if x0 == 0.0 {
                return Err(DiagnosticsError::ZeroInitial(which));
            }
            Ok(series
                .records()
                .iter()
                .map(|r| {
                    let a = &r.accum;
                    let v = r.gradient_x()
                        + p.nu1 * a.grad_omega_x
                        + p.nu2 * a.grad_omega_y
                        + p.eta1 * a.grad_j_x
                        + p.eta2 * a.grad_j_y;
                    (r.t, v / x0)
                })
                .collect())
        }
        Monitor::Prop33 => {
            let eta = p.magnetic_only_eta().ok_or(DiagnosticsError::Preset(
                "prop33 needs nu1 = nu2 = 0 and eta1 = eta2 > 0",
            ))?;
            let x0 = first.x;
            if x0 == 0.0 {
                return Err(DiagnosticsError::ZeroInitial(which));
            }
            Ok(series
                .records()
                .iter()
                .map(|r| {
                    let a = &r.accum;
                    let bound = x0 * (GRONWALL_RATE / eta * a.j_sq).exp();
                    (r.t, (r.x + eta * a.grad_j) / bound)
                })
                .collect())
        }
    }
}

/// Largest monitor ratio over the series.
pub fn bound_monitor(series: &DiagnosticsSeries, which: Monitor) -> Result<f64, DiagnosticsError> {
    Ok(monitor_trace(series, which)?
        .into_iter()
        .map(|(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `p^(-1/2) ∫_0^T ‖∇u‖_p dt` for each requested exponent.
pub fn regularity_profile(
    series: &DiagnosticsSeries,
    p_list: &[f64],
) -> Result<Vec<(f64, f64)>, DiagnosticsError> {
    let last = series.last().ok_or(DiagnosticsError::Empty)?;
    p_list
        .iter()
        .map(|&p| {
            let idx = series
                .meta
                .p_ladder
                .iter()
                .position(|&q| q == p)
                .ok_or(DiagnosticsError::MissingExponent(p))?;
            Ok((p, last.accum.grad_u_lp[idx] / p.sqrt()))
        })
        .collect()
}

/// `max_p p^(-1/2) ∫_0^T ‖∇u‖_p dt` over `p_list`, a finite stand-in for
/// the supremum over all `p ≥ 2`.
pub fn regularity_criterion(
    series: &DiagnosticsSeries,
    p_list: &[f64],
) -> Result<f64, DiagnosticsError> {
    for &p in p_list {
        if !(p >= 2.0) {
            return Err(DiagnosticsError::Exponent(p));
        }
    }
    Ok(regularity_profile(series, p_list)?
        .into_iter()
        .map(|(_, v)| v)
        .fold(0.0, f64::max))
}
