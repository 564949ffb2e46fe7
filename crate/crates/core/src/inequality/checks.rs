//! Ratios `LHS / RHS` of the functional inequalities, constants set to 1
//! except where stated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::InequalityError;
use crate::spectral::{
    forward_pair, hs_norm, inverse_many, l2_spectral, lp_norm, lp_norm_vec, mixed_derivative, Axis,
    RealField, SpectralField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    TrilinearAniso,
    #[serde(rename = "interp_1d")]
    Interp1d,
    SliceSup,
    DpLinftyX,
    DpLinftyY,
    LogSobolev,
    Ladyzhenskaya,
    Commutator,
}

impl InequalityKind {
    pub const ALL: [InequalityKind; 8] = [
        InequalityKind::TrilinearAniso,
        InequalityKind::Interp1d,
        InequalityKind::SliceSup,
        InequalityKind::DpLinftyX,
        InequalityKind::DpLinftyY,
        InequalityKind::LogSobolev,
        InequalityKind::Ladyzhenskaya,
        InequalityKind::Commutator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityKind::TrilinearAniso => "trilinear_aniso",
            InequalityKind::Interp1d => "interp_1d",
            InequalityKind::SliceSup => "slice_sup",
            InequalityKind::DpLinftyX => "dp_linfty_x",
            InequalityKind::DpLinftyY => "dp_linfty_y",
            InequalityKind::LogSobolev => "log_sobolev",
            InequalityKind::Ladyzhenskaya => "ladyzhenskaya",
            InequalityKind::Commutator => "commutator",
        }
    }

    /// Number of scalar input fields taken by [`check_inequality`].
    pub fn arity(self) -> usize {
        match self {
            InequalityKind::TrilinearAniso | InequalityKind::Commutator => 3,
            _ => 1,
        }
    }

    /// Whether both sides scale with the same power of the inputs.
    pub fn is_homogeneous(self) -> bool {
        self != InequalityKind::LogSobolev
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InequalityKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown inequality kind '{s}'"))
    }
}

/// Exponent ladder `{2, 4, ..., 256}` standing in for `sup_{q >= 2}`.
pub const LOG_SOBOLEV_LADDER: [f64; 8] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0];

/// Relative size of a line mean that still counts as zero.
pub const LINE_MEAN_TOL: f64 = 1e-10;

fn ratio(lhs: f64, rhs: f64) -> Result<f64, InequalityError> {
    if !(rhs > 0.0) || !rhs.is_finite() || !lhs.is_finite() {
        return Err(InequalityError::Degenerate);
    }
    Ok(lhs / rhs)
}

fn same_grid(fields: &[&RealField]) -> Result<(), InequalityError> {
    let g = fields[0].grid();
    if fields.iter().any(|f| !f.grid().same_shape(g)) {
        return Err(InequalityError::Invalid(
            "inputs live on different grids".into(),
        ));
    }
    Ok(())
}

/// `∬|fgh| / (‖f‖₂ ‖g‖₂^½ ‖g_y‖₂^½ ‖h‖₂^½ ‖h_x‖₂^½)`.
pub fn trilinear_aniso(
    f: &RealField,
    g: &RealField,
    h: &RealField,
) -> Result<f64, InequalityError> {
    same_grid(&[f, g, h])?;
    let grid = f.grid();
    let cell = grid.dx() * grid.dy();
    let lhs = cell
        * f.values()
            .iter()
            .zip(g.values())
            .zip(h.values())
            .map(|((a, b), c)| (a * b * c).abs())
            .sum::<f64>();
    let (gh, hh) = forward_pair(g, h);
    let gy = l2_spectral(&mixed_derivative(&gh, 0, 1));
    let hx = l2_spectral(&mixed_derivative(&hh, 1, 0));
    let rhs = lp_norm(f, 2.0)? * (l2_spectral(&gh) * gy * l2_spectral(&hh) * hx).sqrt();
    ratio(lhs, rhs)
}

fn check_line_means(f: &RealField, along: Axis) -> Result<(), InequalityError> {
    let g = f.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let scale = f.max_abs();
    let (lines, len) = match along {
        Axis::X => (ny, nx),
        Axis::Y => (nx, ny),
    };
    for l in 0..lines {
        let sum: f64 = (0..len)
            .map(|s| match along {
                Axis::X => f.at(s, l),
                Axis::Y => f.at(l, s),
            })
            .sum();
        let mean = sum / len as f64;
        if mean.abs() > LINE_MEAN_TOL * scale {
            return Err(InequalityError::LineMean {
                axis: along,
                line: l,
                mean,
            });
        }
    }
    Ok(())
}

/// One-dimensional bound `sup|F| <= √2 (∫F²)^¼ (∫F_x²)^¼` on every
/// `x`-line, constant included; returns the worst line's ratio (≤ 1 when
/// the inequality holds). Each line must have zero mean.
pub fn interp_1d(f: &RealField) -> Result<f64, InequalityError> {
    check_line_means(f, Axis::X)?;
    let g = f.grid();
    let fx = mixed_derivative(&f.forward(), 1, 0).inverse();
    let (nx, dx) = (g.nx(), g.dx());
    let mut worst: Option<f64> = None;
    for j in 0..g.ny() {
        let row = &f.values()[j * nx..(j + 1) * nx];
        let drow = &fx.values()[j * nx..(j + 1) * nx];
        let sup = row.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let a = dx * row.iter().map(|v| v * v).sum::<f64>();
        let b = dx * drow.iter().map(|v| v * v).sum::<f64>();
        let rhs = std::f64::consts::SQRT_2 * (a * b).sqrt().sqrt();
        if rhs > 0.0 {
            let r = sup / rhs;
            worst = Some(worst.map_or(r, |w: f64| w.max(r)));
        }
    }
    worst.ok_or(InequalityError::Degenerate)
}

/// `sup_y ∫|g|² dx / (‖g‖₂ ‖g_y‖₂)`. Each `y`-line must have zero mean.
pub fn slice_sup(f: &RealField) -> Result<f64, InequalityError> {
    check_line_means(f, Axis::Y)?;
    let g = f.grid();
    let nx = g.nx();
    let lhs = (0..g.ny())
        .map(|j| {
            g.dx()
                * f.values()[j * nx..(j + 1) * nx]
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>()
        })
        .fold(0.0, f64::max);
    let h = f.forward();
    let rhs = l2_spectral(&h) * l2_spectral(&mixed_derivative(&h, 0, 1));
    ratio(lhs, rhs)
}

/// `‖f‖∞ / (‖f‖₂ + ‖f_x‖₂ + ‖f_yy‖₂)`; the `y` variant exchanges the axes.
pub fn dp_linfty(f: &RealField, axis: Axis) -> Result<f64, InequalityError> {
    let h = f.forward();
    let (first, second) = match axis {
        Axis::X => (mixed_derivative(&h, 1, 0), mixed_derivative(&h, 0, 2)),
        Axis::Y => (mixed_derivative(&h, 0, 1), mixed_derivative(&h, 2, 0)),
    };
    let rhs = l2_spectral(&h) + l2_spectral(&first) + l2_spectral(&second);
    ratio(f.max_abs(), rhs)
}

/// `‖f‖∞ / (max_q ‖f‖_q/√q · [ln(e + ‖f‖_{H²})]^½)` over `q_ladder`.
pub fn log_sobolev_with(f: &RealField, q_ladder: &[f64]) -> Result<f64, InequalityError> {
    if q_ladder.is_empty() || q_ladder.iter().any(|q| !(*q >= 2.0)) {
        return Err(InequalityError::Invalid(
            "q ladder needs exponents >= 2".into(),
        ));
    }
    let mut sup = 0.0_f64;
    for &q in q_ladder {
        sup = sup.max(lp_norm(f, q)? / q.sqrt());
    }
    let h2 = hs_norm(&f.forward(), 2.0)?;
    let rhs = sup * (std::f64::consts::E + h2).ln().sqrt();
    ratio(f.max_abs(), rhs)
}

pub fn log_sobolev(f: &RealField) -> Result<f64, InequalityError> {
    log_sobolev_with(f, &LOG_SOBOLEV_LADDER)
}

/// `‖f‖₄ / (‖f‖₂^½ ‖∇f‖₂^½)`.
pub fn ladyzhenskaya(f: &RealField) -> Result<f64, InequalityError> {
    let h = f.forward();
    let grad = (l2_spectral(&mixed_derivative(&h, 1, 0)).powi(2)
        + l2_spectral(&mixed_derivative(&h, 0, 1)).powi(2))
    .sqrt();
    let rhs = (l2_spectral(&h) * grad).sqrt();
    ratio(lp_norm(f, 4.0)?, rhs)
}

/// Exponents of the commutator estimate,
/// `1/p = 1/p1 + 1/p2 = 1/p3 + 1/p4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorExponents {
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl Default for CommutatorExponents {
    /// `p = 2` with the infinite exponents replaced by 8.
    fn default() -> Self {
        Self {
            p: 2.0,
            p1: 8.0,
            p2: 8.0 / 3.0,
            p3: 8.0,
            p4: 8.0 / 3.0,
        }
    }
}

impl CommutatorExponents {
    pub fn validate(&self) -> Result<(), InequalityError> {
        let bad = |m: String| Err(InequalityError::Exponents(m));
        if !(self.p > 1.0 && self.p.is_finite()) {
            return bad(format!("p = {} must lie in (1, ∞)", self.p));
        }
        for (name, v) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("p3", self.p3),
            ("p4", self.p4),
        ] {
            if !(v > 1.0) {
                return bad(format!("{name} = {v} must lie in (1, ∞]"));
            }
        }
        let inv = 1.0 / self.p;
        for (a, b, label) in [
            (self.p1, self.p2, "1/p1 + 1/p2"),
            (self.p3, self.p4, "1/p3 + 1/p4"),
        ] {
            let s = 1.0 / a + 1.0 / b;
            if (s - inv).abs() > 1e-12 * inv {
                return bad(format!("{label} = {s} differs from 1/p = {inv}"));
            }
        }
        Ok(())
    }
}

fn band(f: &SpectralField) -> (i64, i64) {
    let g = f.grid();
    let nx = g.nx();
    let floor = 1e-12 * f.coeffs().iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    let mut b = (0, 0);
    for (idx, c) in f.coeffs().iter().enumerate() {
        if c.norm() > floor {
            b.0 = b.0.max(g.kx_index()[idx % nx].abs());
            b.1 = b.1.max(g.ky_index()[idx / nx].abs());
        }
    }
    b
}

fn multi_indices(order: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=order).flat_map(move |s| (0..=s).map(move |ax| (ax, s - ax)))
}

/// `Σ_{|α| <= s} ‖ |D^α v| ‖_p` for a vector (or scalar) field `v`.
fn sobolev_wsp(v: &[&SpectralField], s: u32, p: f64) -> Result<f64, InequalityError> {
    let mut total = 0.0;
    for (ax, ay) in multi_indices(s) {
        let parts: Vec<SpectralField> = v.iter().map(|c| mixed_derivative(c, ax, ay)).collect();
        let refs: Vec<&SpectralField> = parts.iter().collect();
        let real = inverse_many(&refs);
        let real_refs: Vec<&RealField> = real.iter().collect();
        total += lp_norm_vec(&real_refs, p)?;
    }
    Ok(total)
}

/// `max_{|β|=3} ‖D^β(f·∇g) - f·∇D^β g‖_p` over
/// `‖∇f‖_{p1} ‖∇g‖_{W^{2,p2}} + ‖f‖_{W^{3,p3}} ‖∇g‖_{p4}`, for a vector
/// field `f = (f1, f2)` and a scalar `g`. Sobolev norms are sums of `L^p`
/// norms of all derivatives up to the given order. The product `f·∇g`
/// must be resolved by the grid, so the summed spectral bands of `f` and
/// `g` must stay below `n/2` on each axis.
pub fn commutator(
    f1: &RealField,
    f2: &RealField,
    g: &RealField,
    exps: &CommutatorExponents,
) -> Result<f64, InequalityError> {
    exps.validate()?;
    same_grid(&[f1, f2, g])?;
    let grid = g.grid();
    let (fh1, fh2) = forward_pair(f1, f2);
    let gh = g.forward();
    let (bf1, bf2, bg) = (band(&fh1), band(&fh2), band(&gh));
    let (bfx, bfy) = (bf1.0.max(bf2.0), bf1.1.max(bf2.1));
    if bfx + bg.0 >= grid.nx() as i64 / 2 || bfy + bg.1 >= grid.ny() as i64 / 2 {
        return Err(InequalityError::Aliasing {
            band_f: (bfx, bfy),
            band_g: bg,
        });
    }
    let gx = mixed_derivative(&gh, 1, 0);
    let gy = mixed_derivative(&gh, 0, 1);
    let rg = inverse_many(&[&gx, &gy]);
    let prod: Vec<f64> = (0..grid.len())
        .map(|k| f1.values()[k] * rg[0].values()[k] + f2.values()[k] * rg[1].values()[k])
        .collect();
    let prod_hat = RealField::from_values(grid, prod)?.forward();
    let mut lhs = 0.0_f64;
    for (bx, by) in [(3, 0), (2, 1), (1, 2), (0, 3)] {
        let d_prod = mixed_derivative(&prod_hat, bx, by).inverse();
        let dg = mixed_derivative(&gh, bx, by);
        let dgr = inverse_many(&[&mixed_derivative(&dg, 1, 0), &mixed_derivative(&dg, 0, 1)]);
        let vals: Vec<f64> = (0..grid.len())
            .map(|k| {
                d_prod.values()[k]
                    - (f1.values()[k] * dgr[0].values()[k] + f2.values()[k] * dgr[1].values()[k])
            })
            .collect();
        lhs = lhs.max(lp_norm(&RealField::from_values(grid, vals)?, exps.p)?);
    }
    let grad_f = [
        mixed_derivative(&fh1, 1, 0),
        mixed_derivative(&fh1, 0, 1),
        mixed_derivative(&fh2, 1, 0),
        mixed_derivative(&fh2, 0, 1),
    ];
    let grad_f_norm = sobolev_wsp(&grad_f.iter().collect::<Vec<_>>(), 0, exps.p1)?;
    let grad_g_w2 = sobolev_wsp(&[&gx, &gy], 2, exps.p2)?;
    let f_w3 = sobolev_wsp(&[&fh1, &fh2], 3, exps.p3)?;
    let grad_g = sobolev_wsp(&[&gx, &gy], 0, exps.p4)?;
    ratio(lhs, grad_f_norm * grad_g_w2 + f_w3 * grad_g)
}

/// Dispatch on `kind` with [`InequalityKind::arity`] scalar inputs; the
/// commutator takes `(f1, f2, g)` with default exponents.
pub fn check_inequality(
    kind: InequalityKind,
    inputs: &[&RealField],
) -> Result<f64, InequalityError> {
    if inputs.len() != kind.arity() {
        return Err(InequalityError::Invalid(format!(
            "{kind} takes {} fields, got {}",
            kind.arity(),
            inputs.len()
        )));
    }
    match kind {
        InequalityKind::TrilinearAniso => trilinear_aniso(inputs[0], inputs[1], inputs[2]),
        InequalityKind::Interp1d => interp_1d(inputs[0]),
        InequalityKind::SliceSup => slice_sup(inputs[0]),
        InequalityKind::DpLinftyX => dp_linfty(inputs[0], Axis::X),
        InequalityKind::DpLinftyY => dp_linfty(inputs[0], Axis::Y),
        InequalityKind::LogSobolev => log_sobolev(inputs[0]),
        InequalityKind::Ladyzhenskaya => ladyzhenskaya(inputs[0]),
        InequalityKind::Commutator => commutator(
            inputs[0],
            inputs[1],
            inputs[2],
            &CommutatorExponents::default(),
        ),
    }
}
