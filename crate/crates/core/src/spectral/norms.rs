//! Norm quadratures on the periodic box.
//!
//! `L^p` norms use equal-weight collocation sums, which for `p = 2` agree
//! with the spectral (Parseval) sum up to rounding. Sobolev norms are
//! computed from the coefficients directly.

use super::{RealField, SpectralError, SpectralField};

/// Largest Sobolev index accepted by [`hs_norm`].
pub const MAX_SOBOLEV_INDEX: f64 = 4.0;

/// `(dx dy sum |f|^p)^(1/p)`, or `max |f|` for `p = ∞`.
pub fn lp_norm(f: &RealField, p: f64) -> Result<f64, SpectralError> {
    let g = f.grid();
    lp_of_magnitudes(f.values().iter().map(|v| v.abs()), g.dx() * g.dy(), p)
}

/// `L^p` norm of the pointwise Euclidean length of a vector field.
pub fn lp_norm_vec(components: &[&RealField], p: f64) -> Result<f64, SpectralError> {
    let first = components.first().ok_or(SpectralError::Length {
        expected: 1,
        found: 0,
    })?;
    let g = first.grid();
    let n = g.len();
    let mag = (0..n).map(|idx| {
        components
            .iter()
            .map(|c| c.values()[idx] * c.values()[idx])
            .sum::<f64>()
            .sqrt()
    });
    lp_of_magnitudes(mag, g.dx() * g.dy(), p)
}

fn lp_of_magnitudes(
    mags: impl Iterator<Item = f64> + Clone,
    cell: f64,
    p: f64,
) -> Result<f64, SpectralError> {
    if p.is_nan() || p < 1.0 {
        return Err(SpectralError::Exponent(p));
    }
    let peak = mags.clone().fold(0.0_f64, f64::max);
    if p.is_infinite() || peak == 0.0 {
        return Ok(peak);
    }
    // scale by the peak so large p neither overflows nor underflows to zero
    let inv = 1.0 / peak;
    let sum: f64 = if p.fract() == 0.0 && p <= i32::MAX as f64 {
        let e = p as i32;
        mags.map(|m| (m * inv).powi(e)).sum()
    } else {
        mags.map(|m| (m * inv).powf(p)).sum()
    };
    Ok(peak * (cell * sum).powf(1.0 / p))
}

/// `(area * sum (1 + |k|^2)^s |c_k|^2)^(1/2)`; `s = 0` gives the `L^2` norm.
pub fn hs_norm(f: &SpectralField, s: f64) -> Result<f64, SpectralError> {
    if !(0.0..=MAX_SOBOLEV_INDEX).contains(&s) {
        return Err(SpectralError::SobolevIndex(s));
    }
    let g = f.grid();
    let sum: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| (1.0 + g.k2(idx)).powf(s) * c.norm_sqr())
        .sum();
    Ok((g.area() * sum).sqrt())
}

/// `L^2` norm by Parseval.
pub fn l2_spectral(f: &SpectralField) -> f64 {
    (f.grid().area() * f.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
}

/// `∫ f g` by Parseval.
pub fn inner_spectral(f: &SpectralField, g: &SpectralField) -> f64 {
    f.grid().area()
        * f.coeffs()
            .iter()
            .zip(g.coeffs())
            .map(|(a, b)| (a * b.conj()).re)
            .sum::<f64>()
}

/// `area * sum w(k) |c_k|^2` for a weight depending on the physical wavenumber.
pub fn weighted_square_sum(f: &SpectralField, weight: impl Fn(f64, f64) -> f64) -> f64 {
    let g = f.grid();
    let nx = g.nx();
    let mut sum = 0.0;
    for (idx, c) in f.coeffs().iter().enumerate() {
        let n2 = c.norm_sqr();
        if n2 != 0.0 {
            sum += weight(g.kx()[idx % nx], g.ky()[idx / nx]) * n2;
        }
    }
    g.area() * sum
}
