use num_complex::Complex64;

use super::{Axis, SpectralError, SpectralField};

/// Highest derivative order supported by [`spectral_derivative`].
pub const MAX_DERIVATIVE_ORDER: u32 = 4;

/// Relative size of the mean mode below which a field counts as mean-zero.
pub const MEAN_ZERO_TOL: f64 = 1e-12;

/// Multiply by `(i k_axis)^order`.
///
/// Odd orders zero the Nyquist line of that axis: its partner mode is not
/// representable, so the only real-valued choice is zero.
pub fn spectral_derivative(
    f: &SpectralField,
    axis: Axis,
    order: u32,
) -> Result<SpectralField, SpectralError> {
    if order == 0 || order > MAX_DERIVATIVE_ORDER {
        return Err(SpectralError::DerivativeOrder(order));
    }
    Ok(derivative_unchecked(f, axis, order))
}

pub(crate) fn derivative_unchecked(f: &SpectralField, axis: Axis, order: u32) -> SpectralField {
    let g = f.grid();
    let (nqx, nqy) = g.nyquist();
    let odd = order % 2 == 1;
    let multiplier = |k: f64, at_nyquist: bool| -> Complex64 {
        if odd && at_nyquist {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, k).powu(order)
    };
    let table: Vec<Complex64> = match axis {
        Axis::X => g
            .kx()
            .iter()
            .enumerate()
            .map(|(i, &k)| multiplier(k, i == nqx))
            .collect(),
        Axis::Y => g
            .ky()
            .iter()
            .enumerate()
            .map(|(j, &k)| multiplier(k, j == nqy))
            .collect(),
    };
    let nx = g.nx();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let m = match axis {
                Axis::X => table[idx % nx],
                Axis::Y => table[idx / nx],
            };
            c * m
        })
        .collect();
    SpectralField::from_raw(g, coeffs)
}

/// Mixed partial `d^ax/dx^ax d^ay/dy^ay`.
pub fn mixed_derivative(f: &SpectralField, ax: u32, ay: u32) -> SpectralField {
    let mut out = f.clone();
    if ax > 0 {
        out = derivative_unchecked(&out, Axis::X, ax);
    }
    if ay > 0 {
        out = derivative_unchecked(&out, Axis::Y, ay);
    }
    out
}

/// Zero every coefficient outside the 2/3-rule band.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(f: &mut SpectralField) {
    let mask = f.grid().dealias_mask().to_vec();
    for (c, keep) in f.coeffs_mut().iter_mut().zip(mask) {
        if !keep {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

pub fn is_mean_zero(f: &SpectralField) -> bool {
    f.coeffs()[0].norm() <= MEAN_ZERO_TOL * f.rms().max(f64::MIN_POSITIVE)
}

/// Solve `Δψ = curl` with `ψ` mean-zero; returns the streamfunction.
pub fn streamfunction(curl: &SpectralField) -> Result<SpectralField, SpectralError> {
    if !is_mean_zero(curl) {
        return Err(SpectralError::NonZeroMean(curl.coeffs()[0].re));
    }
    Ok(inverse_laplacian(curl))
}

pub(crate) fn inverse_laplacian(f: &SpectralField) -> SpectralField {
    let g = f.grid();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let k2 = g.k2(idx);
            if idx == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                -c / k2
            }
        })
        .collect();
    SpectralField::from_raw(g, coeffs)
}

/// Reconstruct a divergence-free vector field from its scalar curl.
///
/// Returns `v = (-ψ_y, ψ_x) + mean` with `Δψ = scalar_curl`, so that
/// `∂x v2 - ∂y v1 = scalar_curl` and `∂x v1 + ∂y v2 = 0`.
pub fn biot_savart(
    scalar_curl: &SpectralField,
    mean: (f64, f64),
) -> Result<(SpectralField, SpectralField), SpectralError> {
    let psi = streamfunction(scalar_curl)?;
    let mut v1 = derivative_unchecked(&psi, Axis::Y, 1).scaled(-1.0);
    let mut v2 = derivative_unchecked(&psi, Axis::X, 1);
    v1.coeffs_mut()[0] = Complex64::new(mean.0, 0.0);
    v2.coeffs_mut()[0] = Complex64::new(mean.1, 0.0);
    Ok((v1, v2))
}

/// Scalar curl `∂x v2 - ∂y v1`.
pub fn curl(v1: &SpectralField, v2: &SpectralField) -> SpectralField {
    derivative_unchecked(v2, Axis::X, 1).sub(&derivative_unchecked(v1, Axis::Y, 1))
}

pub fn divergence(v1: &SpectralField, v2: &SpectralField) -> SpectralField {
    derivative_unchecked(v1, Axis::X, 1).add(&derivative_unchecked(v2, Axis::Y, 1))
}
