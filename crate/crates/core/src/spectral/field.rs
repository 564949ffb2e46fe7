use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Self {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

/// Scalar field sampled at the collocation points of a [`Grid`].
#[derive(Debug, Clone)]
pub struct RealField {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

/// Fourier-series coefficients of a real scalar field.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl RealField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_values(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.len() {
            return Err(SpectralError::Length {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(Self {
            grid: Arc::clone(grid),
            values,
        })
    }

    /// Sample `f(x, y)` at every collocation point.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            let y = grid.y(j);
            for i in 0..grid.nx() {
                values.push(f(grid.x(i), y));
            }
        }
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub(crate) fn from_raw(grid: &Arc<Grid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx() + i]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Field sampled with the roles of `x` and `y` exchanged:
    /// `out(x, y) = self(y, x)`. Needs a square grid.
    pub fn transposed(&self) -> Result<Self, SpectralError> {
        let g = &self.grid;
        if g.nx() != g.ny() || g.lx() != g.ly() {
            return Err(SpectralError::NotSquare);
        }
        let n = g.nx();
        let mut values = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                values[i * n + j] = self.values[j * n + i];
            }
        }
        Ok(Self {
            grid: Arc::clone(g),
            values,
        })
    }

    pub fn forward(&self) -> SpectralField {
        let mut data: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        self.grid.fft.forward(&mut data);
        SpectralField::from_raw(&self.grid, data).hermitian()
    }
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Wrap coefficients; they must be conjugate-symmetric to 1e-12 relative.
    pub fn from_coeffs(grid: &Arc<Grid>, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.len() {
            return Err(SpectralError::Length {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        if coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(SpectralError::NonFinite);
        }
        let field = Self::from_raw(grid, coeffs);
        let asym = field.hermitian_defect();
        if asym > 1e-12 * field.rms().max(f64::MIN_POSITIVE) {
            return Err(SpectralError::NotHermitian(asym));
        }
        Ok(field)
    }

    pub(crate) fn from_raw(grid: &Arc<Grid>, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self {
            grid: Arc::clone(grid),
            coeffs,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of the mode with signed indices `(kx, ky)`.
    pub fn mode(&self, kx: i64, ky: i64) -> Complex64 {
        let nx = self.grid.nx() as i64;
        let ny = self.grid.ny() as i64;
        let i = kx.rem_euclid(nx) as usize;
        let j = ky.rem_euclid(ny) as usize;
        self.coeffs[j * self.grid.nx() + i]
    }

    /// Mean of the represented field (the `k = 0` coefficient).
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// `(sum |c_k|^2)^(1/2)`, the root-mean-square of the represented field.
    pub fn rms(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_k |c_k - conj(c_{-k})|`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|idx| (self.coeffs[idx] - self.coeffs[self.grid.mirror(idx)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Project onto exactly conjugate-symmetric coefficients. The Nyquist
    /// row and column have no partner inside the kept band and are left
    /// with their real part only where they are self-conjugate.
    pub(crate) fn hermitian(mut self) -> Self {
        for idx in 0..self.coeffs.len() {
            let m = self.grid.mirror(idx);
            if m > idx {
                let avg = 0.5 * (self.coeffs[idx] + self.coeffs[m].conj());
                self.coeffs[idx] = avg;
                self.coeffs[m] = avg.conj();
            } else if m == idx {
                self.coeffs[idx].im = 0.0;
            }
        }
        self
    }

    pub fn inverse(&self) -> RealField {
        let mut data = self.coeffs.clone();
        self.grid.fft.inverse(&mut data);
        RealField::from_raw(&self.grid, data.into_iter().map(|c| c.re).collect())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &SpectralField) -> Self {
        debug_assert!(self.grid.same_shape(&other.grid));
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SpectralField) -> Self {
        debug_assert!(self.grid.same_shape(&other.grid));
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Multiply each coefficient by a real symbol of the physical wavenumber.
    pub fn apply_symbol(&self, mut symbol: impl FnMut(f64, f64) -> f64) -> Self {
        let g = &self.grid;
        let mut coeffs = self.coeffs.clone();
        for (j, &ky) in g.ky().iter().enumerate() {
            for (i, &kx) in g.kx().iter().enumerate() {
                coeffs[j * g.nx() + i] *= symbol(kx, ky);
            }
        }
        Self {
            grid: Arc::clone(g),
            coeffs,
        }
    }

    /// Coefficients of `f(y, x)`: `ĉ(kx, ky) -> ĉ(ky, kx)`, exact.
    /// Needs a square grid.
    pub fn transposed(&self) -> Result<Self, SpectralError> {
        let g = &self.grid;
        if g.nx() != g.ny() || g.lx() != g.ly() {
            return Err(SpectralError::NotSquare);
        }
        let n = g.nx();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                coeffs[i * n + j] = self.coeffs[j * n + i];
            }
        }
        Ok(Self {
            grid: Arc::clone(g),
            coeffs,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Inverse-transform several fields, two per complex FFT.
///
/// For real fields `a`, `b` the inverse of `A + iB` is `a + ib`.
pub fn inverse_many(fields: &[&SpectralField]) -> Vec<RealField> {
    let mut out = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        match pair {
            [a, b] => {
                let grid = a.grid();
                let mut data: Vec<Complex64> = a
                    .coeffs
                    .iter()
                    .zip(&b.coeffs)
                    .map(|(ca, cb)| ca + Complex64::i() * cb)
                    .collect();
                grid.fft.inverse(&mut data);
                out.push(RealField::from_raw(
                    grid,
                    data.iter().map(|c| c.re).collect(),
                ));
                out.push(RealField::from_raw(
                    grid,
                    data.iter().map(|c| c.im).collect(),
                ));
            }
            [a] => out.push(a.inverse()),
            _ => unreachable!(),
        }
    }
    out
}

/// Forward-transform two real fields with one complex FFT.
///
/// With `Z = F(a + ib)`, `A_k = (Z_k + conj Z_-k)/2` and
/// `B_k = (Z_k - conj Z_-k)/(2i)`; both come out exactly conjugate-symmetric.
pub fn forward_pair(a: &RealField, b: &RealField) -> (SpectralField, SpectralField) {
    let grid = a.grid();
    let mut data: Vec<Complex64> = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(&x, &y)| Complex64::new(x, y))
        .collect();
    grid.fft.forward(&mut data);
    let mut ca = vec![Complex64::new(0.0, 0.0); data.len()];
    let mut cb = vec![Complex64::new(0.0, 0.0); data.len()];
    for idx in 0..data.len() {
        let z = data[idx];
        let zm = data[grid.mirror(idx)].conj();
        ca[idx] = 0.5 * (z + zm);
        let d = 0.5 * (z - zm);
        // divide by i
        cb[idx] = Complex64::new(d.im, -d.re);
    }
    (
        SpectralField::from_raw(grid, ca),
        SpectralField::from_raw(grid, cb),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn spectral_transpose_matches_grid_transpose() {
        let g = Grid::square(16).unwrap();
        let f = RealField::from_fn(&g, |x, y| (2.0 * x + y).sin() + (3.0 * y).cos() * x.cos());
        let a = f.forward().transposed().unwrap().inverse();
        let b = f.transposed().unwrap();
        for (p, q) in a.values().iter().zip(b.values()) {
            assert!((p - q).abs() < 1e-14);
        }
        let rect = make_grid(16, 8, 1.0, 1.0).unwrap();
        assert!(SpectralField::zeros(&rect).transposed().is_err());
    }

    #[test]
    fn sine_has_two_coefficients() {
        let g = Grid::square(16).unwrap();
        let f = RealField::from_fn(&g, |x, _| x.sin()).forward();
        assert!((f.mode(1, 0) - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((f.mode(-1, 0) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(f.hermitian_defect() == 0.0);
    }

    #[test]
    fn pair_transforms_match_single() {
        let g = make_grid(16, 8, 3.0, 1.5).unwrap();
        let a = RealField::from_fn(&g, |x, y| {
            (2.0 * PI * x / 3.0).cos() + (4.0 * PI * y / 1.5).sin()
        });
        let b = RealField::from_fn(&g, |x, y| (2.0 * PI * (x / 3.0 + y / 1.5)).sin() + 0.25);
        let (ha, hb) = forward_pair(&a, &b);
        for (p, q) in ha.coeffs().iter().zip(a.forward().coeffs()) {
            assert!((p - q).norm() < 1e-15);
        }
        for (p, q) in hb.coeffs().iter().zip(b.forward().coeffs()) {
            assert!((p - q).norm() < 1e-15);
        }
        let back = inverse_many(&[&ha, &hb, &ha]);
        for (p, q) in back[0].values().iter().zip(a.values()) {
            assert!((p - q).abs() < 1e-14);
        }
        for (p, q) in back[1].values().iter().zip(b.values()) {
            assert!((p - q).abs() < 1e-14);
        }
        assert_eq!(back[2].values(), ha.inverse().values());
    }

    #[test]
    fn transposed_swaps_arguments() {
        let g = Grid::square(8).unwrap();
        let f = RealField::from_fn(&g, |x, y| x.sin() * (2.0 * y).cos());
        let t = f.transposed().unwrap();
        let expect = RealField::from_fn(&g, |x, y| y.sin() * (2.0 * x).cos());
        assert_eq!(t.values(), expect.values());
        let rect = make_grid(8, 16, 1.0, 1.0).unwrap();
        assert!(RealField::zeros(&rect).transposed().is_err());
    }

    #[test]
    fn rejects_asymmetric_coefficients() {
        let g = Grid::square(8).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); g.len()];
        c[1] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            SpectralField::from_coeffs(&g, c),
            Err(SpectralError::NotHermitian(_))
        ));
    }
}
