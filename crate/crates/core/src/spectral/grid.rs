use std::fmt;
use std::sync::Arc;

use super::fft::Fft2;
use super::SpectralError;

/// Smallest admissible number of collocation points per axis.
pub const MIN_POINTS: usize = 8;

/// Uniform collocation grid on the periodic box `[0, lx) x [0, ly)`.
///
/// Arrays indexed by this grid are row-major with `y` as the slow index:
/// the value at `(x_i, y_j)` lives at `j * nx + i`. Spectral coefficients
/// use the same layout with `i`/`j` the FFT indices of `kx`/`ky`.
pub struct Grid {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    kx_index: Vec<i64>,
    ky_index: Vec<i64>,
    kx: Vec<f64>,
    ky: Vec<f64>,
    cutoff_x: i64,
    cutoff_y: i64,
    mask: Vec<bool>,
    pub(crate) fft: Fft2,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self, SpectralError> {
        for n in [nx, ny] {
            if n < MIN_POINTS || n % 2 != 0 {
                return Err(SpectralError::GridSize(n));
            }
        }
        for l in [lx, ly] {
            if !(l.is_finite() && l > 0.0) {
                return Err(SpectralError::DomainLength(l));
            }
        }
        let kx_index = signed_indices(nx);
        let ky_index = signed_indices(ny);
        let kx = kx_index
            .iter()
            .map(|&k| k as f64 * 2.0 * std::f64::consts::PI / lx)
            .collect();
        let ky = ky_index
            .iter()
            .map(|&k| k as f64 * 2.0 * std::f64::consts::PI / ly)
            .collect();
        let cutoff_x = (nx / 3) as i64;
        let cutoff_y = (ny / 3) as i64;
        let mut mask = vec![false; nx * ny];
        for (j, &qy) in ky_index.iter().enumerate() {
            for (i, &qx) in kx_index.iter().enumerate() {
                mask[j * nx + i] = qx.abs() <= cutoff_x && qy.abs() <= cutoff_y;
            }
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            kx_index,
            ky_index,
            kx,
            ky,
            cutoff_x,
            cutoff_y,
            mask,
            fft: Fft2::new(nx, ny),
        })
    }

    /// Square `2π`-periodic grid, the default domain.
    pub fn square(n: usize) -> Result<Arc<Self>, SpectralError> {
        Self::new(n, n, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).map(Arc::new)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy()
    }

    /// Signed integer wavenumbers along `x` in FFT order.
    pub fn kx_index(&self) -> &[i64] {
        &self.kx_index
    }

    pub fn ky_index(&self) -> &[i64] {
        &self.ky_index
    }

    /// Physical wavenumbers `2π k / L` along `x` in FFT order.
    pub fn kx(&self) -> &[f64] {
        &self.kx
    }

    pub fn ky(&self) -> &[f64] {
        &self.ky
    }

    /// Largest retained `|k|` per axis under the 2/3 rule: `(nx/3, ny/3)`.
    pub fn dealias_cutoff(&self) -> (i64, i64) {
        (self.cutoff_x, self.cutoff_y)
    }

    pub fn dealias_mask(&self) -> &[bool] {
        &self.mask
    }

    /// Index of the Nyquist column (`nx/2`) and row (`ny/2`).
    pub fn nyquist(&self) -> (usize, usize) {
        (self.nx / 2, self.ny / 2)
    }

    /// Flat index of the mode `(-kx, -ky)` given the index of `(kx, ky)`.
    pub fn mirror(&self, idx: usize) -> usize {
        let (i, j) = (idx % self.nx, idx / self.nx);
        let mi = (self.nx - i) % self.nx;
        let mj = (self.ny - j) % self.ny;
        mj * self.nx + mi
    }

    /// `|k|^2` at a flat spectral index.
    pub fn k2(&self, idx: usize) -> f64 {
        let kx = self.kx[idx % self.nx];
        let ky = self.ky[idx / self.nx];
        kx * kx + ky * ky
    }

    /// Grids are interchangeable when sizes and lengths agree exactly.
    pub fn same_shape(&self, other: &Grid) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .finish()
    }
}

/// Build a grid wrapped for sharing between fields.
pub fn make_grid(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Arc<Grid>, SpectralError> {
    Grid::new(nx, ny, lx, ly).map(Arc::new)
}

fn signed_indices(n: usize) -> Vec<i64> {
    (0..n)
        .map(|i| {
            if i < n / 2 {
                i as i64
            } else {
                i as i64 - n as i64
            }
        })
        .collect()
}
