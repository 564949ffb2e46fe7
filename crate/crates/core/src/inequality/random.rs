use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::InequalityError;
use crate::spectral::{Grid, RealField, SpectralField};

/// Band-limited Gaussian random field family.
///
/// Modes with `|kx|, |ky| <= band_limit` (integer indices) get independent
/// complex Gaussian coefficients scaled by `(1 + |k|)^(-spectrum_decay)`;
/// the result is normalized to unit root-mean-square. Draws happen in a
/// fixed mode order, so a spec describes the same function on every grid
/// that resolves its band.
#[derive(Debug, Clone)]
pub struct RandomFieldSpec {
    pub grid: Arc<Grid>,
    pub band_limit: usize,
    pub spectrum_decay: f64,
    pub seed: u64,
    pub mean_zero: bool,
}

impl RandomFieldSpec {
    pub fn new(grid: &Arc<Grid>, band_limit: usize, spectrum_decay: f64, seed: u64) -> Self {
        Self {
            grid: Arc::clone(grid),
            band_limit,
            spectrum_decay,
            seed,
            mean_zero: true,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn on_grid(&self, grid: &Arc<Grid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), InequalityError> {
        let (cx, cy) = self.grid.dealias_cutoff();
        let limit = cx.min(cy) as usize;
        if self.band_limit == 0 || self.band_limit > limit {
            return Err(InequalityError::BandLimit {
                band_limit: self.band_limit,
                cutoff: limit,
            });
        }
        if !(self.spectrum_decay.is_finite() && self.spectrum_decay >= 0.0) {
            return Err(InequalityError::Invalid(format!(
                "spectrum decay {} must be finite and nonnegative",
                self.spectrum_decay
            )));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer; derives independent sub-seeds from one seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sample_spectral(spec: &RandomFieldSpec) -> Result<SpectralField, InequalityError> {
    spec.validate()?;
    let g = &spec.grid;
    let b = spec.band_limit as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); g.len()];
    let (nx, ny) = (g.nx() as i64, g.ny() as i64);
    let at = |kx: i64, ky: i64| (ky.rem_euclid(ny) * nx + kx.rem_euclid(nx)) as usize;
    for ky in 0..=b {
        for kx in -b..=b {
            let upper = ky > 0 || kx > 0;
            let origin = kx == 0 && ky == 0;
            if !upper && !origin {
                continue;
            }
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let amp = (1.0 + ((kx * kx + ky * ky) as f64).sqrt()).powf(-spec.spectrum_decay);
            if origin {
                if !spec.mean_zero {
                    coeffs[0] = Complex64::new(amp * re, 0.0);
                }
                continue;
            }
            let c = amp * Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
            coeffs[at(kx, ky)] = c;
            coeffs[at(-kx, -ky)] = c.conj();
        }
    }
    let f = SpectralField::from_coeffs(g, coeffs)?;
    let rms = f.rms();
    Ok(if rms > 0.0 { f.scaled(1.0 / rms) } else { f })
}

pub fn sample_field(spec: &RandomFieldSpec) -> Result<RealField, InequalityError> {
    Ok(sample_spectral(spec)?.inverse())
}
