//! Smoothing of initial data by a scaled radial bump.
//!
//! The profile is `ψ(x) = c exp(-1/(1-|x|^2))` on the unit disk. The
//! convolution is applied as a Fourier multiplier using the exact transform
//! of the profile, `ψ̂(κ) = 2π c ∫_0^1 e^{-1/(1-r^2)} J0(κ r) r dr`, so widths
//! below the grid spacing are handled without sampling the kernel.

use std::collections::HashMap;

use super::SolverError;
use crate::spectral::{RealField, SpectralField};

const QUADRATURE_NODES: usize = 160;

/// Unnormalized bump, zero outside the unit disk.
pub fn bump(r: f64) -> f64 {
    if r.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r * r)).exp()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Debug, Clone)]
pub struct MollifierSpec {
    epsilon: f64,
    radii: Vec<f64>,
    // 2π c w_i r_i ψ(r_i), so that the transform is a plain weighted sum
    weights: Vec<f64>,
    normalization: f64,
}

impl MollifierSpec {
    pub fn new(epsilon: f64) -> Result<Self, SolverError> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(SolverError::Mollifier(format!(
                "width {epsilon} must be positive and finite"
            )));
        }
        let (x, w) = gauss_legendre(QUADRATURE_NODES);
        let radii: Vec<f64> = x.iter().map(|v| 0.5 * (v + 1.0)).collect();
        let raw: Vec<f64> = radii
            .iter()
            .zip(&w)
            .map(|(r, wi)| std::f64::consts::TAU * 0.5 * wi * r * bump(*r))
            .collect();
        let mass: f64 = raw.iter().sum();
        Ok(Self {
            epsilon,
            radii,
            weights: raw.iter().map(|v| v / mass).collect(),
            normalization: 1.0 / mass,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Unit-mass profile `ψ(|x|)` on the unit disk.
    pub fn profile(&self, r: f64) -> f64 {
        self.normalization * bump(r)
    }

    /// Scaled kernel `ψ_ε(x) = ε^-2 ψ(|x|/ε)`.
    pub fn kernel(&self, r: f64) -> f64 {
        self.profile(r / self.epsilon) / (self.epsilon * self.epsilon)
    }

    /// Fourier transform of the unit profile at radial wavenumber `κ`,
    /// equal to 1 at `κ = 0`.
    pub fn transform(&self, kappa: f64) -> f64 {
        if kappa == 0.0 {
            return 1.0;
        }
        self.radii
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| w * libm::j0(kappa * r))
            .sum()
    }

    /// Multiplier of the scaled kernel at physical wavenumber `|k|`.
    pub fn multiplier(&self, k: f64) -> f64 {
        self.transform(self.epsilon * k)
    }
}

/// Periodic convolution `ψ_ε * f`.
pub fn mollify_initial_data(f: &RealField, spec: &MollifierSpec) -> Result<RealField, SolverError> {
    Ok(mollify_spectral(&f.forward(), spec)?.inverse())
}

pub(crate) fn mollify_spectral(
    f: &SpectralField,
    spec: &MollifierSpec,
) -> Result<SpectralField, SolverError> {
    let g = f.grid();
    let limit = 0.5 * g.lx().min(g.ly());
    if spec.epsilon >= limit {
        return Err(SolverError::Mollifier(format!(
            "width {} must be below half the shortest side ({limit})",
            spec.epsilon
        )));
    }
    let mut cache: HashMap<u64, f64> = HashMap::new();
    Ok(f.apply_symbol(|kx, ky| {
        let k2 = kx * kx + ky * ky;
        *cache
            .entry(k2.to_bits())
            .or_insert_with(|| spec.multiplier(k2.sqrt()))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{l2_spectral, lp_norm, Grid};

    #[test]
    fn quadrature_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(7);
        let sum: f64 = w.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let x12: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((x12 - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn unit_mass_by_cartesian_sum() {
        // trapezoid on a square lattice converges faster than any power for
        // a smooth compactly supported integrand
        let spec = MollifierSpec::new(0.3).unwrap();
        let n = 400;
        let h = 2.0 / n as f64;
        let mut mass = 0.0;
        for a in 0..=n {
            for b in 0..=n {
                let (x, y) = (-1.0 + a as f64 * h, -1.0 + b as f64 * h);
                mass += spec.profile((x * x + y * y).sqrt());
            }
        }
        mass *= h * h;
        assert!((mass - 1.0).abs() < 1e-10, "mass {mass}");
        assert!(spec.profile(1.0) == 0.0 && spec.profile(0.0) > 0.0);
    }

    #[test]
    fn transform_matches_cartesian_sum() {
        let spec = MollifierSpec::new(1.0).unwrap();
        let n = 400;
        let h = 2.0 / n as f64;
        for kappa in [0.5, 3.0, 10.0] {
            let mut s = 0.0;
            for a in 0..=n {
                for b in 0..=n {
                    let (x, y) = (-1.0 + a as f64 * h, -1.0 + b as f64 * h);
                    s += spec.profile((x * x + y * y).sqrt()) * (kappa * x).cos();
                }
            }
            s *= h * h;
            assert!((s - spec.transform(kappa)).abs() < 1e-10, "κ = {kappa}");
        }
    }

    #[test]
    fn constant_is_preserved() {
        let g = Grid::square(16).unwrap();
        let c = RealField::from_fn(&g, |_, _| 2.5);
        let out = mollify_initial_data(&c, &MollifierSpec::new(0.5).unwrap()).unwrap();
        assert!(out.values().iter().all(|v| (v - 2.5).abs() < 1e-14));
    }

    #[test]
    fn converges_monotonically_and_contracts() {
        let g = Grid::square(64).unwrap();
        let f = RealField::from_fn(&g, |x, y| {
            (x + y).sin() + 0.5 * (3.0 * x).cos() * (2.0 * y).sin()
        });
        let base = lp_norm(&f, 2.0).unwrap();
        let mut prev = f64::INFINITY;
        for eps in [0.5, 0.25, 0.125] {
            let m = mollify_initial_data(&f, &MollifierSpec::new(eps).unwrap()).unwrap();
            let vals: Vec<f64> = m
                .values()
                .iter()
                .zip(f.values())
                .map(|(a, b)| a - b)
                .collect();
            let d = lp_norm(&RealField::from_values(&g, vals).unwrap(), 2.0).unwrap();
            assert!(d < prev);
            prev = d;
            assert!(lp_norm(&m, 2.0).unwrap() <= base);
            assert!((m.mean() - f.mean()).abs() < 1e-14);
        }
    }

    #[test]
    fn sub_grid_width_and_torus_limit() {
        let g = Grid::square(16).unwrap();
        let f = RealField::from_fn(&g, |x, _| x.sin()).forward();
        let tiny = mollify_spectral(&f, &MollifierSpec::new(1e-4).unwrap()).unwrap();
        assert!((l2_spectral(&tiny) - l2_spectral(&f)).abs() < 1e-7);
        assert!(mollify_spectral(&f, &MollifierSpec::new(3.2).unwrap()).is_err());
        assert!(MollifierSpec::new(0.0).is_err());
    }
}
