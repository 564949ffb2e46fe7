//! Batched 2D complex FFT on row-major buffers.
//!
//! The forward transform carries the `1/(nx*ny)` factor so that coefficients
//! are Fourier-series amplitudes: `f(x) = sum_k c_k exp(i k.x)`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Fft2 {
    nx: usize,
    ny: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            ny,
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.fwd_x, &self.fwd_y);
        let scale = 1.0 / (self.nx * self.ny) as f64;
        for c in data.iter_mut() {
            *c *= scale;
        }
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inv_x, &self.inv_y);
    }

    fn run(
        &self,
        data: &mut [Complex64],
        along_x: &Arc<dyn Fft<f64>>,
        along_y: &Arc<dyn Fft<f64>>,
    ) {
        debug_assert_eq!(data.len(), self.nx * self.ny);
        let scratch_len = along_x
            .get_inplace_scratch_len()
            .max(along_y.get_inplace_scratch_len());
        let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
        // rows are contiguous: one batched call transforms all of them
        along_x.process_with_scratch(data, &mut scratch);
        let mut cols = vec![Complex64::new(0.0, 0.0); data.len()];
        transpose(data, &mut cols, self.nx, self.ny);
        along_y.process_with_scratch(&mut cols, &mut scratch);
        transpose(&cols, data, self.ny, self.nx);
    }
}

/// `dst[i * rows + j] = src[j * cols + i]` for a `rows x cols` source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    const BLOCK: usize = 16;
    for jb in (0..rows).step_by(BLOCK) {
        for ib in (0..cols).step_by(BLOCK) {
            for j in jb..(jb + BLOCK).min(rows) {
                for i in ib..(ib + BLOCK).min(cols) {
                    dst[i * rows + j] = src[j * cols + i];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_rectangular() {
        let src: Vec<Complex64> = (0..12).map(|v| Complex64::new(v as f64, 0.0)).collect();
        let mut dst = vec![Complex64::new(0.0, 0.0); 12];
        // 3 rows of 4 columns
        transpose(&src, &mut dst, 4, 3);
        assert_eq!(dst[3 + 2].re, src[2 * 4 + 1].re);
        let mut back = vec![Complex64::new(0.0, 0.0); 12];
        transpose(&dst, &mut back, 3, 4);
        assert_eq!(back, src);
    }

    #[test]
    fn single_mode_lands_in_its_bin() {
        let (nx, ny) = (8, 16);
        let fft = Fft2::new(nx, ny);
        let mut data: Vec<Complex64> = (0..nx * ny)
            .map(|idx| {
                let (i, j) = (idx % nx, idx / nx);
                let phase = 2.0
                    * std::f64::consts::PI
                    * (3.0 * i as f64 / nx as f64 - 2.0 * j as f64 / ny as f64);
                Complex64::from_polar(1.0, phase)
            })
            .collect();
        fft.forward(&mut data);
        for (idx, c) in data.iter().enumerate() {
            let expect = if idx == (ny - 2) * nx + 3 { 1.0 } else { 0.0 };
            assert!(
                (c.re - expect).abs() < 1e-13 && c.im.abs() < 1e-13,
                "idx {idx}: {c}"
            );
        }
    }
}
