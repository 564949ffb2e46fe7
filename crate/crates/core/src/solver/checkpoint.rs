//! Binary state snapshot.
//!
//! Layout, all little-endian: magic `MHD2`, one version byte, `nx` and `ny`
//! as `u32`, `t` as `f64`, then the `ω̂` and `ĵ` coefficients as `(re, im)`
//! `f64` pairs in row-major order. Domain lengths are not stored.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{MhdState, SolverError};
use crate::spectral::{make_grid, SpectralField};

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"MHD2";
pub const CHECKPOINT_VERSION: u8 = 1;

pub fn write_checkpoint(mut out: impl Write, state: &MhdState) -> Result<(), SolverError> {
    let g = state.grid();
    let mut buf = Vec::with_capacity(17 + 32 * g.len());
    buf.extend_from_slice(CHECKPOINT_MAGIC);
    buf.push(CHECKPOINT_VERSION);
    buf.extend_from_slice(&(g.nx() as u32).to_le_bytes());
    buf.extend_from_slice(&(g.ny() as u32).to_le_bytes());
    buf.extend_from_slice(&state.t().to_le_bytes());
    for f in [state.omega_hat(), state.j_hat()] {
        for c in f.coeffs() {
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

/// Read a snapshot onto a box of side lengths `(lx, ly)`.
pub fn read_checkpoint(mut input: impl Read, lengths: (f64, f64)) -> Result<MhdState, SolverError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let bad = |msg: &str| SolverError::Checkpoint(msg.to_string());
    if bytes.len() < 21 {
        return Err(bad("truncated header"));
    }
    if &bytes[..4] != CHECKPOINT_MAGIC {
        return Err(bad("bad magic"));
    }
    if bytes[4] != CHECKPOINT_VERSION {
        return Err(SolverError::Checkpoint(format!(
            "unsupported version {}",
            bytes[4]
        )));
    }
    let word =
        |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes")) as usize;
    let float = |at: usize| f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
    let (nx, ny) = (word(5), word(9));
    let t = float(13);
    let grid = make_grid(nx, ny, lengths.0, lengths.1)?;
    let n = grid.len();
    if bytes.len() != 21 + 32 * n {
        return Err(SolverError::Checkpoint(format!(
            "expected {} bytes for a {nx}x{ny} grid, found {}",
            21 + 32 * n,
            bytes.len()
        )));
    }
    let read_field = |start: usize| -> Result<SpectralField, SolverError> {
        let coeffs = (0..n)
            .map(|i| Complex64::new(float(start + 16 * i), float(start + 16 * i + 8)))
            .collect();
        Ok(SpectralField::from_coeffs(&grid, coeffs)?)
    };
    let w = read_field(21)?;
    let j = read_field(21 + 16 * n)?;
    MhdState::new(w, j, t)
}

pub fn save_checkpoint(path: &Path, state: &MhdState) -> Result<(), SolverError> {
    let file = std::fs::File::create(path)?;
    write_checkpoint(std::io::BufWriter::new(file), state)
}

pub fn load_checkpoint(path: &Path, lengths: (f64, f64)) -> Result<MhdState, SolverError> {
    read_checkpoint(std::fs::File::open(path)?, lengths)
}
