//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use mhdlab::solver::{initial_state, InitialData, MhdState};
use mhdlab::spectral::Grid;

pub fn grid(n: usize) -> Arc<Grid> {
    Grid::square(n).expect("even size")
}

/// Unit-RMS random vorticity and current with band limit 8.
pub fn random_state(n: usize, seed: u64) -> MhdState {
    let data = InitialData::Random {
        seed,
        band_limit: 8,
        alpha: 1.0,
    };
    initial_state(&grid(n), &data, 1.0, None).expect("valid data")
}
