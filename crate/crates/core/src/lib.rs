//! Pseudo-spectral solver for two-dimensional incompressible MHD with
//! anisotropic dissipation, run diagnostics and a priori bound monitors,
//! and randomized checks of the functional inequalities behind them.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod harness;
pub mod inequality;
pub mod solver;
pub mod spectral;
