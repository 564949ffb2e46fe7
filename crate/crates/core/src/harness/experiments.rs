use std::sync::Arc;

use super::{HarnessError, RunConfig};
use crate::solver::{
    initial_state, integrate, mollify_spectral, MhdParams, MhdState, MollifierSpec,
};
use crate::spectral::{curl, l2_spectral, Grid, SpectralField};

/// Exchange the coordinates at the level of the vector fields:
/// `U1(x,y) = u2(y,x)`, `U2(x,y) = u1(y,x)`, and the same for `b`; the
/// transposition acts on the Fourier coefficients, so it is exact.
/// The curls come out as `Ω(x,y) = -ω(y,x)`, `J(x,y) = -j(y,x)`.
pub fn swap_state(state: &MhdState) -> Result<MhdState, HarnessError> {
    let (u1, u2) = state.velocity();
    let (b1, b2) = state.magnetic();
    let (su1, su2) = (u2.transposed()?, u1.transposed()?);
    let (sb1, sb2) = (b2.transposed()?, b1.transposed()?);
    let w = curl(&su1, &su2);
    let j = curl(&sb1, &sb2);
    Ok(MhdState::new(w, j, state.t())?)
}

fn l2_pair_distance(a: &MhdState, b: &MhdState) -> f64 {
    l2_spectral(&a.omega_hat().sub(b.omega_hat())) + l2_spectral(&a.j_hat().sub(b.j_hat()))
}

/// Run the config's coefficients on the configured data and the swapped
/// coefficients on the swapped data; return the largest
/// `‖Δω‖₂ + ‖Δj‖₂` between the first run and the swapped-back second run
/// over the recorded times.
pub fn swap_symmetry_experiment(config: &RunConfig) -> Result<f64, HarnessError> {
    let grid = config.grid()?;
    if grid.nx() != grid.ny() || grid.lx() != grid.ly() {
        return Err(HarnessError::Experiment(
            "swap test needs a square grid with Lx = Ly".into(),
        ));
    }
    let mollifier = (config.mollifier_epsilon > 0.0)
        .then(|| MollifierSpec::new(config.mollifier_epsilon))
        .transpose()?;
    let s0 = initial_state(
        &grid,
        &config.initial_data,
        config.amplitude,
        mollifier.as_ref(),
    )?;
    let swapped0 = swap_state(&s0)?;
    let mut direct = Vec::new();
    let mut mirrored = Vec::new();
    let run = |s: MhdState, p: MhdParams, store: &mut Vec<MhdState>| {
        integrate(
            s,
            p,
            config.dt,
            config.t_end,
            config.diagnostics_interval,
            &[],
            |st| store.push(st.clone()),
        )
    };
    let a = run(s0, config.params, &mut direct)?;
    let b = run(swapped0, config.params.swapped(), &mut mirrored)?;
    for out in [&a, &b] {
        if let Some(e) = &out.error {
            return Err(HarnessError::Experiment(format!("swap run failed: {e}")));
        }
    }
    let mut worst = 0.0_f64;
    for (x, y) in direct.iter().zip(&mirrored) {
        worst = worst.max(l2_pair_distance(x, &swap_state(y)?));
    }
    Ok(worst)
}

/// `(‖u - u'‖₂² + ‖b - b'‖₂²)^(1/2)` computed from the curls.
pub fn velocity_field_distance(a: &MhdState, b: &MhdState) -> f64 {
    let dw = a.omega_hat().sub(b.omega_hat());
    let dj = a.j_hat().sub(b.j_hat());
    let g = a.grid();
    let sum = |f: &SpectralField| {
        f.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.norm_sqr() / g.k2(i))
            .sum::<f64>()
    };
    (g.area() * (sum(&dw) + sum(&dj))).sqrt()
}

/// Check a ladder for the library entry point: at least two positive
/// entries, non-increasing.
pub fn validate_eps_ladder(ladder: &[f64]) -> Result<(), HarnessError> {
    if ladder.len() < 2 {
        return Err(HarnessError::Experiment(
            "eps ladder needs at least two entries".into(),
        ));
    }
    if ladder.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(HarnessError::Experiment(
            "eps ladder entries must be positive".into(),
        ));
    }
    if ladder.windows(2).any(|w| w[1] > w[0]) {
        return Err(HarnessError::Experiment(
            "eps ladder must be non-increasing".into(),
        ));
    }
    Ok(())
}

/// For each `ε` on the ladder, run the `ε`-regularized system with
/// `ψ_ε`-mollified data; return `(ε_i, ‖(u,b)_{ε_i} - (u,b)_{ε_{i+1}}‖₂)` at
/// `t_end` for consecutive pairs.
pub fn epsilon_refinement_experiment(
    config: &RunConfig,
    eps_ladder: &[f64],
) -> Result<Vec<(f64, f64)>, HarnessError> {
    validate_eps_ladder(eps_ladder)?;
    let eta = config.params.magnetic_only_eta().ok_or_else(|| {
        HarnessError::Experiment(
            "eps test needs magnetic_only coefficients (nu1 = nu2 = 0, eta1 = eta2 > 0)".into(),
        )
    })?;
    let grid: Arc<Grid> = config.grid()?;
    let raw = initial_state(&grid, &config.initial_data, config.amplitude, None)?;
    let mut finals = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        let spec = MollifierSpec::new(eps)?;
        let w = mollify_spectral(raw.omega_hat(), &spec)?;
        let j = mollify_spectral(raw.j_hat(), &spec)?;
        let s0 = MhdState::new(w, j, 0.0)?;
        let params = MhdParams::magnetic_only(eta).with_epsilon(eps);
        let out = integrate(s0, params, config.dt, config.t_end, usize::MAX, &[], |_| {})?;
        if let Some(e) = out.error {
            return Err(HarnessError::Experiment(format!(
                "run at eps = {eps} failed: {e}"
            )));
        }
        finals.push(out.state);
    }
    Ok(eps_ladder
        .iter()
        .zip(finals.windows(2))
        .map(|(&e, pair)| (e, velocity_field_distance(&pair[0], &pair[1])))
        .collect())
}
