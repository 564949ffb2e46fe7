use std::f64::consts::PI;

use proptest::prelude::*;

use mhdlab::harness::{
    epsilon_refinement_experiment, main_run, parse_config, serialize_config, swap_state,
    swap_symmetry_experiment, ExitStatus, RunConfig,
};
use mhdlab::solver::{
    initial_state, integrate, load_checkpoint, save_checkpoint, InitialData, MhdParams, Preset,
    Solver,
};
use mhdlab::spectral::{l2_spectral, Grid};

fn random(seed: u64) -> InitialData {
    InitialData::Random {
        seed,
        band_limit: 4,
        alpha: 1.0,
    }
}

#[test]
fn restart_from_checkpoint_matches_uninterrupted_run() {
    let g = Grid::square(32).unwrap();
    let p = MhdParams::new(0.01, 0.02, 0.03, 0.01).unwrap();
    let s0 = initial_state(&g, &random(4), 1.0, None).unwrap();
    let mut solver = Solver::new(&g, p).unwrap();
    let mut a = s0.clone();
    for _ in 0..20 {
        a = solver.step(&a, 1e-2).unwrap();
    }
    let mut b = s0;
    for _ in 0..10 {
        b = solver.step(&b, 1e-2).unwrap();
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mid.mhd2");
    save_checkpoint(&path, &b).unwrap();
    let mut b = load_checkpoint(&path, (2.0 * PI, 2.0 * PI)).unwrap();
    for _ in 0..10 {
        b = solver.step(&b, 1e-2).unwrap();
    }
    assert_eq!(a.omega_hat().coeffs(), b.omega_hat().coeffs());
    assert_eq!(a.j_hat().coeffs(), b.j_hat().coeffs());
}

#[test]
fn swap_round_trip_and_trivial_cases() {
    let g = Grid::square(32).unwrap();
    let s = initial_state(&g, &InitialData::Mixed, 1.0, None).unwrap();
    let back = swap_state(&swap_state(&s).unwrap()).unwrap();
    let scale = l2_spectral(s.omega_hat()) + l2_spectral(s.j_hat());
    let diff = l2_spectral(&back.omega_hat().sub(s.omega_hat()))
        + l2_spectral(&back.j_hat().sub(s.j_hat()));
    assert!(diff <= 1e-14 * scale, "{diff:e}");

    let mut c = RunConfig::new(32, MhdParams::mixed_case_b(0.01, 0.01), 1e-2, 0.0)
        .with_initial_data(InitialData::Mixed);
    assert!(swap_symmetry_experiment(&c).unwrap() <= 1e-14);
    c.t_end = 0.2;
    c.initial_data = InitialData::Zero;
    assert_eq!(swap_symmetry_experiment(&c).unwrap(), 0.0);
    let mut rect = c.clone();
    rect.ny = 16;
    assert!(swap_symmetry_experiment(&rect).is_err());
}

#[test]
fn swap_of_mixed_data_is_exact() {
    let c = RunConfig::new(64, MhdParams::mixed_case_b(0.01, 0.01), 2e-3, 0.5)
        .with_initial_data(InitialData::Mixed);
    assert!(swap_symmetry_experiment(&c).unwrap() <= 1e-10);
}

#[test]
fn eps_ladder_edge_cases() {
    let c =
        RunConfig::new(32, MhdParams::magnetic_only(0.1), 1e-2, 0.2).with_initial_data(random(2));
    let same = epsilon_refinement_experiment(&c, &[0.1, 0.1]).unwrap();
    assert_eq!(same, vec![(0.1, 0.0)]);
    let three = epsilon_refinement_experiment(&c, &[0.1, 0.05, 0.025]).unwrap();
    assert_eq!(three.len(), 2);
    assert!(three[1].1 < three[0].1);
    assert!(epsilon_refinement_experiment(&c, &[0.1]).is_err());
    let wrong = RunConfig {
        params: MhdParams::ideal(),
        ..c
    };
    assert!(epsilon_refinement_experiment(&wrong, &[0.1, 0.05]).is_err());
}

#[test]
fn magnetic_only_run_passes_its_monitor() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = RunConfig::new(32, MhdParams::magnetic_only(0.1), 5e-3, 0.5)
        .with_preset(Preset::MagneticOnly, 0.0, 0.1)
        .with_initial_data(random(8));
    c.output_dir = dir.path().to_path_buf();
    let report = main_run(&c);
    assert_eq!(report.status, ExitStatus::Success, "{:?}", report.message);
    let s = report.summary.unwrap();
    assert!(s.monitors["prop33"].value.unwrap() <= 1.0 + 1e-3);
    assert!(s.regularity.is_some());
}

#[test]
fn fourth_order_on_nonlinear_flow() {
    // self-convergence on the mixed flow against a much finer run
    let g = Grid::square(32).unwrap();
    let p = MhdParams::new(0.02, 0.01, 0.01, 0.02).unwrap();
    let s0 = initial_state(&g, &InitialData::Mixed, 1.0, None).unwrap();
    let end = |dt: f64| {
        let out = integrate(s0.clone(), p, dt, 0.5, usize::MAX, &[], |_| {}).unwrap();
        assert!(out.error.is_none(), "dt = {dt}: {:?}", out.error);
        out.state
    };
    let reference = end(0.025 / 16.0);
    let err = |dt: f64| {
        let s = end(dt);
        l2_spectral(&s.omega_hat().sub(reference.omega_hat()))
            + l2_spectral(&s.j_hat().sub(reference.j_hat()))
    };
    let (e1, e2) = (err(0.025), err(0.0125));
    let ratio = e1 / e2;
    assert!((ratio / 16.0 - 1.0).abs() < 0.15, "{e1:e} {e2:e} {ratio}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn config_round_trip(
        n in prop::sample::select(vec![16usize, 32, 64]),
        dt in 1e-4f64..1e-1,
        t_end in 0.0f64..10.0,
        nu in 1e-4f64..1.0,
        eta in 1e-4f64..1.0,
        preset in prop::sample::select(Preset::ALL.to_vec()),
        seed in any::<u64>(),
        interval in 1usize..100,
    ) {
        let mut cfg = RunConfig::new(n, MhdParams::ideal(), dt, t_end).with_preset(preset, nu, eta);
        cfg.set_seed(seed);
        cfg.diagnostics_interval = interval;
        cfg.initial_data = InitialData::Random { seed, band_limit: 3, alpha: 1.5 };
        let text = serialize_config(&cfg);
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(parse_config(&serialize_config(&back)).unwrap(), back);
    }
}
