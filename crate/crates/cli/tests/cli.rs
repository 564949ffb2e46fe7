use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mhdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhdlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const MAGNETIC: &str =
    "nx = 32\nny = 32\ndt = 2e-3\nt_end = 0.1\npreset = magnetic_only\neta = 0.1\nband_limit = 4\n";

#[test]
fn run_writes_outputs_and_passes_monitor() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.cfg",
        &format!("{MAGNETIC}checkpoint = true\n"),
    );
    let out_dir = dir.path().join("out");
    let out = mhdlab(&[
        "run",
        "--config",
        &cfg,
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in ["diagnostics.csv", "summary.json", "checkpoint.mhd2"] {
        assert!(out_dir.join(f).exists(), "{f} missing");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    let prop33 = summary["monitors"]["prop33"]["value"].as_f64().unwrap();
    assert!(prop33 <= 1.0 + 1e-3);
    assert!(summary["energy_budget_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn same_config_gives_identical_csv_and_seed_changes_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", MAGNETIC);
    let mut csv = Vec::new();
    for (name, seed) in [("a", "1"), ("b", "1"), ("c", "2")] {
        let o = dir.path().join(name);
        let out = mhdlab(&[
            "run",
            "--config",
            &cfg,
            "--output",
            o.to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert!(out.status.success());
        csv.push(fs::read(o.join("diagnostics.csv")).unwrap());
    }
    assert_eq!(csv[0], csv[1]);
    assert_ne!(csv[0], csv[2]);
}

#[test]
fn config_errors_exit_with_status_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.cfg",
        "nx = 32\nny = 32\ndt = -1\nt_end = 1\n",
    );
    let out = mhdlab(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = mhdlab(&["run"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unwritable_output_exits_with_io_status() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", MAGNETIC);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    let out = mhdlab(&[
        "run",
        "--config",
        &cfg,
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn preset_flag_replaces_the_config_preset() {
    let dir = tempfile::tempdir().unwrap();
    let text = "nx = 32\nny = 32\ndt = 2e-3\nt_end = 0.02\npreset = mixed_case_A\nnu = 0.01\neta = 0.02\nband_limit = 4\n";
    let cfg = write_config(dir.path(), "run.cfg", text);
    let o = dir.path().join("o");
    let out = mhdlab(&[
        "run",
        "--config",
        &cfg,
        "--output",
        o.to_str().unwrap(),
        "--preset",
        "mixed_case_B",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(o.join("summary.json")).unwrap()).unwrap();
    let p = &summary["meta"]["params"];
    assert_eq!(p["nu1"].as_f64(), Some(0.01));
    assert_eq!(p["eta2"].as_f64(), Some(0.02));
    let out = mhdlab(&["run", "--config", &cfg, "--preset", "turbulent"]);
    assert!(!out.status.success());
}

#[test]
fn swap_test_reports_small_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let text = "nx = 32\nny = 32\ndt = 2e-3\nt_end = 0.1\npreset = mixed_case_B\nnu = 0.01\neta = 0.01\ninitial_data = mixed\n";
    let cfg = write_config(dir.path(), "swap.cfg", text);
    let o = dir.path().join("o");
    let out = mhdlab(&[
        "swap-test",
        "--config",
        &cfg,
        "--output",
        o.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(o.join("swap_test.json")).unwrap()).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() <= 1e-10);
    let rect = write_config(dir.path(), "rect.cfg", &text.replace("ny = 32", "ny = 16"));
    assert_eq!(
        mhdlab(&["swap-test", "--config", &rect]).status.code(),
        Some(1)
    );
}

#[test]
fn eps_test_needs_three_decreasing_entries() {
    let dir = tempfile::tempdir().unwrap();
    let base = "nx = 32\nny = 32\ndt = 2e-3\nt_end = 0.05\npreset = magnetic_only\neta = 0.1\nband_limit = 4\n";
    let o = dir.path().join("o");
    let short = write_config(
        dir.path(),
        "short.cfg",
        &format!("{base}eps_ladder = 0.2, 0.1\n"),
    );
    assert_eq!(
        mhdlab(&["eps-test", "--config", &short]).status.code(),
        Some(1)
    );
    let flat = write_config(
        dir.path(),
        "flat.cfg",
        &format!("{base}eps_ladder = 0.2, 0.1, 0.1\n"),
    );
    assert_eq!(
        mhdlab(&["eps-test", "--config", &flat]).status.code(),
        Some(1)
    );
    let good = write_config(
        dir.path(),
        "good.cfg",
        &format!("{base}eps_ladder = 0.2, 0.1, 0.05\n"),
    );
    let out = mhdlab(&[
        "eps-test",
        "--config",
        &good,
        "--output",
        o.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(o.join("eps_test.json")).unwrap()).unwrap();
    assert_eq!(v["distances"].as_array().unwrap().len(), 2);
}

#[test]
fn campaign_emits_json_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "camp.cfg",
        "kind = interp_1d, ladyzhenskaya\nnx = 32\nny = 32\nband_limit = 4\nn_samples = 20\n",
    );
    let o = dir.path().join("o");
    let out = mhdlab(&[
        "ineq-campaign",
        "--config",
        &cfg,
        "--output",
        o.to_str().unwrap(),
        "--seed",
        "5",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(o.join("campaign.json")).unwrap()).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["kind"], "interp_1d");
    assert!(reports[0]["max_ratio"].as_f64().unwrap() <= 1.0 + 1e-12);
    assert_eq!(reports[1]["family_seed"], 5);
    let bad = write_config(dir.path(), "bad.cfg", "kind = nothing\n");
    assert_eq!(
        mhdlab(&["ineq-campaign", "--config", &bad]).status.code(),
        Some(1)
    );
}
