#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mhdlab::harness::{
    epsilon_refinement_experiment, main_run, parse_config, swap_symmetry_experiment, Dissipation,
    ExitStatus, RunConfig,
};
use mhdlab::inequality::{parse_campaign_config, run_campaign, CampaignConfig};
use mhdlab::solver::Preset;

#[derive(Parser)]
#[command(
    name = "mhdlab",
    version,
    about = "2D MHD pseudo-spectral runs and inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write CSV, JSON summary and checkpoint.
    Run(Common),
    /// Compare a run with its axis-swapped counterpart.
    SwapTest(Common),
    /// Run the epsilon-regularized system along a decreasing eps ladder.
    EpsTest(Common),
    /// Sample random fields and report worst-case inequality ratios.
    IneqCampaign(Common),
}

#[derive(Args)]
struct Common {
    /// key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config's output_dir.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Dissipation preset replacing the config's preset; nu and eta are kept.
    #[arg(long)]
    preset: Option<Preset>,
    /// Seed for random initial data or campaign sampling.
    #[arg(long)]
    seed: Option<u64>,
}

/// Failure carrying the process exit status.
struct Failure {
    status: ExitStatus,
    error: anyhow::Error,
}

fn config_error(error: anyhow::Error) -> Failure {
    Failure {
        status: ExitStatus::Config,
        error,
    }
}

fn io_error(error: anyhow::Error) -> Failure {
    Failure {
        status: ExitStatus::Io,
        error,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(io_error)
}

fn load_run_config(c: &Common) -> Result<RunConfig, Failure> {
    let path = c
        .config
        .as_ref()
        .ok_or_else(|| config_error(anyhow::anyhow!("--config is required")))?;
    let text = read(path)?;
    let mut cfg = parse_config(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(config_error)?;
    if let Some(preset) = c.preset {
        cfg = apply_preset(cfg, preset).map_err(config_error)?;
    }
    if let Some(seed) = c.seed {
        cfg.set_seed(seed);
    }
    if let Some(out) = &c.output {
        cfg.output_dir = out.clone();
    }
    cfg.validate().map_err(|e| config_error(e.into()))?;
    Ok(cfg)
}

fn apply_preset(cfg: RunConfig, preset: Preset) -> Result<RunConfig> {
    let Dissipation::Preset { nu, eta, .. } = cfg.dissipation else {
        bail!("--preset needs a config that sets nu/eta through a preset");
    };
    let (uses_nu, uses_eta) = preset.uses();
    if (uses_nu && !(nu > 0.0)) || (uses_eta && !(eta > 0.0)) {
        bail!("preset {preset} needs positive nu/eta, config has nu = {nu}, eta = {eta}");
    }
    Ok(cfg.with_preset(preset, nu, eta))
}

fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .and_then(|_| {
            fs::write(
                dir.join(name),
                serde_json::to_string_pretty(value).expect("json"),
            )
        })
        .with_context(|| format!("writing {}", dir.join(name).display()))
        .map_err(io_error)
}

fn cmd_run(c: &Common) -> Result<ExitStatus, Failure> {
    let cfg = load_run_config(c)?;
    let report = main_run(&cfg);
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    if let Some(s) = &report.summary {
        println!(
            "t = {} after {} records, energy budget residual {:e}",
            s.t_final, s.records, s.energy_budget_residual
        );
        for (name, m) in &s.monitors {
            match m.value {
                Some(v) => println!("{name} = {v}"),
                None => println!(
                    "{name}: {}",
                    m.unavailable.as_deref().unwrap_or("unavailable")
                ),
            }
        }
    }
    if let Some(msg) = &report.message {
        eprintln!("error: {msg}");
    }
    Ok(report.status)
}

fn cmd_swap(c: &Common) -> Result<ExitStatus, Failure> {
    let cfg = load_run_config(c)?;
    let dev = swap_symmetry_experiment(&cfg).map_err(|e| config_error(e.into()))?;
    println!("max swap deviation {dev:e}");
    write_json(
        &cfg.output_dir,
        "swap_test.json",
        &json!({ "max_deviation": dev }),
    )?;
    Ok(ExitStatus::Success)
}

/// The command line asks for at least three strictly decreasing entries.
fn check_cli_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.len() < 3 {
        bail!(
            "eps_ladder needs at least three entries, found {}",
            ladder.len()
        );
    }
    if ladder.windows(2).any(|w| !(w[1] < w[0])) {
        bail!("eps_ladder must be strictly decreasing");
    }
    Ok(())
}

fn cmd_eps(c: &Common) -> Result<ExitStatus, Failure> {
    let cfg = load_run_config(c)?;
    check_cli_ladder(&cfg.eps_ladder).map_err(config_error)?;
    let pairs =
        epsilon_refinement_experiment(&cfg, &cfg.eps_ladder).map_err(|e| config_error(e.into()))?;
    let decreasing = pairs.windows(2).all(|w| w[1].1 < w[0].1);
    for (eps, d) in &pairs {
        println!("eps = {eps}: distance to next {d:e}");
    }
    println!("distances strictly decreasing: {decreasing}");
    let rows: Vec<_> = pairs
        .iter()
        .map(|(e, d)| json!({ "epsilon": e, "distance": d }))
        .collect();
    write_json(
        &cfg.output_dir,
        "eps_test.json",
        &json!({ "distances": rows, "strictly_decreasing": decreasing }),
    )?;
    Ok(ExitStatus::Success)
}

fn cmd_campaign(c: &Common) -> Result<ExitStatus, Failure> {
    let mut cfg = match &c.config {
        Some(path) => parse_campaign_config(&read(path)?)
            .with_context(|| format!("in {}", path.display()))
            .map_err(config_error)?,
        None => CampaignConfig::default(),
    };
    if c.preset.is_some() {
        return Err(config_error(anyhow::anyhow!(
            "--preset does not apply to ineq-campaign"
        )));
    }
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    let family = cfg.family().map_err(|e| config_error(e.into()))?;
    let mut reports = Vec::new();
    for &kind in &cfg.kinds {
        let r = run_campaign(kind, &family, cfg.n_samples).map_err(|e| config_error(e.into()))?;
        println!(
            "{:<16} max {:.6e}  median {:.6e}  argmax seed {}",
            kind.name(),
            r.max_ratio,
            r.median_ratio,
            r.argmax_seed
        );
        reports.push(r);
    }
    let value = serde_json::to_value(&reports).expect("reports serialize");
    match &c.output {
        Some(dir) => write_json(dir, "campaign.json", &value)?,
        None => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
    }
    Ok(ExitStatus::Success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(c) => cmd_run(c),
        Command::SwapTest(c) => cmd_swap(c),
        Command::EpsTest(c) => cmd_eps(c),
        Command::IneqCampaign(c) => cmd_campaign(c),
    };
    let status = result.unwrap_or_else(|f| {
        eprintln!("error: {:#}", f.error);
        f.status
    });
    ExitCode::from(status.code() as u8)
}
