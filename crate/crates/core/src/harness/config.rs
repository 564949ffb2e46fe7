//! `key = value` run configuration.
//!
//! Blank lines and text after `#` are ignored. Required keys: `nx`, `ny`,
//! `dt`, `t_end`. Dissipation comes either from `preset` (with `nu` and/or
//! `eta` as the preset needs) or from explicit `nu1`, `nu2`, `eta1`, `eta2`
//! (default 0); the two styles cannot be mixed.
//!
//! | key | default |
//! |---|---|
//! | `lx`, `ly` | `2π` |
//! | `epsilon` | 0 |
//! | `initial_data` | `random` (`taylor_green`, `magnetic_decay`, `mixed`, `random`, `zero`) |
//! | `seed` | 0 |
//! | `band_limit` | 8 |
//! | `alpha` | 1 |
//! | `amplitude` | 1 |
//! | `mollifier_epsilon` | 0 (off) |
//! | `diagnostics_interval` | 1 (steps between records) |
//! | `p_ladder` | `2,4,8,16,32,64` |
//! | `output_dir` | `output` |
//! | `checkpoint` | `false` |
//! | `eps_ladder` | empty |

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use crate::diagnostics::DEFAULT_P_LADDER;
use crate::solver::{InitialData, MhdParams, Preset};
use crate::spectral::{make_grid, Grid, SpectralError};

pub const REQUIRED_KEYS: [&str; 4] = ["nx", "ny", "dt", "t_end"];

const KNOWN_KEYS: [&str; 24] = [
    "nx",
    "ny",
    "lx",
    "ly",
    "dt",
    "t_end",
    "preset",
    "nu",
    "eta",
    "nu1",
    "nu2",
    "eta1",
    "eta2",
    "epsilon",
    "initial_data",
    "seed",
    "band_limit",
    "alpha",
    "amplitude",
    "mollifier_epsilon",
    "diagnostics_interval",
    "p_ladder",
    "output_dir",
    "checkpoint",
];

const LADDER_KEY: &str = "eps_ladder";

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// How the dissipation tuple was specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dissipation {
    Preset { preset: Preset, nu: f64, eta: f64 },
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub dissipation: Dissipation,
    /// Resolved coefficients, `epsilon` included.
    pub params: MhdParams,
    pub dt: f64,
    pub t_end: f64,
    pub initial_data: InitialData,
    pub amplitude: f64,
    pub mollifier_epsilon: f64,
    pub diagnostics_interval: usize,
    pub p_ladder: Vec<f64>,
    pub output_dir: PathBuf,
    pub checkpoint: bool,
    pub eps_ladder: Vec<f64>,
}

impl RunConfig {
    /// Config with explicit coefficients and defaults elsewhere.
    pub fn new(n: usize, params: MhdParams, dt: f64, t_end: f64) -> Self {
        Self {
            nx: n,
            ny: n,
            lx: std::f64::consts::TAU,
            ly: std::f64::consts::TAU,
            dissipation: Dissipation::Explicit,
            params,
            dt,
            t_end,
            initial_data: InitialData::Random {
                seed: 0,
                band_limit: 8,
                alpha: 1.0,
            },
            amplitude: 1.0,
            mollifier_epsilon: 0.0,
            diagnostics_interval: 1,
            p_ladder: DEFAULT_P_LADDER.to_vec(),
            output_dir: PathBuf::from("output"),
            checkpoint: false,
            eps_ladder: Vec::new(),
        }
    }

    pub fn with_preset(mut self, preset: Preset, nu: f64, eta: f64) -> Self {
        let epsilon = self.params.epsilon;
        let (uses_nu, uses_eta) = preset.uses();
        let nu = if uses_nu { nu } else { 0.0 };
        let eta = if uses_eta { eta } else { 0.0 };
        self.dissipation = Dissipation::Preset { preset, nu, eta };
        self.params = preset.params(nu, eta).with_epsilon(epsilon);
        self
    }

    pub fn with_initial_data(mut self, data: InitialData) -> Self {
        self.initial_data = data;
        self
    }

    pub fn preset(&self) -> Option<Preset> {
        match self.dissipation {
            Dissipation::Preset { preset, .. } => Some(preset),
            Dissipation::Explicit => None,
        }
    }

    pub fn grid(&self) -> Result<Arc<Grid>, SpectralError> {
        make_grid(self.nx, self.ny, self.lx, self.ly)
    }

    /// Replace the seed of random initial data.
    pub fn set_seed(&mut self, seed: u64) {
        if let InitialData::Random { seed: s, .. } = &mut self.initial_data {
            *s = seed;
        }
    }

    /// Whole-config checks that do not belong to a single line.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let g = self
            .grid()
            .map_err(|e| ConfigError::global(e.to_string()))?;
        self.params
            .validate()
            .map_err(|e| ConfigError::global(e.to_string()))?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ConfigError::global(format!(
                "dt = {} must be positive",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(ConfigError::global(format!(
                "t_end = {} must be nonnegative",
                self.t_end
            )));
        }
        if let InitialData::Random {
            band_limit, alpha, ..
        } = self.initial_data
        {
            let (cx, cy) = g.dealias_cutoff();
            let cut = cx.min(cy) as usize;
            if band_limit == 0 || band_limit > cut {
                return Err(ConfigError::global(format!(
                    "band_limit = {band_limit} must lie in 1..={cut} for a {}x{} grid",
                    self.nx, self.ny
                )));
            }
            if !(alpha.is_finite() && alpha >= 0.0) {
                return Err(ConfigError::global(format!(
                    "alpha = {alpha} must be nonnegative"
                )));
            }
        }
        if self.mollifier_epsilon > 0.0 && self.mollifier_epsilon >= 0.5 * self.lx.min(self.ly) {
            return Err(ConfigError::global(format!(
                "mollifier_epsilon = {} must be below half the shortest side",
                self.mollifier_epsilon
            )));
        }
        Ok(())
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.parse::<T>()
        .map_err(|_| ConfigError::at(line, format!("malformed value '{raw}' for {key}")))
}

fn parse_f64(line: usize, key: &str, raw: &str) -> Result<f64, ConfigError> {
    let v: f64 = parse_value(line, key, raw)?;
    if !v.is_finite() {
        return Err(ConfigError::at(line, format!("{key} must be finite")));
    }
    Ok(v)
}

fn parse_list(line: usize, key: &str, raw: &str) -> Result<Vec<f64>, ConfigError> {
    raw.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| parse_value::<f64>(line, key, s))
        .collect()
}

fn nonneg(line: usize, key: &str, v: f64) -> Result<f64, ConfigError> {
    if v < 0.0 {
        return Err(ConfigError::at(
            line,
            format!("{key} = {v} must be nonnegative"),
        ));
    }
    Ok(v)
}

fn positive(line: usize, key: &str, v: f64) -> Result<f64, ConfigError> {
    if v <= 0.0 {
        return Err(ConfigError::at(
            line,
            format!("{key} = {v} must be positive"),
        ));
    }
    Ok(v)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            ConfigError::at(line, format!("expected key=value, found '{content}'"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) && key != LADDER_KEY {
            return Err(ConfigError::at(line, format!("unknown key '{key}'")));
        }
        if value.is_empty() {
            return Err(ConfigError::at(line, format!("missing value for {key}")));
        }
        if let Some((first, _)) = entries.get(key) {
            return Err(ConfigError::at(
                line,
                format!("duplicate key '{key}' (first set on line {first})"),
            ));
        }
        entries.insert(key.to_string(), (line, value.to_string()));
    }
    let missing: Vec<&str> = REQUIRED_KEYS
        .iter()
        .copied()
        .filter(|k| !entries.contains_key(*k))
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::global(format!(
            "missing required keys: {}",
            missing.join(", ")
        )));
    }
    let get = |k: &str| entries.get(k).map(|(l, v)| (*l, v.as_str()));

    let size = |k: &str| -> Result<usize, ConfigError> {
        let (l, v) = get(k).expect("required");
        parse_value(l, k, v)
    };
    let real =
        |k: &str, default: f64, check: fn(usize, &str, f64) -> Result<f64, ConfigError>| match get(
            k,
        ) {
            Some((l, v)) => check(l, k, parse_f64(l, k, v)?),
            None => Ok(default),
        };
    let mut cfg = RunConfig::new(0, MhdParams::ideal(), 1.0, 0.0);
    cfg.nx = size("nx")?;
    cfg.ny = size("ny")?;
    cfg.lx = real("lx", cfg.lx, positive)?;
    cfg.ly = real("ly", cfg.ly, positive)?;
    cfg.dt = real("dt", 0.0, positive)?;
    cfg.t_end = real("t_end", 0.0, nonneg)?;

    let epsilon = real("epsilon", 0.0, nonneg)?;
    let explicit: Vec<&str> = ["nu1", "nu2", "eta1", "eta2"]
        .into_iter()
        .filter(|k| entries.contains_key(*k))
        .collect();
    match get("preset") {
        Some((l, name)) => {
            let preset: Preset = name.parse().map_err(|e: String| ConfigError::at(l, e))?;
            if let Some(k) = explicit.first() {
                let (kl, _) = get(k).expect("present");
                return Err(ConfigError::at(
                    kl,
                    format!("{k} conflicts with preset on line {l}"),
                ));
            }
            let (uses_nu, uses_eta) = preset.uses();
            let coefficient = |k: &str, used: bool| -> Result<f64, ConfigError> {
                match (get(k), used) {
                    (Some((kl, v)), true) => positive(kl, k, parse_f64(kl, k, v)?),
                    (Some((kl, _)), false) => Err(ConfigError::at(
                        kl,
                        format!("{k} is not used by preset {preset}"),
                    )),
                    (None, true) => Err(ConfigError::at(l, format!("preset {preset} needs {k}"))),
                    (None, false) => Ok(0.0),
                }
            };
            let nu = coefficient("nu", uses_nu)?;
            let eta = coefficient("eta", uses_eta)?;
            cfg = cfg.with_preset(preset, nu, eta);
        }
        None => {
            for k in ["nu", "eta"] {
                if let Some((kl, _)) = get(k) {
                    return Err(ConfigError::at(
                        kl,
                        format!("{k} needs a preset; use nu1/nu2/eta1/eta2 otherwise"),
                    ));
                }
            }
            cfg.params = MhdParams {
                nu1: real("nu1", 0.0, nonneg)?,
                nu2: real("nu2", 0.0, nonneg)?,
                eta1: real("eta1", 0.0, nonneg)?,
                eta2: real("eta2", 0.0, nonneg)?,
                epsilon: 0.0,
            };
        }
    }
    cfg.params.epsilon = epsilon;

    let seed = match get("seed") {
        Some((l, v)) => parse_value::<u64>(l, "seed", v)?,
        None => 0,
    };
    let band_limit = match get("band_limit") {
        Some((l, v)) => parse_value::<usize>(l, "band_limit", v)?,
        None => 8,
    };
    let alpha = real("alpha", 1.0, nonneg)?;
    cfg.initial_data = match get("initial_data") {
        None | Some((_, "random")) => InitialData::Random {
            seed,
            band_limit,
            alpha,
        },
        Some((_, "taylor_green")) => InitialData::TaylorGreen,
        Some((_, "magnetic_decay")) => InitialData::MagneticDecay,
        Some((_, "mixed")) => InitialData::Mixed,
        Some((_, "zero")) => InitialData::Zero,
        Some((l, other)) => {
            return Err(ConfigError::at(
                l,
                format!("unknown initial_data '{other}' (taylor_green, magnetic_decay, mixed, random, zero)"),
            ))
        }
    };
    cfg.amplitude = real("amplitude", 1.0, nonneg)?;
    cfg.mollifier_epsilon = real("mollifier_epsilon", 0.0, nonneg)?;
    if let Some((l, v)) = get("diagnostics_interval") {
        let n: usize = parse_value(l, "diagnostics_interval", v)?;
        if n == 0 {
            return Err(ConfigError::at(
                l,
                "diagnostics_interval must be at least 1",
            ));
        }
        cfg.diagnostics_interval = n;
    }
    if let Some((l, v)) = get("p_ladder") {
        let ladder = parse_list(l, "p_ladder", v)?;
        if ladder.is_empty() || ladder.iter().any(|p| !(*p >= 2.0)) {
            return Err(ConfigError::at(
                l,
                "p_ladder needs one or more exponents >= 2",
            ));
        }
        cfg.p_ladder = ladder;
    }
    if let Some((_, v)) = get("output_dir") {
        cfg.output_dir = PathBuf::from(v);
    }
    if let Some((l, v)) = get("checkpoint") {
        cfg.checkpoint = parse_value(l, "checkpoint", v)?;
    }
    if let Some((l, v)) = get(LADDER_KEY) {
        let ladder = parse_list(l, LADDER_KEY, v)?;
        if ladder.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(ConfigError::at(l, "eps_ladder entries must be positive"));
        }
        cfg.eps_ladder = ladder;
    }
    cfg.validate().map_err(|mut e| {
        if let Some((l, _)) = get("band_limit").filter(|_| e.message.starts_with("band_limit")) {
            e.line = Some(l);
        }
        if let Some((l, _)) =
            get("mollifier_epsilon").filter(|_| e.message.starts_with("mollifier"))
        {
            e.line = Some(l);
        }
        e
    })?;
    Ok(cfg)
}

fn list(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Text that [`parse_config`] reads back to an equal config.
pub fn serialize_config(cfg: &RunConfig) -> String {
    let mut out = Vec::new();
    let mut kv = |k: &str, v: String| out.push(format!("{k} = {v}"));
    kv("nx", cfg.nx.to_string());
    kv("ny", cfg.ny.to_string());
    kv("lx", format!("{:?}", cfg.lx));
    kv("ly", format!("{:?}", cfg.ly));
    kv("dt", format!("{:?}", cfg.dt));
    kv("t_end", format!("{:?}", cfg.t_end));
    match cfg.dissipation {
        Dissipation::Preset { preset, nu, eta } => {
            kv("preset", preset.to_string());
            let (uses_nu, uses_eta) = preset.uses();
            if uses_nu {
                kv("nu", format!("{nu:?}"));
            }
            if uses_eta {
                kv("eta", format!("{eta:?}"));
            }
        }
        Dissipation::Explicit => {
            kv("nu1", format!("{:?}", cfg.params.nu1));
            kv("nu2", format!("{:?}", cfg.params.nu2));
            kv("eta1", format!("{:?}", cfg.params.eta1));
            kv("eta2", format!("{:?}", cfg.params.eta2));
        }
    }
    kv("epsilon", format!("{:?}", cfg.params.epsilon));
    kv("initial_data", cfg.initial_data.name().to_string());
    if let InitialData::Random {
        seed,
        band_limit,
        alpha,
    } = cfg.initial_data
    {
        kv("seed", seed.to_string());
        kv("band_limit", band_limit.to_string());
        kv("alpha", format!("{alpha:?}"));
    }
    kv("amplitude", format!("{:?}", cfg.amplitude));
    kv("mollifier_epsilon", format!("{:?}", cfg.mollifier_epsilon));
    kv("diagnostics_interval", cfg.diagnostics_interval.to_string());
    kv("p_ladder", list(&cfg.p_ladder));
    kv("output_dir", cfg.output_dir.display().to_string());
    kv("checkpoint", cfg.checkpoint.to_string());
    if !cfg.eps_ladder.is_empty() {
        kv(LADDER_KEY, list(&cfg.eps_ladder));
    }
    out.join("\n") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_example() {
        let cfg = parse_config(
            "preset=mixed_case_A\nnu=0.01\neta=0.01\nnx=128\nny=128\ndt=1e-3\nt_end=1",
        )
        .unwrap();
        assert_eq!(
            cfg.params,
            MhdParams {
                nu1: 0.0,
                nu2: 0.01,
                eta1: 0.01,
                eta2: 0.0,
                epsilon: 0.0
            }
        );
        assert_eq!(cfg.preset(), Some(Preset::MixedCaseA));
        assert_eq!(cfg.p_ladder, DEFAULT_P_LADDER.to_vec());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config("nx=16\nny=16\ndt=-1\nt_end=1").unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = parse_config("# header\nnx=16\nny=16\ndt=0.1\nt_end=1\ncolour=blue").unwrap_err();
        assert_eq!(e.line, Some(6));
        assert!(e.to_string().contains("unknown key"));
        let e = parse_config("nx=16\nny=16\ndt=0.1\nt_end=1\nnx=32").unwrap_err();
        assert_eq!(e.line, Some(5));
        let e = parse_config("nx=16\nny=sixteen\ndt=0.1\nt_end=1").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn empty_file_lists_required_keys() {
        let e = parse_config("").unwrap_err();
        assert_eq!(e.line, None);
        for k in REQUIRED_KEYS {
            assert!(e.message.contains(k));
        }
    }

    #[test]
    fn preset_conflicts() {
        let base = "nx=32\nny=32\ndt=0.1\nt_end=1\n";
        assert!(parse_config(&format!("{base}preset=magnetic_only\neta=0.1\nnu1=0.2")).is_err());
        assert!(parse_config(&format!("{base}preset=magnetic_only\neta=0.1\nnu=0.2")).is_err());
        assert!(parse_config(&format!("{base}preset=mixed_case_B\nnu=0.1")).is_err());
        assert!(parse_config(&format!("{base}nu=0.1")).is_err());
        assert!(parse_config(&format!("{base}preset=turbulent")).is_err());
        let ok = parse_config(&format!(
            "{base}preset=magnetic_only\neta=0.1\nepsilon=0.01"
        ))
        .unwrap();
        assert_eq!(ok.params, MhdParams::magnetic_only(0.1).with_epsilon(0.01));
    }

    #[test]
    fn band_limit_checked_against_grid() {
        let e = parse_config("nx=16\nny=16\ndt=0.1\nt_end=1\nband_limit=9").unwrap_err();
        assert_eq!(e.line, Some(5));
    }

    #[test]
    fn round_trip() {
        let texts = [
            "nx=32\nny=16\nlx=3.5\ndt=1e-3\nt_end=0.3\nnu1=0.1\neta2=0.25\ninitial_data=mixed\np_ladder=2,8,1e3",
            "nx=64\nny=64\ndt=0.002\nt_end=2\npreset=magnetic_only\neta=0.05\nseed=99\nband_limit=12\nalpha=0.5\ncheckpoint=true\neps_ladder=0.1,0.05,0.025\nmollifier_epsilon=0.1",
        ];
        for t in texts {
            let cfg = parse_config(t).unwrap();
            let again = parse_config(&serialize_config(&cfg)).unwrap();
            assert_eq!(cfg, again);
        }
    }
}
