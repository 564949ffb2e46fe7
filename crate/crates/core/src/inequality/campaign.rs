use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::random::{derive_seed, sample_spectral, RandomFieldSpec};
use super::{check_inequality, InequalityError, InequalityKind};
use crate::spectral::{make_grid, Grid, RealField, SpectralField};

/// Random inputs for a campaign: every sample draws its fields from
/// [`RandomFieldSpec`]s sharing grid, band limit and decay.
#[derive(Debug, Clone)]
pub struct CampaignFamily {
    pub grid: Arc<Grid>,
    pub band_limit: usize,
    pub spectrum_decay: f64,
    pub seed: u64,
}

impl CampaignFamily {
    pub fn new(grid: &Arc<Grid>, band_limit: usize, spectrum_decay: f64, seed: u64) -> Self {
        Self {
            grid: Arc::clone(grid),
            band_limit,
            spectrum_decay,
            seed,
        }
    }

    pub fn on_grid(&self, grid: &Arc<Grid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            ..self.clone()
        }
    }

    /// Seed of sample `index`; it alone determines that sample's inputs.
    pub fn sample_seed(&self, index: usize) -> u64 {
        derive_seed(self.seed, index as u64)
    }

    /// Inputs of one sample for `kind`. Line means that the kind needs
    /// to vanish are projected out: `kx = 0` modes for `interp_1d`,
    /// `ky = 0` modes for `slice_sup`.
    pub fn sample_inputs(
        &self,
        kind: InequalityKind,
        sample_seed: u64,
    ) -> Result<Vec<RealField>, InequalityError> {
        (0..kind.arity())
            .map(|i| {
                let spec = RandomFieldSpec::new(
                    &self.grid,
                    self.band_limit,
                    self.spectrum_decay,
                    derive_seed(sample_seed, i as u64),
                );
                let f = sample_spectral(&spec)?;
                Ok(project(kind, &f).inverse())
            })
            .collect()
    }
}

fn project(kind: InequalityKind, f: &SpectralField) -> SpectralField {
    match kind {
        InequalityKind::Interp1d => f.apply_symbol(|kx, _| if kx == 0.0 { 0.0 } else { 1.0 }),
        InequalityKind::SliceSup => f.apply_symbol(|_, ky| if ky == 0.0 { 0.0 } else { 1.0 }),
        _ => f.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub n_samples: usize,
    pub n_degenerate: usize,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub min_ratio: f64,
    pub argmax_seed: u64,
    pub resolution: (usize, usize),
    pub band_limit: usize,
    pub spectrum_decay: f64,
    pub family_seed: u64,
}

/// Evaluate `kind` on `n_samples` independent draws. Degenerate samples
/// are counted and skipped; `n_samples` in the report counts the rest.
pub fn run_campaign(
    kind: InequalityKind,
    family: &CampaignFamily,
    n_samples: usize,
) -> Result<InequalityReport, InequalityError> {
    if n_samples == 0 {
        return Err(InequalityError::Invalid(
            "a campaign needs at least one sample".into(),
        ));
    }
    RandomFieldSpec::new(
        &family.grid,
        family.band_limit,
        family.spectrum_decay,
        family.seed,
    )
    .validate()?;
    let results: Vec<(u64, Result<f64, InequalityError>)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let seed = family.sample_seed(i);
            let ratio = family.sample_inputs(kind, seed).and_then(|inputs| {
                let refs: Vec<&RealField> = inputs.iter().collect();
                check_inequality(kind, &refs)
            });
            (seed, ratio)
        })
        .collect();
    let mut ok: Vec<(u64, f64)> = Vec::with_capacity(n_samples);
    let mut n_degenerate = 0;
    for (seed, r) in results {
        match r {
            Ok(v) => ok.push((seed, v)),
            Err(InequalityError::Degenerate) => n_degenerate += 1,
            Err(e) => return Err(e),
        }
    }
    if ok.is_empty() {
        return Err(InequalityError::AllDegenerate);
    }
    let (argmax_seed, max_ratio) =
        ok.iter().copied().fold(
            (0, f64::NEG_INFINITY),
            |best, s| if s.1 > best.1 { s } else { best },
        );
    let mut sorted: Vec<f64> = ok.iter().map(|s| s.1).collect();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median_ratio = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    };
    Ok(InequalityReport {
        kind,
        n_samples: m,
        n_degenerate,
        max_ratio,
        median_ratio,
        min_ratio: sorted[0],
        argmax_seed,
        resolution: (family.grid.nx(), family.grid.ny()),
        band_limit: family.band_limit,
        spectrum_decay: family.spectrum_decay,
        family_seed: family.seed,
    })
}

/// Settings read from a `key = value` campaign file.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub kinds: Vec<InequalityKind>,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub band_limit: usize,
    pub spectrum_decay: f64,
    pub seed: u64,
    pub n_samples: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            kinds: InequalityKind::ALL.to_vec(),
            nx: 128,
            ny: 128,
            lx: 2.0 * std::f64::consts::PI,
            ly: 2.0 * std::f64::consts::PI,
            band_limit: 8,
            spectrum_decay: 1.0,
            seed: 0,
            n_samples: 1000,
        }
    }
}

impl CampaignConfig {
    pub fn family(&self) -> Result<CampaignFamily, InequalityError> {
        let grid = make_grid(self.nx, self.ny, self.lx, self.ly)?;
        Ok(CampaignFamily::new(
            &grid,
            self.band_limit,
            self.spectrum_decay,
            self.seed,
        ))
    }
}

/// Parse a campaign file. Keys: `kind` (a name, a comma list or `all`),
/// `nx`, `ny`, `lx`, `ly`, `band_limit`, `spectrum_decay`, `seed`,
/// `n_samples`; all optional. `#` starts a comment.
pub fn parse_campaign_config(text: &str) -> Result<CampaignConfig, InequalityError> {
    let mut cfg = CampaignConfig::default();
    let mut seen = std::collections::HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| InequalityError::Config {
            line: lineno + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected key = value, found '{line}'")))?;
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key '{key}'")));
        }
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value '{v}' for {key}"))
        }
        let set = |cfg: &mut CampaignConfig| -> Result<(), String> {
            match key {
                "kind" => {
                    cfg.kinds = if value == "all" {
                        InequalityKind::ALL.to_vec()
                    } else {
                        value
                            .split(',')
                            .map(|s| s.trim().parse())
                            .collect::<Result<_, _>>()?
                    }
                }
                "nx" => cfg.nx = num(key, value)?,
                "ny" => cfg.ny = num(key, value)?,
                "lx" => cfg.lx = num(key, value)?,
                "ly" => cfg.ly = num(key, value)?,
                "band_limit" => cfg.band_limit = num(key, value)?,
                "spectrum_decay" => cfg.spectrum_decay = num(key, value)?,
                "seed" => cfg.seed = num(key, value)?,
                "n_samples" => cfg.n_samples = num(key, value)?,
                _ => return Err(format!("unknown key '{key}'")),
            }
            Ok(())
        };
        set(&mut cfg).map_err(err)?;
    }
    if cfg.n_samples == 0 {
        return Err(InequalityError::Invalid(
            "n_samples must be at least 1".into(),
        ));
    }
    Ok(cfg)
}
