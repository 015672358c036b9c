//! JSON config files. Field names follow [`GeneratorConfig`]; `k` and `d`
//! are read off the matrices, and a `preset` object can stand in for
//! `class_pref_mean` / `class_pref_dev`.
//!
//! ```json
//! {
//!   "n": 1000,
//!   "m": 8000,
//!   "preset": { "kind": "lfr", "k": 3, "mu": 0.7 },
//!   "attr_class_corr": [[0.8, 0.1, 0.1]],
//!   "omega": 0.1
//! }
//! ```

use std::path::Path;

use gencat_core::presets::{
    dcsbm_preset, diagonal_preset, lfr_preset, Preset, DEFAULT_DEVIATION_RANGE,
};
use gencat_core::{
    AttrDist, ClassSizeMode, DegreeSpec, GeneratorConfig, LabelPlacement, Matrix, TargetSelection,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Named parameter presets.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum PresetSpec {
    /// Diagonal `mu`, off-diagonals `(1 - mu) / (k - 1)`, zero deviation.
    Lfr { k: usize, mu: f64 },
    /// The given mean with zero deviation.
    Dcsbm { class_pref_mean: Matrix },
    /// Given diagonal, random deviation diagonal in `dev_range`.
    Diagonal {
        diag: Vec<f64>,
        #[serde(default)]
        dev_range: Option<(f64, f64)>,
    },
}

/// The config file as written by the user.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub preset: Option<PresetSpec>,
    #[serde(default)]
    pub class_pref_mean: Option<Matrix>,
    #[serde(default)]
    pub class_pref_dev: Option<Matrix>,
    #[serde(default)]
    pub attr_class_corr: Option<Matrix>,
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub attr_dist: AttrDist,
    #[serde(default)]
    pub max_rounds: Option<usize>,
    #[serde(default)]
    pub class_sizes: Option<ClassSizeMode>,
    #[serde(default)]
    pub degrees: DegreeSpec,
    #[serde(default)]
    pub target_selection: TargetSelection,
    #[serde(default)]
    pub label_placement: LabelPlacement,
    #[serde(default)]
    pub adjust: Option<bool>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }

    /// Resolves presets and defaults into a generator config. `seed`
    /// overrides the file's seed; with neither, the seed is 0.
    pub fn to_generator_config(&self, seed: Option<u64>) -> CliResult<GeneratorConfig> {
        if self.preset.is_some()
            && (self.class_pref_mean.is_some() || self.class_pref_dev.is_some())
        {
            return Err(CliError::Invalid(
                "config: give either a preset or class_pref_mean/class_pref_dev, not both".into(),
            ));
        }
        let (mean, dev) = match (&self.preset, &self.class_pref_mean) {
            (Some(spec), _) => {
                let seed = seed.or(self.seed).unwrap_or(0);
                let p = resolve_preset(spec, seed)?;
                (p.class_pref_mean, p.class_pref_dev)
            }
            (None, Some(mean)) => {
                let dev = self
                    .class_pref_dev
                    .clone()
                    .unwrap_or_else(|| Matrix::zeros(mean.rows(), mean.rows()));
                (mean.clone(), dev)
            }
            (None, None) => {
                return Err(CliError::Invalid(
                    "config: missing class_pref_mean (or a preset)".into(),
                ));
            }
        };
        let k = mean.rows();
        let mut cfg = GeneratorConfig::new(self.n, self.m, mean, dev);
        if let Some(h) = &self.attr_class_corr {
            cfg = cfg.with_attributes(h.clone(), self.omega, self.attr_dist);
        } else {
            cfg.attr_class_corr = Matrix::zeros(0, k);
            cfg.omega = self.omega;
            cfg.attr_dist = self.attr_dist;
        }
        if let Some(r) = self.max_rounds {
            cfg.max_rounds = r;
        }
        if let Some(sizes) = &self.class_sizes {
            cfg.class_sizes = sizes.clone();
        }
        cfg.degrees = self.degrees.clone();
        cfg.target_selection = self.target_selection;
        cfg.label_placement = self.label_placement;
        if let Some(adjust) = self.adjust {
            cfg.adjust = adjust;
        }
        cfg.seed = seed.or(self.seed).unwrap_or(0);
        Ok(cfg)
    }
}

fn resolve_preset(spec: &PresetSpec, seed: u64) -> CliResult<Preset> {
    let p = match spec {
        PresetSpec::Lfr { k, mu } => lfr_preset(*k, *mu)?,
        PresetSpec::Dcsbm { class_pref_mean } => dcsbm_preset(class_pref_mean)?,
        PresetSpec::Diagonal { diag, dev_range } => {
            diagonal_preset(diag, dev_range.unwrap_or(DEFAULT_DEVIATION_RANGE), seed)?
        }
    };
    Ok(p)
}
