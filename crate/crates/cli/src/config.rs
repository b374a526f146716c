//! Experiment configuration files.
//!
//! The format is flat TOML: one `key = value` per line, keys named after
//! the experiment fields. Every key is optional.
//!
//! ```toml
//! users = 2
//! carriers = 2
//! processing_gain = 16
//! noise_power = 5e-16
//! trials = 20000
//! max_rounds = 20
//! seed = 1
//! sweep_processing_gain = [8, 16, 32, 64, 128]
//! ```
//!
//! A run manifest (`.json`) or an emitted CSV whose first line embeds one
//! is accepted in place of a config file and reproduces that run.

use std::path::Path;

use mccdma::equilibrium::DynamicsOptions;
use mccdma::montecarlo::{Execution, ExperimentSpec, Sweep};
use mccdma::SystemConfig;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::manifest::{RunManifest, CSV_MANIFEST_PREFIX};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub users: Option<usize>,
    pub carriers: Option<usize>,
    pub processing_gain: Option<u32>,
    pub noise_power: Option<f64>,
    pub p_max: Option<f64>,
    pub info_bits: Option<u32>,
    pub total_bits: Option<u32>,
    pub rate: Option<f64>,
    pub efficiency_exponent: Option<u32>,
    pub trials: Option<u64>,
    pub max_rounds: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub sweep_processing_gain: Option<Vec<u32>>,
    pub sweep_users: Option<Vec<usize>>,
    pub parallel: Option<bool>,
}

pub const DEFAULT_SEED: u64 = 1;

impl ConfigFile {
    pub fn parse(path: &Path, text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::parse(path, e.to_string().trim_end()))
    }

    pub fn resolve(&self) -> Result<ExperimentSpec, CliError> {
        let defaults = SystemConfig::default();
        let base = SystemConfig {
            users: self.users.unwrap_or(defaults.users),
            carriers: self.carriers.unwrap_or(defaults.carriers),
            processing_gain: self.processing_gain.unwrap_or(defaults.processing_gain),
            noise_power: self.noise_power.unwrap_or(defaults.noise_power),
            p_max: self.p_max.unwrap_or(defaults.p_max),
            info_bits: self.info_bits.unwrap_or(defaults.info_bits),
            total_bits: self.total_bits.unwrap_or(defaults.total_bits),
            rate: self.rate.unwrap_or(defaults.rate),
            efficiency_exponent: self
                .efficiency_exponent
                .unwrap_or(defaults.efficiency_exponent),
        };
        let mut spec = ExperimentSpec::new(base, self.seed.unwrap_or(DEFAULT_SEED));
        if let Some(trials) = self.trials {
            spec.trials = trials;
        }
        let dynamics = DynamicsOptions::default();
        spec.dynamics = DynamicsOptions {
            max_rounds: self.max_rounds.unwrap_or(dynamics.max_rounds),
            tolerance: self.tolerance.unwrap_or(dynamics.tolerance),
        };
        spec.sweep = match (&self.sweep_processing_gain, &self.sweep_users) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "set at most one of sweep_processing_gain and sweep_users".into(),
                ))
            }
            (Some(n), None) => Sweep::ProcessingGain(n.clone()),
            (None, Some(k)) => Sweep::Users(k.clone()),
            (None, None) => Sweep::Base,
        };
        if self.parallel == Some(false) {
            spec.execution = Execution::Serial;
        }
        Ok(spec)
    }
}

/// Loads an experiment from a TOML config, a JSON manifest, or a CSV with
/// an embedded manifest line.
pub fn load_spec(path: &Path) -> Result<ExperimentSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => {
            let manifest: RunManifest =
                serde_json::from_str(&text).map_err(|e| CliError::parse(path, e.to_string()))?;
            Ok(manifest.spec)
        }
        Some("csv") => {
            let first = text.lines().next().unwrap_or_default();
            let json = first
                .strip_prefix(CSV_MANIFEST_PREFIX)
                .ok_or_else(|| CliError::parse(path, "line 1: no embedded manifest"))?;
            let manifest: RunManifest = serde_json::from_str(json)
                .map_err(|e| CliError::parse(path, format!("line 1: {e}")))?;
            Ok(manifest.spec)
        }
        _ => ConfigFile::parse(path, &text)?.resolve(),
    }
}
