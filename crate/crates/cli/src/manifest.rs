use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use mccdma::montecarlo::{ExperimentSpec, PRNG_ID};
use serde::{Deserialize, Serialize};

/// First-line prefix under which emitted CSV files embed their manifest.
pub const CSV_MANIFEST_PREFIX: &str = "# manifest: ";

/// Everything needed to reproduce an emitted result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_path: Option<PathBuf>,
    /// Channel and power files read by the deterministic commands.
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    pub seed: u64,
    pub prng: String,
    pub spec: ExperimentSpec,
    pub outputs: Vec<PathBuf>,
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

impl RunManifest {
    pub fn new(command: &str, config_path: Option<PathBuf>, spec: ExperimentSpec) -> Self {
        let started_unix_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_millis());
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_path,
            inputs: Vec::new(),
            seed: spec.seed,
            prng: PRNG_ID.to_string(),
            spec,
            outputs: Vec::new(),
            started_unix_ms,
            elapsed_ms: 0,
        }
    }

    pub fn csv_header_line(&self) -> String {
        format!(
            "{CSV_MANIFEST_PREFIX}{}\n",
            serde_json::to_string(self).expect("manifest serializes")
        )
    }
}
