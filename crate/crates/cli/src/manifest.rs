use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use skewroute::MetricSpec;

use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Written next to every output. `args` re-runs the command as given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub args: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub thresholds: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub corpus: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, args: &[String]) -> Self {
        Self {
            tool: env!("CARGO_BIN_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            args: args.to_vec(),
            metric: None,
            thresholds: Vec::new(),
            corpus: Vec::new(),
            seed: None,
            outputs: Vec::new(),
        }
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Internal(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

pub fn write_manifest(dir: &Path, mut manifest: RunManifest) -> Result<(), CliError> {
    let path = dir.join(MANIFEST_NAME);
    manifest.outputs.push(path.clone());
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    write_file(&path, text.as_bytes())
}
