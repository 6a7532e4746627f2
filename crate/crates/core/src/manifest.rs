//! JSON record written next to the outputs of every command.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::create_file;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// Fully resolved configuration of the command.
    pub config: serde_json::Value,
    pub inputs: Vec<String>,
    /// Output files, relative to the manifest directory.
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
    pub exit_status: i32,
    #[serde(default)]
    pub warnings: Vec<String>,
    /// Command-specific results (roots, regime, metrics, errors).
    #[serde(default)]
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
            duration_seconds: 0.0,
            exit_status: 0,
            warnings: Vec::new(),
            summary: serde_json::Value::Null,
        }
    }

    /// Writes `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let file = create_file(&path)?;
        serde_json::to_writer_pretty(file, self).map_err(|e| Error::parse(&path, e))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::parse(path, e))
    }
}
