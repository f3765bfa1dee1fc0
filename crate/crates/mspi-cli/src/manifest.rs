//! Run manifests: a JSON record of the fully resolved configuration emitted
//! alongside every output file, so any artifact can be regenerated exactly.

use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub artifact_version: &'static str,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &'static str, config: serde_json::Value) -> Self {
        Self {
            command,
            artifact_version: env!("CARGO_PKG_VERSION"),
            config,
            master_seed: None,
            outputs: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = Some(seed);
        self
    }

    pub fn with_outputs(mut self, outputs: Vec<String>) -> Self {
        self.outputs = outputs;
        self
    }

    /// Write `<base>.manifest.json` next to the primary output.
    pub fn write_alongside(&self, primary_output: &str) -> Result<String, String> {
        let path = format!("{primary_output}.manifest.json");
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(Path::new(&path), body + "\n")
            .map_err(|e| format!("cannot write `{path}`: {e}"))?;
        Ok(path)
    }
}
