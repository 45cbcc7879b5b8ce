//! Per-invocation run manifest: the effective config digest, seed, and
//! component versions. Reruns with identical inputs differ only in the
//! timestamp field.

use std::path::{Path, PathBuf};

use claimcheck_core::ensemble::MODEL_FORMAT_VERSION;
use claimcheck_core::{Error, Result};

use crate::config::Settings;

#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub versions: Versions,
    pub timestamp: String,
}

#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct Versions {
    pub cli: String,
    pub core: String,
    pub model_format: u32,
}

/// Write `manifest-<command>.json` under the output directory.
pub fn write_manifest(settings: &Settings, command: &str) -> Result<PathBuf> {
    let manifest = RunManifest {
        command: command.to_string(),
        config_hash: settings.config_hash(),
        seed: settings.seed,
        versions: Versions {
            cli: env!("CARGO_PKG_VERSION").to_string(),
            core: claimcheck_core::VERSION.to_string(),
            model_format: MODEL_FORMAT_VERSION,
        },
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    let path = settings.output_dir.join(format!("manifest-{command}.json"));
    write_json(&path, &manifest)?;
    Ok(path)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut json = serde_json::to_string_pretty(value)?;
    json.push('\n');
    std::fs::write(path, json).map_err(|e| Error::io(path, e))
}
