//! The bootstrap manifest: where the data came from, how it was loaded, and
//! which source knowledge bases were written.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use rulefuse::ingest::{DatasetFormat, ImputePolicy, LoadOptions};
use rulefuse::FeatureSpec;

use crate::error::{CliError, Result};
use crate::util::write_atomic;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub data_path: PathBuf,
    pub format: DatasetFormat,
    pub load_options: LoadOptions,
    pub impute: ImputePolicy,
    pub seed: u64,
    pub features: Vec<FeatureSpec>,
    pub classes: Vec<String>,
    /// Derived numeric bounds per feature (`null` for categorical).
    pub bounds: Vec<Option<(f64, f64)>>,
    /// Source knowledge bases, paths relative to the manifest.
    pub sources: Vec<SourceEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SourceEntry {
    pub path: PathBuf,
    pub rules: usize,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read manifest {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, &serde_json::to_string_pretty(self)?)
    }

    /// Source paths resolved against the manifest's directory.
    pub fn source_paths(&self, manifest_path: &Path) -> Vec<PathBuf> {
        let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
        self.sources
            .iter()
            .map(|s| {
                if s.path.is_absolute() {
                    s.path.clone()
                } else {
                    dir.join(&s.path)
                }
            })
            .collect()
    }
}
