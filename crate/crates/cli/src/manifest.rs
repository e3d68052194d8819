//! Run manifest, written last so that its presence marks a finished run.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Canonical `key = value` pairs of the config that ran.
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub threads: usize,
    /// Wall-clock start and end, seconds since the Unix epoch.
    pub started: f64,
    pub finished: f64,
    /// `completed`, `blow-up` or `init-failure`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub message: Option<String>,
    /// Output files relative to the run directory.
    pub files: Vec<String>,
}

pub fn wall_clock() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

pub fn config_echo(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

impl RunManifest {
    /// Writes through a temporary file and a rename, after checking that
    /// every listed file exists.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        for f in &self.files {
            if !dir.join(f).is_file() {
                return Err(CliError::Usage(format!("manifest lists missing file {f}")));
            }
        }
        let tmp = dir.join(format!("{MANIFEST}.tmp"));
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(&tmp, text + "\n").map_err(CliError::file(&tmp))?;
        fs::rename(&tmp, dir.join(MANIFEST)).map_err(CliError::file(dir.join(MANIFEST)))?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path).map_err(CliError::file(&path))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}
