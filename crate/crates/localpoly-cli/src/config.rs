//! Optional JSON overlay for flags. Any key left out, or given on the command
//! line, falls back to the flag.

use std::path::{Path, PathBuf};

use localpoly::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overlay {
    pub k: Option<u32>,
    pub level: Option<u64>,
    pub d: Option<i64>,
    pub d0: Option<i64>,
    #[serde(default)]
    pub x: Vec<String>,
    pub preset: Option<String>,
    pub factors: Option<String>,
    pub a_max: Option<u64>,
    pub with_p: Option<bool>,
    pub terms: Option<usize>,
    pub fixture: Option<PathBuf>,
    pub tol: Option<f64>,
    pub cutoff: Option<f64>,
    pub threads: Option<usize>,
    /// `human`, `json` or `tsv`.
    pub format: Option<String>,
}

impl Overlay {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let overlay: Overlay = serde_json::from_str(&text)?;
        if let Some(f) = &overlay.format {
            if !matches!(f.as_str(), "human" | "json" | "tsv") {
                return Err(Error::validation(format!("unknown format `{f}`")));
            }
        }
        Ok(overlay)
    }
}
