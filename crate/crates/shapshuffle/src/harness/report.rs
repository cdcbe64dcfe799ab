//! Output writers: CSV tables, JSON reports and the run manifest.
//!
//! Writers take explicit paths and produce deterministic bytes; nothing
//! here embeds timestamps, hostnames or absolute paths.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

use super::pipeline::SweepTable;
use super::ranks::RankHistogram;

/// Write a string to `path`, creating parent directories as needed.
pub fn write_string(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, content)?;
    Ok(())
}

/// Write any serializable value as pretty-printed JSON with a trailing
/// newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_string(path, &text)
}

/// Write a sweep table as `attack,param,explainer,feature,mean_abs_phi`.
pub fn write_sweep_csv(path: &Path, table: &SweepTable) -> Result<()> {
    let mut out = String::from("attack,param,explainer,feature,mean_abs_phi\n");
    for row in &table.rows {
        let param = row.param.map_or_else(String::new, |p| format!("{p}"));
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.attack, param, row.explainer, row.feature, row.mean_abs_phi
        ));
    }
    write_string(path, &out)
}

/// Write per-attack rank histograms as
/// `attack,feature,top1,top2,top3,rest`.
pub fn write_ranks_csv(path: &Path, entries: &[(String, RankHistogram)]) -> Result<()> {
    let mut out = String::from("attack,feature,top1,top2,top3,rest\n");
    for (attack, hist) in entries {
        for (j, feature) in hist.feature_names.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                attack, feature, hist.top1[j], hist.top2[j], hist.top3[j], hist.rest[j]
            ));
        }
    }
    write_string(path, &out)
}

/// Record of one CLI run: the command, its effective seed, the full
/// resolved spec and every file the run wrote.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub spec: serde_json::Value,
    pub outputs: Vec<String>,
}

impl Manifest {
    /// Start a manifest from the resolved spec of a run.
    pub fn new<T: Serialize>(command: &str, seed: u64, spec: &T) -> Result<Self> {
        Ok(Manifest {
            command: command.to_string(),
            seed,
            spec: serde_json::to_value(spec)?,
            outputs: Vec::new(),
        })
    }

    /// Record an output file (stored by file name, not full path).
    pub fn record(&mut self, path: &Path) {
        let name = path
            .file_name()
            .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        self.outputs.push(name);
    }

    /// Write `manifest.json` into `dir` and return its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        write_json(&path, self)?;
        Ok(path)
    }
}
