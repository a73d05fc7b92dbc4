//! Artifacts: the effective config, a JSON report and optional CSV tables.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of the config's canonical JSON.
pub fn config_hash<C: Serialize>(cfg: &C) -> Result<String> {
    let bytes = serde_json::to_vec(cfg)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub struct Run {
    name: &'static str,
    out: PathBuf,
    start: Instant,
    config: Value,
    hash: String,
    files: Vec<String>,
}

impl Run {
    pub fn start<C: Serialize>(name: &'static str, out: &Path, cfg: &C) -> Result<Self> {
        fs::create_dir_all(out)?;
        let config = serde_json::to_value(cfg)?;
        let hash = config_hash(cfg)?;
        fs::write(out.join(format!("{name}.config.json")), serde_json::to_string_pretty(&config)? + "\n")?;
        Ok(Run { name, out: out.to_path_buf(), start: Instant::now(), config, hash, files: Vec::new() })
    }

    /// Writes `<name>[_suffix].csv` through `f`.
    pub fn csv<F>(&mut self, suffix: &str, f: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> Result<()>,
    {
        let file = if suffix.is_empty() { format!("{}.csv", self.name) } else { format!("{}_{suffix}.csv", self.name) };
        let mut buf = Vec::new();
        f(&mut buf)?;
        fs::write(self.out.join(&file), buf)?;
        self.files.push(file);
        Ok(())
    }

    /// Writes `<name>.json` and returns it for printing.
    pub fn finish<R: Serialize>(self, result: &R) -> Result<Value> {
        let report = json!({
            "command": self.name,
            "version": VERSION,
            "config_hash": self.hash,
            "wall_time_s": self.start.elapsed().as_secs_f64(),
            "config": self.config,
            "csv": self.files,
            "result": serde_json::to_value(result)?,
        });
        fs::write(self.out.join(format!("{}.json", self.name)), serde_json::to_string_pretty(&report)? + "\n")?;
        Ok(report)
    }
}

pub fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}
