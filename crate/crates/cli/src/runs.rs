//! Report files named by a content hash of the run configuration.

use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// FNV-1a over the canonical JSON of the configuration; stable across runs.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let canon = serde_json::to_string(config).expect("serializable config");
    let mut h: u64 = 0xcbf29ce484222325;
    for b in canon.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

pub struct RunDir {
    pub dir: PathBuf,
    pub hash: String,
}

impl RunDir {
    pub fn new<T: Serialize>(out: &Path, config: &T) -> std::io::Result<Self> {
        fs::create_dir_all(out)?;
        Ok(Self {
            dir: out.to_path_buf(),
            hash: config_hash(config),
        })
    }

    pub fn json_path(&self) -> PathBuf {
        self.dir.join(format!("{}.json", self.hash))
    }

    /// Write the deterministic report; append-only (an existing report for the
    /// same configuration is left untouched). The timestamp goes to a sidecar.
    pub fn write_report<T: Serialize>(&self, report: &T) -> std::io::Result<PathBuf> {
        let path = self.json_path();
        if !path.exists() {
            fs::write(&path, serde_json::to_string_pretty(report)?)?;
        }
        let meta = self.dir.join(format!("{}.meta.json", self.hash));
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        fs::write(&meta, format!("{{\"last_run_unix_ms\":{stamp}}}\n"))?;
        Ok(path)
    }

    pub fn write_csv(&self, name: &str, content: &str) -> std::io::Result<PathBuf> {
        let path = self.dir.join(format!("{}.{name}.csv", self.hash));
        if !path.exists() {
            fs::write(&path, content)?;
        }
        Ok(path)
    }
}
