use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cmd::Failure;

#[derive(Debug, Clone, Serialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

/// Everything an output depends on. Two runs with equal manifests write
/// equal bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub run_id: String,
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    /// Effective settings after merging flags, config file and defaults.
    pub config: serde_json::Value,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    /// `SOURCE_DATE_EPOCH` when set; wall-clock time is never recorded.
    pub timestamp: Option<u64>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &str, config: &impl Serialize, seed: Option<u64>, inputs: &[&Path]) -> Result<Self, Failure> {
        let config = serde_json::to_value(config).context("serializing config").map_err(Failure::usage)?;
        let inputs = inputs
            .iter()
            .map(|p| {
                let bytes = std::fs::read(p).with_context(|| format!("cannot read {}", p.display()))?;
                Ok(FileHash { path: p.display().to_string(), sha256: sha256_hex(&bytes) })
            })
            .collect::<anyhow::Result<Vec<_>>>()
            .map_err(Failure::usage)?;
        let version = env!("CARGO_PKG_VERSION").to_string();
        let key = serde_json::json!({
            "command": command,
            "version": version,
            "seed": seed,
            "config": config,
            "inputs": inputs.iter().map(|f| &f.sha256).collect::<Vec<_>>(),
        });
        let run_id = sha256_hex(key.to_string().as_bytes())[..16].to_string();
        let timestamp = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok());
        Ok(Self { run_id, command: command.into(), version, seed, config, inputs, outputs: Vec::new(), timestamp })
    }
}

/// `dir/name.ext` ↦ `dir/name.<suffix>`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

/// Files written by one command. Unless [`Outputs::finish`] runs, every file
/// is deleted again when this is dropped.
pub struct Outputs {
    written: Vec<PathBuf>,
    hashes: Vec<FileHash>,
    committed: bool,
}

impl Outputs {
    pub fn new() -> Self {
        Self { written: Vec::new(), hashes: Vec::new(), committed: false }
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<(), Failure> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("cannot create {}", dir.display()))
                .map_err(Failure::usage)?;
        }
        self.written.push(path.to_path_buf());
        std::fs::write(path, bytes)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::usage)?;
        self.hashes.push(FileHash { path: path.display().to_string(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    /// Writes the manifest next to `primary` and keeps all files.
    pub fn finish(mut self, mut manifest: RunManifest, primary: &Path) -> Result<(), Failure> {
        manifest.outputs = std::mem::take(&mut self.hashes);
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest is plain data");
        text.push('\n');
        self.write(&sidecar(primary, "manifest.json"), text.as_bytes())?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = std::fs::remove_file(p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_replaces_extension() {
        assert_eq!(sidecar(Path::new("out/fam.json"), "manifest.json"), PathBuf::from("out/fam.manifest.json"));
        assert_eq!(sidecar(Path::new("stats.csv"), "state.json"), PathBuf::from("stats.state.json"));
    }

    #[test]
    fn dropped_outputs_are_removed() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        {
            let mut out = Outputs::new();
            out.write(&p, b"x").unwrap();
            assert!(p.exists());
        }
        assert!(!p.exists());
    }

    #[test]
    fn run_id_depends_on_config() {
        let a = RunManifest::new("family", &serde_json::json!({"alpha": 0.1}), None, &[]).unwrap();
        let b = RunManifest::new("family", &serde_json::json!({"alpha": 0.2}), None, &[]).unwrap();
        let c = RunManifest::new("family", &serde_json::json!({"alpha": 0.1}), None, &[]).unwrap();
        assert_ne!(a.run_id, b.run_id);
        assert_eq!(a.run_id, c.run_id);
    }
}
