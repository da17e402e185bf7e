//! Output directories: a lockfile against concurrent runs, staged writes that
//! only land on success, and the run manifest.

use anyhow::{bail, Context, Result};
use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

const LOCK: &str = ".discomine.lock";
const MANIFEST: &str = "manifest.json";

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub timestamp: String,
    pub config: serde_json::Value,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the current time.
fn timestamp() -> String {
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    now.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// An output directory being written. Files go to a staging directory and
/// are moved into place by [`OutputDir::commit`]; dropping without a commit
/// removes everything this run created.
pub struct OutputDir {
    root: PathBuf,
    staging: PathBuf,
    created_root: bool,
    staged: Vec<String>,
    committed: bool,
}

impl OutputDir {
    pub fn open(root: &Path) -> Result<Self> {
        let created_root = !root.exists();
        fs::create_dir_all(root).with_context(|| format!("cannot create output directory {}", root.display()))?;
        let lock = root.join(LOCK);
        if let Err(e) = fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
            if e.kind() == std::io::ErrorKind::AlreadyExists {
                bail!(
                    "output directory {} is locked by another run (remove {} if stale)",
                    root.display(),
                    lock.display()
                );
            }
            return Err(e).with_context(|| format!("cannot lock {}", root.display()));
        }
        let staging = root.join(format!(".staging-{}", std::process::id()));
        let dir = OutputDir { root: root.to_path_buf(), staging, created_root, staged: Vec::new(), committed: false };
        fs::create_dir_all(&dir.staging).with_context(|| format!("cannot create {}", dir.staging.display()))?;
        Ok(dir)
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
        let path = self.staging.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.staged.push(name.to_string());
        Ok(())
    }

    /// Moves staged files into place and writes the manifest last.
    pub fn commit(mut self, command: &str, config: serde_json::Value, inputs: &[&Path]) -> Result<()> {
        let mut input_digests = BTreeMap::new();
        for p in inputs {
            input_digests.insert(p.display().to_string(), sha256_file(p)?);
        }
        let mut outputs = BTreeMap::new();
        for name in &self.staged {
            outputs.insert(name.clone(), sha256_file(&self.staging.join(name))?);
        }
        for name in &self.staged {
            fs::rename(self.staging.join(name), self.root.join(name))
                .with_context(|| format!("cannot move {name} into {}", self.root.display()))?;
        }
        let manifest = RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            config,
            inputs: input_digests,
            outputs,
        };
        let json = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(self.root.join(MANIFEST), json).context("cannot write manifest")?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.staging);
        let _ = fs::remove_file(self.root.join(LOCK));
        if !self.committed && self.created_root {
            let _ = fs::remove_dir(&self.root);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commit_moves_files_and_writes_manifest() {
        let tmp = tempfile::tempdir().unwrap();
        let root = tmp.path().join("out");
        let mut out = OutputDir::open(&root).unwrap();
        out.write("a.txt", "hello").unwrap();
        out.commit("test", serde_json::json!({"k": 1}), &[]).unwrap();
        assert_eq!(fs::read_to_string(root.join("a.txt")).unwrap(), "hello");
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(root.join(MANIFEST)).unwrap()).unwrap();
        assert_eq!(manifest["outputs"]["a.txt"], hex::encode(Sha256::digest(b"hello")));
        assert!(!root.join(LOCK).exists());
        assert_eq!(fs::read_dir(&root).unwrap().count(), 2);
    }

    #[test]
    fn abandoned_run_leaves_nothing() {
        let tmp = tempfile::tempdir().unwrap();
        let root = tmp.path().join("out");
        {
            let mut out = OutputDir::open(&root).unwrap();
            out.write("a.txt", "partial").unwrap();
        }
        assert!(!root.exists());
    }

    #[test]
    fn lock_blocks_a_second_run() {
        let tmp = tempfile::tempdir().unwrap();
        let _first = OutputDir::open(tmp.path()).unwrap();
        assert!(OutputDir::open(tmp.path()).is_err());
    }
}
