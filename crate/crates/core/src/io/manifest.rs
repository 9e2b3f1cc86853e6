use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.json";
/// Identity of the generator behind every seeded draw.
pub const RNG_NAME: &str = "ChaCha8";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Path relative to the output directory, with `/` separators.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Record of one invocation: what was asked for and what was written.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    /// Configuration echo as TOML text.
    pub config: String,
    pub code_version: String,
    pub seed: u64,
    pub rng: String,
    pub started: String,
    pub finished: String,
    pub wall_seconds: f64,
    pub files: Vec<FileEntry>,
    #[serde(skip)]
    clock: Option<Instant>,
}

pub fn sha256_file(path: &Path) -> Result<(u64, String)> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok((bytes.len() as u64, hex::encode(Sha256::digest(&bytes))))
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl Manifest {
    pub fn start(command: &str, config: String, seed: u64) -> Self {
        Manifest {
            command: command.to_string(),
            config,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            rng: RNG_NAME.to_string(),
            started: now(),
            finished: String::new(),
            wall_seconds: 0.0,
            files: Vec::new(),
            clock: Some(Instant::now()),
        }
    }

    /// Lists every regular file below `dir` except manifests, sorted by path.
    pub fn record_dir(&mut self, dir: &Path) -> Result<()> {
        let mut found = Vec::new();
        collect(dir, dir, &mut found)?;
        found.sort();
        for rel in found {
            let (bytes, sha256) = sha256_file(&dir.join(&rel))?;
            let path = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .collect::<Vec<_>>()
                .join("/");
            self.files.push(FileEntry {
                path,
                bytes,
                sha256,
            });
        }
        Ok(())
    }

    pub fn finish(&mut self) {
        self.finished = now();
        if let Some(c) = self.clock {
            self.wall_seconds = c.elapsed().as_secs_f64();
        }
    }

    /// Writes `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_NAME);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            what: "manifest",
            detail: format!("{}: {e}", path.display()),
        })
    }

    /// Re-hashes the listed files under `dir`; returns the paths that differ.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for f in &self.files {
            let (bytes, sha) = sha256_file(&dir.join(&f.path))?;
            if bytes != f.bytes || sha != f.sha256 {
                bad.push(f.path.clone());
            }
        }
        Ok(bad)
    }
}

fn collect(root: &Path, dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let kind = entry.file_type().map_err(|e| Error::io(&path, e))?;
        if kind.is_dir() {
            collect(root, &path, out)?;
        } else if kind.is_file() && entry.file_name() != MANIFEST_NAME {
            out.push(path.strip_prefix(root).expect("below root").to_path_buf());
        }
    }
    Ok(())
}
