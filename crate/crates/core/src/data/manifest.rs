//! Dataset manifests: flat `key = value` text files describing one export.
//!
//! ```text
//! # comment
//! dataset = STS16
//! model_id = all-MiniLM-L6-v2
//! split = test
//! path = sts16.embp
//! dim = 384
//! n_pairs = 1379
//! sha256 = 4f0c...
//! ```
//!
//! A relative `path` is resolved against the manifest's own directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{read_header, sha256_file, DatasetKind};
use crate::error::{Error, Result};

const KEYS: [&str; 7] = ["dataset", "model_id", "split", "path", "dim", "n_pairs", "sha256"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetManifest {
    pub dataset: DatasetKind,
    pub model_id: String,
    pub split: String,
    pub path: PathBuf,
    pub dim: u32,
    pub n_pairs: u64,
    pub sha256: String,
}

impl DatasetManifest {
    /// Renders the manifest text. `path` is written as stored.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dataset = {}", self.dataset.id());
        let _ = writeln!(s, "model_id = {}", self.model_id);
        let _ = writeln!(s, "split = {}", self.split);
        let _ = writeln!(s, "path = {}", self.path.display());
        let _ = writeln!(s, "dim = {}", self.dim);
        let _ = writeln!(s, "n_pairs = {}", self.n_pairs);
        let _ = writeln!(s, "sha256 = {}", self.sha256);
        s
    }

    /// Checks the referenced file's header and digest against the manifest.
    pub fn verify(&self) -> Result<()> {
        let shown = self.path.display().to_string();
        let header = read_header(&self.path)?;
        if header.dim != self.dim {
            return Err(Error::Integrity {
                path: shown,
                expected: format!("dim {}", self.dim),
                found: format!("dim {}", header.dim),
            });
        }
        if header.n_pairs != self.n_pairs {
            return Err(Error::Integrity {
                path: shown,
                expected: format!("{} pairs", self.n_pairs),
                found: format!("{} pairs", header.n_pairs),
            });
        }
        let digest = sha256_file(&self.path)?;
        if !digest.eq_ignore_ascii_case(&self.sha256) {
            return Err(Error::Integrity { path: shown, expected: self.sha256.clone(), found: digest });
        }
        Ok(())
    }
}

/// Parses manifest text without touching the embedding file.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<DatasetManifest> {
    let mut fields = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("manifest line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Format(format!("manifest line {}: unknown key `{key}`", lineno + 1)));
        }
        if fields.insert(key, value.trim().to_owned()).is_some() {
            return Err(Error::Format(format!("manifest line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    let mut take = |key: &str| {
        fields
            .remove(key)
            .ok_or_else(|| Error::Format(format!("manifest is missing `{key}`")))
    };
    let dataset: DatasetKind = take("dataset")?.parse()?;
    let model_id = take("model_id")?;
    let split = take("split")?;
    let path = PathBuf::from(take("path")?);
    let dim = take("dim")?
        .parse::<u32>()
        .map_err(|e| Error::Format(format!("manifest dim: {e}")))?;
    let n_pairs = take("n_pairs")?
        .parse::<u64>()
        .map_err(|e| Error::Format(format!("manifest n_pairs: {e}")))?;
    let sha256 = take("sha256")?;
    if sha256.len() != 64 || !sha256.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::Format("manifest sha256 must be 64 hex digits".into()));
    }
    if dim == 0 || n_pairs == 0 {
        return Err(Error::Format("manifest dim and n_pairs must be positive".into()));
    }
    let path = if path.is_relative() { base_dir.join(path) } else { path };
    Ok(DatasetManifest { dataset, model_id, split, path, dim, n_pairs, sha256: sha256.to_ascii_lowercase() })
}

/// Loads a manifest and verifies it against the embedding file it names.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let manifest = parse_manifest(&text, base)?;
    manifest.verify()?;
    Ok(manifest)
}
