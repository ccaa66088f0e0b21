//! Per-stage manifests: what went in, what came out, and when.
//!
//! Hashes cover file bytes only; the timestamp lives in the manifest so
//! stage outputs stay byte-reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use mtbias_core::util::sha256_hex;
use serde::{Deserialize, Serialize};

use crate::{internal, CliError};

pub const MANIFEST_DIR: &str = "manifests";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    /// Relative to the output directory for stage products, else as given.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub stage: String,
    pub tool_version: String,
    pub created_at: DateTime<Utc>,
    /// Settings that influence the outputs.
    pub params: serde_json::Value,
    pub inputs: BTreeMap<String, FileDigest>,
    pub outputs: BTreeMap<String, FileDigest>,
    /// False when the stage wrote partial results (e.g. failed translations).
    pub complete: bool,
}

pub fn manifest_path(out: &Path, stage: &str) -> PathBuf {
    out.join(MANIFEST_DIR).join(format!("{stage}.json"))
}

pub fn read_manifest(out: &Path, stage: &str) -> Result<Option<Manifest>, CliError> {
    let path = manifest_path(out, stage);
    match fs::read_to_string(&path) {
        Ok(text) => serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| CliError::Data(format!("corrupt manifest {}: {e}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(internal(format!("cannot read {}: {e}", path.display()))),
    }
}

pub fn write_manifest(out: &Path, m: &Manifest) -> Result<(), CliError> {
    let path = manifest_path(out, &m.stage);
    fs::create_dir_all(path.parent().expect("manifest path has a parent")).map_err(internal)?;
    let mut text = serde_json::to_string_pretty(m).map_err(internal)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| internal(format!("cannot write {}: {e}", path.display())))
}

/// Path as recorded in a manifest.
pub fn display_path(out: &Path, path: &Path) -> String {
    path.strip_prefix(out)
        .map(|p| p.to_string_lossy().replace('\\', "/"))
        .unwrap_or_else(|_| path.to_string_lossy().into_owned())
}

pub fn digest_file(out: &Path, path: &Path) -> Result<FileDigest, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(format!("missing input {}: {e}", path.display())))?;
    Ok(FileDigest {
        path: display_path(out, path),
        sha256: sha256_hex(&bytes),
    })
}

/// Loads every manifest present in the output directory.
pub fn all_manifests(out: &Path, stages: &[&str]) -> Result<Vec<Manifest>, CliError> {
    let mut v = Vec::new();
    for s in stages {
        if let Some(m) = read_manifest(out, s)? {
            v.push(m);
        }
    }
    Ok(v)
}

/// Checks that `inputs` are exactly what the stages that produced them
/// wrote, and that each producer's own inputs still match, recursively.
/// Files no manifest claims are accepted as external inputs.
pub fn verify_chain(
    out: &Path,
    manifests: &[Manifest],
    inputs: &BTreeMap<String, FileDigest>,
) -> Result<(), CliError> {
    let producer = |path: &str| {
        manifests
            .iter()
            .find_map(|m| m.outputs.values().find(|d| d.path == path).map(|d| (m, d)))
    };
    let mut pending: Vec<(String, FileDigest)> = inputs
        .values()
        .map(|d| ("this stage".to_string(), d.clone()))
        .collect();
    let mut seen = BTreeSet::new();
    while let Some((consumer, d)) = pending.pop() {
        if !seen.insert((consumer.clone(), d.path.clone())) {
            continue;
        }
        let Some((m, produced)) = producer(&d.path) else {
            continue;
        };
        let current = digest_file(out, &out.join(&d.path))?;
        if current.sha256 != produced.sha256 {
            return Err(CliError::Data(format!(
                "hash mismatch: {} changed after stage {} wrote it; rerun {}",
                d.path, m.stage, m.stage
            )));
        }
        if d.sha256 != current.sha256 {
            return Err(CliError::Data(format!(
                "hash mismatch: stage {consumer} used a different {} than the current one; \
                 rerun {consumer}",
                d.path
            )));
        }
        for upstream in m.inputs.values() {
            pending.push((m.stage.clone(), upstream.clone()));
        }
    }
    Ok(())
}
