//! Append-only JSONL replay cache keyed on (backend, direction, source).

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::probegen::Direction;
use crate::util::sha256_hex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub backend: String,
    pub direction: Direction,
    pub source: String,
    pub target: String,
    pub retrieved_at: Option<DateTime<Utc>>,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Hash of the NFC-normalized key triple.
pub fn cache_key(backend: &str, direction: Direction, source: &str) -> String {
    let joined: String = format!("{backend}\0{}\0{source}", direction.as_str())
        .nfc()
        .collect();
    sha256_hex(joined.as_bytes())
}

fn same_source(a: &str, b: &str) -> bool {
    a.nfc().eq(b.nfc())
}

/// Thread-safe cache. Readers share a lock; appends are serialized.
#[derive(Debug)]
pub struct TranslationCache {
    path: Option<PathBuf>,
    entries: RwLock<HashMap<String, CacheEntry>>,
    writer: Mutex<Option<File>>,
    corrupt_lines: usize,
    collisions: Mutex<usize>,
}

impl TranslationCache {
    pub fn in_memory() -> Self {
        TranslationCache {
            path: None,
            entries: RwLock::new(HashMap::new()),
            writer: Mutex::new(None),
            corrupt_lines: 0,
            collisions: Mutex::new(0),
        }
    }

    /// Loads `path` if it exists; new entries are appended to it.
    pub fn open(path: &Path) -> Result<Self, CacheError> {
        let io_err = |source| CacheError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut cache = TranslationCache::in_memory();
        cache.path = Some(path.to_path_buf());
        if path.exists() {
            let reader = BufReader::new(File::open(path).map_err(io_err)?);
            let mut entries = HashMap::new();
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(io_err)?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheEntry>(&line) {
                    Ok(e) => {
                        let key = cache_key(&e.backend, e.direction, &e.source);
                        // later lines win, matching append order
                        entries.insert(key, e);
                    }
                    Err(err) => {
                        log::warn!(
                            "{}:{}: skipping corrupt cache line: {err}",
                            path.display(),
                            i + 1
                        );
                        cache.corrupt_lines += 1;
                    }
                }
            }
            cache.entries = RwLock::new(entries);
        }
        Ok(cache)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Lines skipped while loading.
    pub fn corrupt_lines(&self) -> usize {
        self.corrupt_lines
    }

    /// Lookups whose key matched an entry with a different raw source.
    pub fn collisions(&self) -> usize {
        *self.collisions.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, backend: &str, direction: Direction, source: &str) -> Option<CacheEntry> {
        let key = cache_key(backend, direction, source);
        let entries = self.entries.read().unwrap_or_else(|e| e.into_inner());
        let hit = entries.get(&key)?;
        if hit.backend != backend || hit.direction != direction || !same_source(&hit.source, source)
        {
            log::warn!(
                "cache key collision for {backend}: {source:?} vs {:?}",
                hit.source
            );
            *self.collisions.lock().unwrap_or_else(|e| e.into_inner()) += 1;
            return None;
        }
        Some(hit.clone())
    }

    /// Stores `entry` and, for file-backed caches, appends it to disk
    /// before returning.
    pub fn insert(&self, entry: CacheEntry) -> Result<(), CacheError> {
        let key = cache_key(&entry.backend, entry.direction, &entry.source);
        let mut writer = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(path) = &self.path {
            let io_err = |source| CacheError::Io {
                path: path.clone(),
                source,
            };
            if writer.is_none() {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(io_err)?;
                }
                *writer = Some(
                    OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(path)
                        .map_err(io_err)?,
                );
            }
            let file = writer.as_mut().expect("writer opened above");
            let mut line = serde_json::to_vec(&entry).expect("cache entries always serialize");
            line.push(b'\n');
            file.write_all(&line).map_err(io_err)?;
            file.flush().map_err(io_err)?;
        }
        self.entries
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, entry);
        Ok(())
    }
}
