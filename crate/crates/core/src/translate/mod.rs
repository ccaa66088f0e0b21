//! Translation backends, the batch runner, and the replay cache.

pub mod cache;
pub mod mock;
pub mod remote;

use std::fmt;
use std::io::{self, BufRead, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::exec;
use crate::probegen::{Direction, Probe};
pub use cache::{CacheEntry, CacheError, TranslationCache};
pub use mock::{MockBackend, MockContext, MockPolicy};
pub use remote::{EndpointDescriptor, RemoteBackend, RemoteError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Live,
    Cache,
    Mock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// Connection or I/O failure talking to the endpoint.
    Transport,
    /// Non-success HTTP status after retries.
    Http,
    /// Response body did not contain a string at the configured path.
    Decode,
    MissingCredential,
    /// Probe slots do not fit what the backend expects.
    Schema,
    CacheMiss,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("{kind:?}: {message}")]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl Failure {
    pub fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Failure {
            kind,
            message: message.into(),
        }
    }
}

/// One (probe, backend) translation attempt. `target_text` is present iff
/// `error` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationRecord {
    pub probe_id: String,
    pub backend_id: String,
    pub direction: Direction,
    pub source_text: String,
    pub target_text: Option<String>,
    pub retrieved_at: Option<DateTime<Utc>>,
    pub origin: Origin,
    pub error: Option<Failure>,
}

impl TranslationRecord {
    pub fn succeeded(&self) -> bool {
        self.target_text.is_some()
    }
}

pub trait Backend: Send + Sync {
    fn id(&self) -> &str;

    /// `Live` for network backends, `Mock` for synthetic ones.
    fn origin(&self) -> Origin;

    fn translate(&self, probe: &Probe) -> Result<String, Failure>;
}

impl fmt::Debug for dyn Backend + '_ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Backend({})", self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchOptions {
    pub parallelism: usize,
    /// Never call the backend; misses become `CacheMiss` failures.
    pub cache_only: bool,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            parallelism: 1,
            cache_only: false,
        }
    }
}

/// Translates every probe, consulting `cache` first. Output order follows
/// `probes`. Fresh live results are appended to the cache as they arrive.
pub fn run_batch(
    probes: &[Probe],
    backend: &dyn Backend,
    cache: Option<&TranslationCache>,
    opts: BatchOptions,
) -> Vec<TranslationRecord> {
    let threads = opts.parallelism.max(1);
    exec::ordered_map(probes, threads, |probe| {
        translate_one(probe, backend, cache, opts.cache_only)
    })
}

fn translate_one(
    probe: &Probe,
    backend: &dyn Backend,
    cache: Option<&TranslationCache>,
    cache_only: bool,
) -> TranslationRecord {
    let mut record = TranslationRecord {
        probe_id: probe.id.clone(),
        backend_id: backend.id().to_string(),
        direction: probe.direction,
        source_text: probe.source_text.clone(),
        target_text: None,
        retrieved_at: None,
        origin: backend.origin(),
        error: None,
    };
    if let Some(hit) = cache.and_then(|c| c.get(backend.id(), probe.direction, &probe.source_text))
    {
        record.target_text = Some(hit.target);
        record.retrieved_at = hit.retrieved_at;
        record.origin = Origin::Cache;
        return record;
    }
    if cache_only {
        record.origin = Origin::Cache;
        record.error = Some(Failure::new(
            FailureKind::CacheMiss,
            format!("no cache entry for {} / {}", backend.id(), probe.id),
        ));
        return record;
    }
    match backend.translate(probe) {
        Ok(target) => {
            if backend.origin() == Origin::Live {
                let now = Utc::now();
                record.retrieved_at = Some(now);
                if let Some(c) = cache {
                    let entry = CacheEntry {
                        backend: backend.id().to_string(),
                        direction: probe.direction,
                        source: probe.source_text.clone(),
                        target: target.clone(),
                        retrieved_at: Some(now),
                    };
                    if let Err(e) = c.insert(entry) {
                        log::warn!("could not append to cache: {e}");
                    }
                }
            }
            record.target_text = Some(target);
        }
        Err(failure) => record.error = Some(failure),
    }
    record
}

/// Writes one JSON value per line.
pub fn write_jsonl<T: Serialize, W: Write>(items: &[T], mut out: W) -> io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[derive(Debug, thiserror::Error)]
pub enum JsonlError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

/// Reads a JSONL stream strictly: blank lines are skipped, anything else
/// must parse.
pub fn read_jsonl<T: serde::de::DeserializeOwned, R: BufRead>(
    input: R,
) -> Result<Vec<T>, JsonlError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| JsonlError::Parse {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probegen::Experiment;
    use std::collections::BTreeMap;
    use std::sync::atomic::{AtomicUsize, Ordering};

    struct Counting {
        calls: AtomicUsize,
        fail_on: Option<&'static str>,
    }

    impl Backend for Counting {
        fn id(&self) -> &str {
            "stub"
        }
        fn origin(&self) -> Origin {
            Origin::Live
        }
        fn translate(&self, probe: &Probe) -> Result<String, Failure> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            if Some(probe.id.as_str()) == self.fail_on {
                return Err(Failure::new(FailureKind::Transport, "boom"));
            }
            Ok(probe.source_text.to_uppercase())
        }
    }

    fn probes(n: usize) -> Vec<Probe> {
        (0..n)
            .map(|i| Probe {
                id: format!("p{i}"),
                experiment: Experiment::AdjectiveBase,
                direction: Direction::TrEn,
                source_text: format!("O iyi{i}"),
                slots: BTreeMap::from([("adjective".into(), format!("iyi{i}"))]),
            })
            .collect()
    }

    #[test]
    fn second_run_hits_cache_only() {
        let cache = TranslationCache::in_memory();
        let backend = Counting {
            calls: AtomicUsize::new(0),
            fail_on: None,
        };
        let ps = probes(5);
        let first = run_batch(&ps, &backend, Some(&cache), BatchOptions::default());
        assert_eq!(backend.calls.load(Ordering::SeqCst), 5);
        let second = run_batch(
            &ps,
            &backend,
            Some(&cache),
            BatchOptions {
                parallelism: 3,
                cache_only: false,
            },
        );
        assert_eq!(backend.calls.load(Ordering::SeqCst), 5);
        assert!(second.iter().all(|r| r.origin == Origin::Cache));
        let t1: Vec<_> = first.iter().map(|r| r.target_text.clone()).collect();
        let t2: Vec<_> = second.iter().map(|r| r.target_text.clone()).collect();
        assert_eq!(t1, t2);
    }

    #[test]
    fn failures_are_kept_in_order() {
        let backend = Counting {
            calls: AtomicUsize::new(0),
            fail_on: Some("p2"),
        };
        let ps = probes(4);
        let out = run_batch(
            &ps,
            &backend,
            None,
            BatchOptions {
                parallelism: 4,
                cache_only: false,
            },
        );
        assert_eq!(out.len(), 4);
        for (p, r) in ps.iter().zip(&out) {
            assert_eq!(p.id, r.probe_id);
        }
        assert_eq!(out[2].error.as_ref().unwrap().kind, FailureKind::Transport);
        assert!(out[2].target_text.is_none());
        assert!(run_batch(&[], &backend, None, BatchOptions::default()).is_empty());
    }

    #[test]
    fn cache_only_miss() {
        let backend = Counting {
            calls: AtomicUsize::new(0),
            fail_on: None,
        };
        let cache = TranslationCache::in_memory();
        let out = run_batch(
            &probes(2),
            &backend,
            Some(&cache),
            BatchOptions {
                parallelism: 1,
                cache_only: true,
            },
        );
        assert_eq!(backend.calls.load(Ordering::SeqCst), 0);
        assert!(out
            .iter()
            .all(|r| r.error.as_ref().unwrap().kind == FailureKind::CacheMiss));
    }

    #[test]
    fn jsonl_round_trip() {
        let backend = Counting {
            calls: AtomicUsize::new(0),
            fail_on: Some("p1"),
        };
        let recs = run_batch(&probes(3), &backend, None, BatchOptions::default());
        let mut buf = Vec::new();
        write_jsonl(&recs, &mut buf).unwrap();
        let back: Vec<TranslationRecord> = read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, recs);
        let err = read_jsonl::<TranslationRecord, _>(&b"{}\n"[..]).unwrap_err();
        assert!(matches!(err, JsonlError::Parse { line: 1, .. }));
    }
}
