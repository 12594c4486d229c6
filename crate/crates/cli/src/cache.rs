//! On-disk cache of derived per-spec results.
//!
//! Entries are keyed by the schema version, the canonical spec and the
//! artifact kind. The cache is advisory: unreadable, stale or mismatched
//! entries are recomputed, and write failures only produce a warning.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::SCHEMA_VERSION;

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    schema_version: u32,
    spec: String,
    kind: String,
    payload: T,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
}

pub struct Cache {
    dir: Option<PathBuf>,
    stats: CacheStats,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir, stats: CacheStats::default() }
    }

    pub fn stats(&self) -> Option<CacheStats> {
        self.dir.as_ref().map(|_| self.stats)
    }

    fn path(dir: &std::path::Path, spec: &str, kind: &str) -> PathBuf {
        let mut h = Sha256::new();
        h.update(SCHEMA_VERSION.to_le_bytes());
        for part in [spec, kind] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        dir.join(format!("{:x}.json", h.finalize()))
    }

    /// The cached payload for `(spec, kind)`, or `compute()` stored for next time.
    pub fn get_or_compute<T, E>(
        &mut self,
        spec: &str,
        kind: &str,
        compute: impl FnOnce() -> Result<T, E>,
    ) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        let Some(dir) = self.dir.clone() else {
            return compute();
        };
        let path = Self::path(&dir, spec, kind);
        if let Some(payload) = read_entry(&path, spec, kind) {
            self.stats.hits += 1;
            return Ok(payload);
        }
        self.stats.misses += 1;
        let payload = compute()?;
        let entry = Entry {
            schema_version: SCHEMA_VERSION,
            spec: spec.to_string(),
            kind: kind.to_string(),
            payload,
        };
        if let Err(e) = write_entry(&dir, &path, &entry) {
            eprintln!("warning: cache write to {} failed: {e}", dir.display());
        }
        Ok(entry.payload)
    }
}

fn read_entry<T: DeserializeOwned>(path: &std::path::Path, spec: &str, kind: &str) -> Option<T> {
    let bytes = fs::read(path).ok()?;
    let entry: Entry<T> = serde_json::from_slice(&bytes).ok()?;
    (entry.schema_version == SCHEMA_VERSION && entry.spec == spec && entry.kind == kind)
        .then_some(entry.payload)
}

fn write_entry<T: Serialize>(dir: &std::path::Path, path: &std::path::Path, entry: &Entry<T>) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, entry)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
