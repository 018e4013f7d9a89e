//! Content-addressed cache of exact volume counts.
//!
//! Keys are SHA-256 digests of a canonical description of the computation
//! (formula text, model parameters, ambient identity, evaluation depth).
//! Records are small JSON files written atomically via a temp file and
//! rename, so concurrent writers of identical content are safe. The cache
//! is best-effort: unreadable or version-mismatched entries are misses.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_VERSION: u32 = 1;

/// Exact counts at one evaluation depth, counts as decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheRecord {
    pub true_count: String,
    pub unknown_count: String,
    pub version: u32,
}

/// A cache directory plus hit/miss counters.
pub struct CacheHandle {
    dir: PathBuf,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl CacheHandle {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<CacheHandle> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(CacheHandle { dir, hits: AtomicU64::new(0), misses: AtomicU64::new(0) })
    }

    /// Reads CHARVOL_CACHE_DIR; unset or uncreatable means no cache.
    pub fn from_env() -> Option<CacheHandle> {
        let dir = std::env::var_os("CHARVOL_CACHE_DIR")?;
        CacheHandle::new(PathBuf::from(dir)).ok()
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", digest(key)))
    }

    pub fn lookup(&self, key: &str) -> Option<CacheRecord> {
        let found = fs::read(self.path_for(key))
            .ok()
            .and_then(|bytes| serde_json::from_slice::<CacheRecord>(&bytes).ok())
            .filter(|r| r.version == CACHE_VERSION);
        match found {
            Some(r) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(r)
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    pub fn store(&self, key: &str, record: &CacheRecord) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&serde_json::to_vec(record)?)?;
        tmp.persist(self.path_for(key))?;
        Ok(())
    }
}

/// Hex SHA-256 of the key string.
pub fn digest(key: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(key.as_bytes());
    let out = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in out {
        use std::fmt::Write as _;
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_roundtrip_and_count_hits() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheHandle::new(dir.path()).unwrap();
        assert!(cache.lookup("some key").is_none());
        let record = CacheRecord {
            true_count: "120".into(),
            unknown_count: "0".into(),
            version: CACHE_VERSION,
        };
        cache.store("some key", &record).unwrap();
        let back = cache.lookup("some key").unwrap();
        assert_eq!(back.true_count, "120");
        assert_eq!(back.unknown_count, "0");
        assert_eq!((cache.hits(), cache.misses()), (1, 1));
    }

    #[test]
    fn version_mismatch_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheHandle::new(dir.path()).unwrap();
        let record = CacheRecord {
            true_count: "1".into(),
            unknown_count: "0".into(),
            version: CACHE_VERSION + 1,
        };
        cache.store("k", &record).unwrap();
        assert!(cache.lookup("k").is_none());
    }

    #[test]
    fn digests_are_stable() {
        assert_eq!(digest("a"), digest("a"));
        assert_ne!(digest("a"), digest("b"));
        assert_eq!(digest("").len(), 64);
    }
}
