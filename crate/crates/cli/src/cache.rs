//! On-disk cache of derived artifacts, one JSON file per key.
//!
//! Entries carry the engine version; a mismatched or unreadable entry is
//! recomputed and overwritten. Writes go to a temporary file in the cache
//! directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use repstab_core::algebra::Family;
use repstab_core::ENGINE_VERSION;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Basis,
    Character,
    Decomposition,
}

impl ArtifactKind {
    fn name(self) -> &'static str {
        match self {
            ArtifactKind::Basis => "basis",
            ArtifactKind::Character => "character",
            ArtifactKind::Decomposition => "decomposition",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub family: Family,
    pub n: usize,
    pub degree: usize,
    pub kind: ArtifactKind,
}

impl CacheKey {
    fn file_name(&self) -> String {
        format!("{}-n{}-d{}-{}.json", self.family, self.n, self.degree, self.kind.name())
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub engine_version: String,
    pub key: CacheKey,
    pub payload: Value,
}

/// Outcome of a lookup, for diagnostics and tests.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Stale,
    Corrupt,
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn open(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("creating cache dir {}: {e}", dir.display())))?;
        Ok(Cache { dir: Some(dir.to_path_buf()) })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    pub fn lookup(&self, key: &CacheKey) -> (Lookup, Option<Value>) {
        let Some(path) = self.path(key) else {
            return (Lookup::Miss, None);
        };
        let Ok(bytes) = fs::read(&path) else {
            return (Lookup::Miss, None);
        };
        match serde_json::from_slice::<CacheEntry>(&bytes) {
            Ok(entry) if entry.engine_version == ENGINE_VERSION && &entry.key == key => (Lookup::Hit, Some(entry.payload)),
            Ok(_) => (Lookup::Stale, None),
            Err(_) => (Lookup::Corrupt, None),
        }
    }

    pub fn store(&self, key: &CacheKey, payload: &Value) -> Result<(), CliError> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(key)) else {
            return Ok(());
        };
        let entry = CacheEntry { engine_version: ENGINE_VERSION.to_string(), key: key.clone(), payload: payload.clone() };
        let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        serde_json::to_writer(&mut tmp, &entry).map_err(|e| CliError::Io(e.to_string()))?;
        tmp.flush().map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(())
    }

    /// Cached payload for `key`, computing and storing it when absent or invalid.
    pub fn get_or_compute(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<Value, CliError>,
    ) -> Result<Value, CliError> {
        let (status, hit) = self.lookup(key);
        if let Some(v) = hit {
            return Ok(v);
        }
        if status == Lookup::Corrupt {
            eprintln!("warning: corrupt cache entry {}; recomputing", key.file_name());
        }
        let v = compute()?;
        self.store(key, &v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn key() -> CacheKey {
        CacheKey { family: Family::Mbar, n: 5, degree: 1, kind: ArtifactKind::Character }
    }

    #[test]
    fn store_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert_eq!(cache.lookup(&key()).0, Lookup::Miss);
        let v = cache.get_or_compute(&key(), || Ok(json!({"[5]": "4/1"}))).unwrap();
        assert_eq!(cache.lookup(&key()), (Lookup::Hit, Some(v.clone())));
        let again = cache.get_or_compute(&key(), || panic!("should hit")).unwrap();
        assert_eq!(again, v);
    }

    #[test]
    fn corrupt_and_stale_entries_are_rederived() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let path = cache.path(&key()).unwrap();
        fs::write(&path, b"{not json").unwrap();
        assert_eq!(cache.lookup(&key()).0, Lookup::Corrupt);
        cache.get_or_compute(&key(), || Ok(json!(1))).unwrap();
        assert_eq!(cache.lookup(&key()).0, Lookup::Hit);

        let stale = json!({"engine_version": "old", "key": key(), "payload": 2});
        fs::write(&path, stale.to_string()).unwrap();
        assert_eq!(cache.lookup(&key()).0, Lookup::Stale);
        assert_eq!(cache.get_or_compute(&key(), || Ok(json!(3))).unwrap(), json!(3));
    }
}
