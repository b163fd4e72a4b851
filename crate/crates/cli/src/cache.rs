//! On-disk result cache.
//!
//! Each cacheable unit (one enumeration, one verification row, one report)
//! is stored as a single JSON file named by the SHA-256 of its canonical key
//! string, so reruns with the same configuration read the stored payload and
//! produce byte-identical output.  Files are written to a temporary name in
//! the cache directory and renamed into place, so readers never observe a
//! partial file.

use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// A cache rooted at `dir`; `None` disables caching entirely.
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    fn path_for(dir: &Path, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        let hex: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
        dir.join(format!("{hex}.json"))
    }

    /// Returns the stored payload for `key`, or `None` on any miss: caching
    /// disabled, file absent, unreadable, or recorded for a different key.
    pub fn lookup(&self, key: &str) -> Option<Value> {
        let dir = self.dir.as_deref()?;
        let text = std::fs::read_to_string(Self::path_for(dir, key)).ok()?;
        let mut doc: Value = serde_json::from_str(&text).ok()?;
        if doc.get("key").and_then(Value::as_str) != Some(key) {
            return None;
        }
        Some(doc.get_mut("payload")?.take())
    }

    /// Stores `payload` under `key` via write-to-temp-then-rename.
    pub fn store(&self, key: &str, payload: &Value) -> Result<(), String> {
        let Some(dir) = self.dir.as_deref() else {
            return Ok(());
        };
        std::fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create cache directory {}: {e}", dir.display()))?;
        let doc = serde_json::json!({ "key": key, "payload": payload });
        let mut tmp = tempfile::NamedTempFile::new_in(dir)
            .map_err(|e| format!("cannot create cache temp file in {}: {e}", dir.display()))?;
        let text = serde_json::to_string_pretty(&doc).expect("cache document serializes");
        tmp.write_all(text.as_bytes())
            .and_then(|()| tmp.write_all(b"\n"))
            .map_err(|e| format!("cannot write cache file: {e}"))?;
        let path = Self::path_for(dir, key);
        tmp.persist(&path)
            .map_err(|e| format!("cannot move cache file into {}: {e}", path.display()))?;
        Ok(())
    }

    /// Looks up `key`, or computes, stores, and returns the payload.
    pub fn get_or_insert_with(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<Value, String>,
    ) -> Result<Value, String> {
        if let Some(hit) = self.lookup(key) {
            return Ok(hit);
        }
        let payload = compute()?;
        self.store(key, &payload)?;
        Ok(payload)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn store_then_lookup_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let payload = json!({"rows": [1, 2, 3], "note": "x"});
        cache.store("v1|demo|g=3", &payload).unwrap();
        assert_eq!(cache.lookup("v1|demo|g=3"), Some(payload));
        assert_eq!(cache.lookup("v1|demo|g=4"), None);
    }

    #[test]
    fn disabled_cache_never_hits_and_never_fails() {
        let cache = Cache::new(None);
        cache.store("k", &json!(1)).unwrap();
        assert_eq!(cache.lookup("k"), None);
    }

    #[test]
    fn compute_runs_once_per_key() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let first = cache
            .get_or_insert_with("k", || Ok(json!("fresh")))
            .unwrap();
        let second = cache
            .get_or_insert_with("k", || panic!("must come from the cache"))
            .unwrap();
        assert_eq!(first, second);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn key_collision_with_different_record_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        cache.store("a", &json!(1)).unwrap();
        // Overwrite the file body with a record for a different key.
        let file = std::fs::read_dir(dir.path())
            .unwrap()
            .next()
            .unwrap()
            .unwrap()
            .path();
        std::fs::write(&file, "{\"key\": \"b\", \"payload\": 2}").unwrap();
        assert_eq!(cache.lookup("a"), None);
    }
}
