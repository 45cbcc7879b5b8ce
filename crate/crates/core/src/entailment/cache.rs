//! Disk cache for provider responses, one file per (model, prompt) key.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::hashing::sha256_hex;

/// Sidecar metadata written next to each cached response.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CacheMeta {
    pub model: String,
    /// RFC 3339, recorded at store time.
    pub timestamp: String,
    pub prompt_sha256: String,
}

/// Response files are named by the key digest; writes go through a
/// temp-file rename so concurrent readers never observe partial content.
#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

impl ResponseCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Key = SHA-256(model ‖ 0x00 ‖ prompt); the NUL keeps (model, prompt)
    /// pairs like ("ab","c") and ("a","bc") apart.
    pub fn key(model: &str, prompt: &str) -> String {
        let mut bytes = Vec::with_capacity(model.len() + 1 + prompt.len());
        bytes.extend_from_slice(model.as_bytes());
        bytes.push(0);
        bytes.extend_from_slice(prompt.as_bytes());
        sha256_hex(&bytes)
    }

    fn response_path(&self, key: &str) -> PathBuf {
        self.dir.join(key)
    }

    fn meta_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.meta.json"))
    }

    pub fn get(&self, model: &str, prompt: &str) -> Result<Option<String>> {
        let path = self.response_path(&Self::key(model, prompt));
        match std::fs::read_to_string(&path) {
            Ok(text) => Ok(Some(text)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    pub fn put(&self, model: &str, prompt: &str, response: &str) -> Result<()> {
        let key = Self::key(model, prompt);
        let meta = CacheMeta {
            model: model.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            prompt_sha256: sha256_hex(prompt.as_bytes()),
        };
        self.write_atomic(&self.response_path(&key), response.as_bytes())?;
        let mut meta_json = serde_json::to_string_pretty(&meta)?;
        meta_json.push('\n');
        self.write_atomic(&self.meta_path(&key), meta_json.as_bytes())
    }

    pub fn meta(&self, model: &str, prompt: &str) -> Result<Option<CacheMeta>> {
        let path = self.meta_path(&Self::key(model, prompt));
        match std::fs::read_to_string(&path) {
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        let mut tmp =
            tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
        tmp.persist(path)
            .map_err(|e| Error::io(path, e.error))
            .map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_verbatim_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let response = "2 (not enough info)\n  spazio preservato  ";
        assert_eq!(cache.get("gpt-4", "prompt").unwrap(), None);
        cache.put("gpt-4", "prompt", response).unwrap();
        assert_eq!(cache.get("gpt-4", "prompt").unwrap().as_deref(), Some(response));
    }

    #[test]
    fn distinct_models_use_distinct_entries() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        cache.put("model-a", "same prompt", "answer a").unwrap();
        cache.put("model-b", "same prompt", "answer b").unwrap();
        assert_eq!(cache.get("model-a", "same prompt").unwrap().unwrap(), "answer a");
        assert_eq!(cache.get("model-b", "same prompt").unwrap().unwrap(), "answer b");
        assert_ne!(
            ResponseCache::key("model-a", "same prompt"),
            ResponseCache::key("model-b", "same prompt")
        );
    }

    #[test]
    fn nul_delimiter_prevents_boundary_collisions() {
        assert_ne!(ResponseCache::key("ab", "c"), ResponseCache::key("a", "bc"));
    }

    #[test]
    fn sidecar_meta_records_model_and_prompt_digest() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        cache.put("gpt-4", "domanda", "risposta").unwrap();

        let meta = cache.meta("gpt-4", "domanda").unwrap().unwrap();
        assert_eq!(meta.model, "gpt-4");
        assert_eq!(meta.prompt_sha256, sha256_hex("domanda".as_bytes()));
        assert!(chrono::DateTime::parse_from_rfc3339(&meta.timestamp).is_ok());

        let key = ResponseCache::key("gpt-4", "domanda");
        assert!(dir.path().join(&key).is_file());
        assert!(dir.path().join(format!("{key}.meta.json")).is_file());
    }

    #[test]
    fn overwrite_replaces_the_entry() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        cache.put("m", "p", "first").unwrap();
        cache.put("m", "p", "second").unwrap();
        assert_eq!(cache.get("m", "p").unwrap().unwrap(), "second");
    }
}
