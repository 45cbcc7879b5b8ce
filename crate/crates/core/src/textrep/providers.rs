//! Embedding and named-entity providers.
//!
//! Embeddings and entity extraction are externalized: they arrive either
//! from a file-backed lookup table or from an HTTP service. A
//! capitalization heuristic serves as the always-available entity
//! fallback. File tables are keyed by record id or by the SHA-256 of the
//! text; lookups try the raw text first, then its digest.

use std::collections::HashMap;
use std::path::Path;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::hashing::sha256_hex;
use crate::textrep::{segment_sentences, DenseVector, EntitySet};

/// Sidecar manifest describing an embedding table or service.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EmbeddingManifest {
    pub dimension: usize,
    pub provider_name: String,
}

impl EmbeddingManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&raw)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }
}

/// Deterministic text → fixed-dimension vector source. Providers are
/// shared across worker threads during batch featurization.
pub trait EmbeddingProvider: Send + Sync {
    fn name(&self) -> &str;
    fn dimension(&self) -> usize;
    fn embed(&self, text: &str) -> Result<DenseVector>;

    /// Batched variant; the default maps [`Self::embed`] in order.
    fn embed_batch(&self, texts: &[String]) -> Result<Vec<DenseVector>> {
        texts.iter().map(|t| self.embed(t)).collect()
    }
}

/// Text → entity multiset source.
pub trait NerProvider: Send + Sync {
    fn name(&self) -> &str;
    fn entities(&self, text: &str) -> Result<EntitySet>;
}

/// Fetch one embedding and enforce the provider's declared dimension.
pub fn get_embedding(provider: &dyn EmbeddingProvider, text: &str) -> Result<DenseVector> {
    let vector = provider.embed(text)?;
    if vector.len() != provider.dimension() {
        return Err(Error::DimensionMismatch {
            left: provider.dimension(),
            right: vector.len(),
        });
    }
    Ok(vector)
}

/// Fetch the entity multiset for a text.
pub fn extract_entity_set(provider: &dyn NerProvider, text: &str) -> Result<EntitySet> {
    provider.entities(text)
}

fn lookup_key(text: &str) -> String {
    if text.len() <= 80 {
        text.to_string()
    } else {
        sha256_hex(text.as_bytes())
    }
}

fn record_key(obj: &serde_json::Map<String, serde_json::Value>) -> Option<String> {
    for field in ["id", "text_sha256"] {
        if let Some(serde_json::Value::String(s)) = obj.get(field) {
            return Some(s.clone());
        }
    }
    None
}

/// Embeddings loaded from JSON-lines `{id | text_sha256, vector: [...]}`
/// plus a manifest `{dimension, provider_name}`.
pub struct FileEmbeddingProvider {
    manifest: EmbeddingManifest,
    table: HashMap<String, DenseVector>,
}

impl FileEmbeddingProvider {
    pub fn load(vectors_path: &Path, manifest_path: &Path) -> Result<Self> {
        let manifest = EmbeddingManifest::load(manifest_path)?;
        let raw = std::fs::read_to_string(vectors_path).map_err(|e| Error::io(vectors_path, e))?;
        let mut table = HashMap::new();
        for (idx, line) in raw.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(line)?;
            let obj = value.as_object().ok_or_else(|| {
                Error::InvalidInput(format!(
                    "{}: line {}: embedding record is not an object",
                    vectors_path.display(),
                    idx + 1
                ))
            })?;
            let key = record_key(obj).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "{}: line {}: missing id or text_sha256",
                    vectors_path.display(),
                    idx + 1
                ))
            })?;
            let vector: DenseVector = obj
                .get("vector")
                .and_then(|v| serde_json::from_value(v.clone()).ok())
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "{}: line {}: missing or non-numeric vector",
                        vectors_path.display(),
                        idx + 1
                    ))
                })?;
            if vector.len() != manifest.dimension {
                return Err(Error::DimensionMismatch {
                    left: manifest.dimension,
                    right: vector.len(),
                });
            }
            table.insert(key, vector);
        }
        Ok(FileEmbeddingProvider { manifest, table })
    }
}

impl EmbeddingProvider for FileEmbeddingProvider {
    fn name(&self) -> &str {
        &self.manifest.provider_name
    }

    fn dimension(&self) -> usize {
        self.manifest.dimension
    }

    fn embed(&self, text: &str) -> Result<DenseVector> {
        if let Some(v) = self.table.get(text) {
            return Ok(v.clone());
        }
        if let Some(v) = self.table.get(&sha256_hex(text.as_bytes())) {
            return Ok(v.clone());
        }
        Err(Error::MissingEmbedding {
            key: lookup_key(text),
        })
    }
}

/// Embeddings from an HTTP service: POST `{base}/embed` with
/// `{"texts": [...]}`, response = JSON array of vectors in input order.
pub struct HttpEmbeddingProvider {
    name: String,
    base_url: String,
    dimension: usize,
    client: reqwest::blocking::Client,
}

impl HttpEmbeddingProvider {
    pub fn new(name: &str, base_url: &str, dimension: usize, timeout: Duration) -> Result<Self> {
        Ok(HttpEmbeddingProvider {
            name: name.to_string(),
            base_url: base_url.trim_end_matches('/').to_string(),
            dimension,
            client: build_client(name, timeout)?,
        })
    }
}

fn build_client(name: &str, timeout: Duration) -> Result<reqwest::blocking::Client> {
    reqwest::blocking::Client::builder()
        .timeout(timeout)
        .build()
        .map_err(|e| Error::Provider {
            provider: name.to_string(),
            message: format!("client construction failed: {e}"),
        })
}

fn post_json<T: serde::de::DeserializeOwned>(
    client: &reqwest::blocking::Client,
    provider: &str,
    url: &str,
    body: &serde_json::Value,
) -> Result<T> {
    let provider_err = |message: String| Error::Provider {
        provider: provider.to_string(),
        message,
    };
    let response = client
        .post(url)
        .json(body)
        .send()
        .map_err(|e| provider_err(format!("request to {url} failed: {e}")))?;
    let status = response.status();
    if !status.is_success() {
        return Err(provider_err(format!("{url} returned status {status}")));
    }
    response
        .json::<T>()
        .map_err(|e| provider_err(format!("{url} returned malformed JSON: {e}")))
}

impl EmbeddingProvider for HttpEmbeddingProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, text: &str) -> Result<DenseVector> {
        let mut batch = self.embed_batch(std::slice::from_ref(&text.to_string()))?;
        batch.pop().ok_or_else(|| Error::Provider {
            provider: self.name.clone(),
            message: "empty response".to_string(),
        })
    }

    fn embed_batch(&self, texts: &[String]) -> Result<Vec<DenseVector>> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let url = format!("{}/embed", self.base_url);
        let body = serde_json::json!({ "texts": texts });
        let vectors: Vec<DenseVector> = post_json(&self.client, &self.name, &url, &body)?;
        if vectors.len() != texts.len() {
            return Err(Error::CountMismatch {
                expected: texts.len(),
                actual: vectors.len(),
            });
        }
        Ok(vectors)
    }
}

/// Entity sets loaded from JSON-lines
/// `{id | text_sha256, entities: {entity: count}}`.
pub struct FileNerProvider {
    name: String,
    table: HashMap<String, EntitySet>,
}

impl FileNerProvider {
    pub fn load(path: &Path, name: &str) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut table = HashMap::new();
        for (idx, line) in raw.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(line)?;
            let bad = |what: &str| {
                Error::InvalidInput(format!("{}: line {}: {what}", path.display(), idx + 1))
            };
            let obj = value.as_object().ok_or_else(|| bad("record is not an object"))?;
            let key = record_key(obj).ok_or_else(|| bad("missing id or text_sha256"))?;
            let entities = obj
                .get("entities")
                .and_then(|e| e.as_object())
                .ok_or_else(|| bad("missing entities object"))?;
            let mut set = EntitySet::new();
            for (entity, count) in entities {
                let count = count.as_u64().ok_or_else(|| bad("non-integer count"))?;
                set.add_count(entity.clone(), count);
            }
            table.insert(key, set);
        }
        Ok(FileNerProvider {
            name: name.to_string(),
            table,
        })
    }
}

impl NerProvider for FileNerProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn entities(&self, text: &str) -> Result<EntitySet> {
        if let Some(set) = self.table.get(text) {
            return Ok(set.clone());
        }
        if let Some(set) = self.table.get(&sha256_hex(text.as_bytes())) {
            return Ok(set.clone());
        }
        Err(Error::Provider {
            provider: self.name.clone(),
            message: format!("no stored entities for {:?}", lookup_key(text)),
        })
    }
}

/// Entities from an HTTP service: POST `{base}/entities` with
/// `{"texts": [...]}`, response = JSON array of {entity: count} objects.
pub struct HttpNerProvider {
    name: String,
    base_url: String,
    client: reqwest::blocking::Client,
}

impl HttpNerProvider {
    pub fn new(name: &str, base_url: &str, timeout: Duration) -> Result<Self> {
        Ok(HttpNerProvider {
            name: name.to_string(),
            base_url: base_url.trim_end_matches('/').to_string(),
            client: build_client(name, timeout)?,
        })
    }
}

impl NerProvider for HttpNerProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn entities(&self, text: &str) -> Result<EntitySet> {
        let url = format!("{}/entities", self.base_url);
        let body = serde_json::json!({ "texts": [text] });
        let sets: Vec<HashMap<String, u64>> = post_json(&self.client, &self.name, &url, &body)?;
        let first = sets.into_iter().next().ok_or_else(|| Error::Provider {
            provider: self.name.clone(),
            message: "empty response".to_string(),
        })?;
        let mut set = EntitySet::new();
        for (entity, count) in first {
            set.add_count(entity, count);
        }
        Ok(set)
    }
}

/// Capitalization heuristic: maximal runs of capitalized tokens form
/// entities, case-folded. A run that starts a sentence counts only when
/// it spans at least two tokens, so ordinary sentence capitalization is
/// not mistaken for a name. Trailing punctuation closes a run.
pub struct HeuristicNer;

impl NerProvider for HeuristicNer {
    fn name(&self) -> &str {
        "heuristic"
    }

    fn entities(&self, text: &str) -> Result<EntitySet> {
        let mut set = EntitySet::new();
        for sentence in segment_sentences(text) {
            let mut run: Vec<String> = Vec::new();
            let mut run_start = usize::MAX;
            for (i, raw) in sentence.split_whitespace().enumerate() {
                let token = raw.trim_matches(|c: char| !c.is_alphanumeric());
                let capitalized = token
                    .chars()
                    .find(|c| c.is_alphabetic())
                    .is_some_and(char::is_uppercase);
                if capitalized {
                    if run.is_empty() {
                        run_start = i;
                    }
                    run.push(token.to_string());
                    let has_trailing_punct = raw
                        .trim_start_matches(|c: char| !c.is_alphanumeric())
                        .len()
                        > token.len();
                    if has_trailing_punct {
                        flush_run(&mut set, &mut run, run_start);
                    }
                } else {
                    flush_run(&mut set, &mut run, run_start);
                }
            }
            flush_run(&mut set, &mut run, run_start);
        }
        Ok(set)
    }
}

fn flush_run(set: &mut EntitySet, run: &mut Vec<String>, run_start: usize) {
    if run.is_empty() {
        return;
    }
    // Single capitalized tokens at sentence start are ordinary casing.
    if run_start > 0 || run.len() >= 2 {
        set.add(run.join(" ").to_lowercase());
    }
    run.clear();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::StubServer;

    fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, content).unwrap();
        path
    }

    #[test]
    fn file_embeddings_lookup_by_id_and_sha() {
        let dir = tempfile::tempdir().unwrap();
        let sha = sha256_hex("some long text".as_bytes());
        let vectors = write_file(
            &dir,
            "vectors.jsonl",
            &format!(
                "{}\n{}\n",
                r#"{"id":"doc-1","vector":[1.0,2.0,3.0]}"#,
                format_args!("{{\"text_sha256\":\"{sha}\",\"vector\":[4.0,5.0,6.0]}}"),
            ),
        );
        let manifest = write_file(
            &dir,
            "manifest.json",
            r#"{"dimension":3,"provider_name":"fixture"}"#,
        );
        let provider = FileEmbeddingProvider::load(&vectors, &manifest).unwrap();
        assert_eq!(provider.name(), "fixture");

        assert_eq!(get_embedding(&provider, "doc-1").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(
            get_embedding(&provider, "some long text").unwrap(),
            vec![4.0, 5.0, 6.0]
        );
        // Determinism: identical text, identical vector.
        assert_eq!(
            get_embedding(&provider, "doc-1").unwrap(),
            get_embedding(&provider, "doc-1").unwrap()
        );

        match get_embedding(&provider, "doc-2") {
            Err(Error::MissingEmbedding { key }) => assert_eq!(key, "doc-2"),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn file_embeddings_reject_wrong_dimension() {
        let dir = tempfile::tempdir().unwrap();
        let vectors = write_file(&dir, "v.jsonl", r#"{"id":"a","vector":[1.0,2.0]}"#);
        let manifest = write_file(
            &dir,
            "m.json",
            r#"{"dimension":3,"provider_name":"fixture"}"#,
        );
        assert!(matches!(
            FileEmbeddingProvider::load(&vectors, &manifest),
            Err(Error::DimensionMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn http_embeddings_round_trip() {
        let server = StubServer::spawn(|body| {
            let request: serde_json::Value = serde_json::from_str(body).unwrap();
            let n = request["texts"].as_array().unwrap().len();
            let vectors: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64, 1.0]).collect();
            (200, serde_json::to_string(&vectors).unwrap())
        });
        let provider =
            HttpEmbeddingProvider::new("stub", server.url(), 2, Duration::from_secs(5)).unwrap();
        let batch = provider
            .embed_batch(&["a".to_string(), "b".to_string()])
            .unwrap();
        assert_eq!(batch, vec![vec![0.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(get_embedding(&provider, "x").unwrap(), vec![0.0, 1.0]);
        assert_eq!(server.hits(), 2);
    }

    #[test]
    fn http_error_status_is_provider_error() {
        let server = StubServer::spawn(|_| (500, "{\"error\":\"boom\"}".to_string()));
        let provider =
            HttpEmbeddingProvider::new("stub", server.url(), 2, Duration::from_secs(5)).unwrap();
        assert!(matches!(
            provider.embed("x"),
            Err(Error::Provider { .. })
        ));
    }

    #[test]
    fn file_ner_returns_stored_sets_verbatim() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "entities.jsonl",
            r#"{"id":"t1","entities":{"anne rice":2,"san francisco":1}}"#,
        );
        let provider = FileNerProvider::load(&path, "fixture-ner").unwrap();
        let set = extract_entity_set(&provider, "t1").unwrap();
        assert_eq!(set.count("anne rice"), 2);
        assert_eq!(set.count("san francisco"), 1);
        assert!(extract_entity_set(&provider, "t2").is_err());
    }

    #[test]
    fn http_ner_parses_counts() {
        let server = StubServer::spawn(|_| (200, r#"[{"rome":2,"italy":1}]"#.to_string()));
        let provider = HttpNerProvider::new("stub", server.url(), Duration::from_secs(5)).unwrap();
        let set = provider.entities("whatever").unwrap();
        assert_eq!(set.count("rome"), 2);
        assert_eq!(set.count("italy"), 1);
    }

    #[test]
    fn heuristic_extracts_capitalized_runs() {
        let set = HeuristicNer.entities("Anne Rice moved to San Francisco").unwrap();
        assert_eq!(set.count("anne rice"), 1);
        assert_eq!(set.count("san francisco"), 1);
        assert_eq!(set.distinct(), 2);
    }

    #[test]
    fn heuristic_ignores_ordinary_sentence_casing() {
        let set = HeuristicNer.entities("The cat sat. It was warm.").unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn heuristic_counts_repeats_and_breaks_on_punctuation() {
        let set = HeuristicNer
            .entities("We saw Paris, Rome and Paris again")
            .unwrap();
        assert_eq!(set.count("paris"), 2);
        assert_eq!(set.count("rome"), 1);
        // The comma after "Paris" keeps "Paris Rome" from fusing.
        assert_eq!(set.count("paris rome"), 0);
    }

    #[test]
    fn heuristic_empty_text() {
        assert!(HeuristicNer.entities("").unwrap().is_empty());
    }
}
