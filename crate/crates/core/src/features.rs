//! Per-pair similarity feature vectors feeding the classifier ensemble.
//!
//! A [`FeatureConfig`] is an ordered list of feature specs; each spec
//! names a representation technique (TFIDF under some parameters, an
//! embedding provider, sentence-level max pooling, or an entity
//! extractor) plus a metric. Translated-text variants are expressed by
//! registering a provider that serves vectors or entities for the
//! translated texts under its own name.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use crate::corpus::LabeledPair;
use crate::error::{Error, Result};
use crate::hashing::sha256_hex;
use crate::simmetrics::{
    cosine, cosine_sparse, max_sentence_similarity, neg_euclidean, neg_euclidean_sparse,
    set_similarity, SetMetric, VectorMetric,
};
use crate::textrep::{
    fit_tfidf, segment_sentences, transform_tfidf, EmbeddingProvider, HeuristicNer, NerProvider,
    TfidfModel, TfidfParams,
};

/// One feature: a representation technique plus a metric.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureSpec {
    /// TFIDF vectors of statement and document under one grid setting.
    Tfidf {
        params: TfidfParams,
        metric: VectorMetric,
    },
    /// Whole-text embeddings from a named provider.
    Embedding {
        provider: String,
        metric: VectorMetric,
    },
    /// Statement embedding vs. each document sentence, max-pooled.
    EmbeddingSentence {
        provider: String,
        metric: VectorMetric,
    },
    /// Entity multisets from a named extractor.
    EntitySim {
        provider: String,
        metric: SetMetric,
    },
}

impl FeatureSpec {
    /// Stable column identifier used in feature CSV headers.
    pub fn id(&self) -> String {
        match self {
            FeatureSpec::Tfidf { params, metric } => {
                format!("tfidf:{}:{}", params.label(), metric.metric_id())
            }
            FeatureSpec::Embedding { provider, metric } => {
                format!("embedding:{provider}:{}", metric.metric_id())
            }
            FeatureSpec::EmbeddingSentence { provider, metric } => {
                format!("embedding_sentence:{provider}:{}", metric.metric_id())
            }
            FeatureSpec::EntitySim { provider, metric } => {
                format!("entities:{provider}:{}", metric.metric_id())
            }
        }
    }
}

/// Ordered, nonempty list of feature specs; the order is the feature
/// order in every vector and matrix built from it.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FeatureConfig {
    pub specs: Vec<FeatureSpec>,
}

impl FeatureConfig {
    pub fn new(specs: Vec<FeatureSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::InvalidInput("feature config has no specs".into()));
        }
        Ok(FeatureConfig { specs })
    }

    /// Collision-resistant digest over the canonical serialization;
    /// changes iff any spec (or the order) changes.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(&self.specs).expect("specs serialize");
        sha256_hex(canonical.as_bytes())
    }

    pub fn column_ids(&self) -> Vec<String> {
        self.specs.iter().map(FeatureSpec::id).collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: FeatureConfig = serde_json::from_str(&raw)?;
        if config.specs.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{}: feature config has no specs",
                path.display()
            )));
        }
        Ok(config)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }
}

/// Build the default config from grid-search results: the top `m` TFIDF
/// settings by F1 (stable order on ties) plus both vector metrics for
/// every available embedding provider and all set metrics for every
/// available entity provider. Missing providers are simply omitted.
pub fn default_from_grid(
    results: &[(TfidfParams, VectorMetric, f64)],
    top_m: usize,
    embedding_providers: &[String],
    ner_providers: &[String],
) -> Result<FeatureConfig> {
    if results.is_empty() && embedding_providers.is_empty() && ner_providers.is_empty() {
        return Err(Error::InvalidInput(
            "no grid results and no providers: config would be empty".into(),
        ));
    }
    let mut ranked: Vec<&(TfidfParams, VectorMetric, f64)> = results.iter().collect();
    ranked.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap_or(std::cmp::Ordering::Equal));

    let mut specs: Vec<FeatureSpec> = ranked
        .into_iter()
        .take(top_m)
        .map(|&(params, metric, _)| FeatureSpec::Tfidf { params, metric })
        .collect();

    for provider in embedding_providers {
        for metric in [VectorMetric::Cosine, VectorMetric::NegEuclidean] {
            specs.push(FeatureSpec::Embedding {
                provider: provider.clone(),
                metric,
            });
            specs.push(FeatureSpec::EmbeddingSentence {
                provider: provider.clone(),
                metric,
            });
        }
    }
    for provider in ner_providers {
        for metric in SetMetric::ALL {
            specs.push(FeatureSpec::EntitySim {
                provider: provider.clone(),
                metric,
            });
        }
    }
    FeatureConfig::new(specs)
}

static HEURISTIC_NER: HeuristicNer = HeuristicNer;

/// Named providers resolvable from feature specs. The `"heuristic"`
/// entity provider is always available without registration.
#[derive(Default)]
pub struct ProviderSet {
    embeddings: HashMap<String, Box<dyn EmbeddingProvider>>,
    ners: HashMap<String, Box<dyn NerProvider>>,
    /// Fall back to the capitalization heuristic when a registered
    /// entity provider fails.
    pub ner_fallback: bool,
}

impl ProviderSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_embedding(&mut self, provider: Box<dyn EmbeddingProvider>) {
        self.embeddings.insert(provider.name().to_string(), provider);
    }

    pub fn add_ner(&mut self, provider: Box<dyn NerProvider>) {
        self.ners.insert(provider.name().to_string(), provider);
    }

    pub fn embedding_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.embeddings.keys().cloned().collect();
        names.sort();
        names
    }

    pub fn ner_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.ners.keys().cloned().collect();
        names.sort();
        names
    }

    pub fn embedding(&self, name: &str) -> Result<&dyn EmbeddingProvider> {
        self.embeddings
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Provider {
                provider: name.to_string(),
                message: "embedding provider not registered".to_string(),
            })
    }

    fn ner(&self, name: &str) -> Result<&dyn NerProvider> {
        if let Some(p) = self.ners.get(name) {
            return Ok(p.as_ref());
        }
        if name == "heuristic" {
            return Ok(&HEURISTIC_NER);
        }
        Err(Error::Provider {
            provider: name.to_string(),
            message: "entity provider not registered".to_string(),
        })
    }

    /// Entity set via the named provider, with the optional heuristic
    /// fallback on provider failure.
    pub fn entities(&self, name: &str, text: &str) -> Result<crate::textrep::EntitySet> {
        match self.ner(name).and_then(|p| p.entities(text)) {
            Ok(set) => Ok(set),
            Err(_) if self.ner_fallback => HEURISTIC_NER.entities(text),
            Err(e) => Err(e),
        }
    }
}

/// Ordered similarity scores for one pair.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FeatureVector {
    pub pair_id: String,
    pub values: Vec<f64>,
    pub config_hash: String,
}

/// Row-aligned batch of feature vectors with their column identifiers
/// and, when built from labeled pairs, the numeric labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub config_hash: String,
    pub columns: Vec<String>,
    pub pair_ids: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.values.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    /// One column as a dense vector.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[index]).collect()
    }

    /// Write as CSV: pair_id, label, config_hash, then one column per
    /// feature spec id.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        let mut header = vec!["pair_id".to_string(), "label".to_string(), "config_hash".to_string()];
        header.extend(self.columns.iter().cloned());
        writer.write_record(&header)?;
        for i in 0..self.n_rows() {
            let mut record = vec![
                self.pair_ids[i].clone(),
                self.labels[i].to_string(),
                self.config_hash.clone(),
            ];
            record.extend(self.values[i].iter().map(|v| format_float(*v)));
            writer.write_record(&record)?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<FeatureMatrix> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path)?;
        let headers = reader.headers()?.clone();
        let fields: Vec<&str> = headers.iter().collect();
        if fields.len() < 4
            || fields[0] != "pair_id"
            || fields[1] != "label"
            || fields[2] != "config_hash"
        {
            return Err(Error::InvalidInput(format!(
                "{}: expected header pair_id,label,config_hash,<features...>",
                path.display()
            )));
        }
        let columns: Vec<String> = fields[3..].iter().map(|s| s.to_string()).collect();

        let mut config_hash = String::new();
        let mut pair_ids = Vec::new();
        let mut labels = Vec::new();
        let mut values = Vec::new();
        for (idx, row) in reader.records().enumerate() {
            let record = row?;
            let bad = |what: String| {
                Error::InvalidInput(format!("{}: row {}: {what}", path.display(), idx + 1))
            };
            if record.len() != columns.len() + 3 {
                return Err(bad(format!(
                    "expected {} fields, found {}",
                    columns.len() + 3,
                    record.len()
                )));
            }
            pair_ids.push(record[0].to_string());
            labels.push(
                record[1]
                    .parse::<u8>()
                    .map_err(|e| bad(format!("bad label: {e}")))?,
            );
            let hash = record[2].to_string();
            if config_hash.is_empty() {
                config_hash = hash;
            } else if config_hash != hash {
                return Err(bad("config_hash differs between rows".to_string()));
            }
            let row_values: Vec<f64> = record
                .iter()
                .skip(3)
                .map(|v| v.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| bad(format!("bad feature value: {e}")))?;
            values.push(row_values);
        }
        Ok(FeatureMatrix {
            config_hash,
            columns,
            pair_ids,
            values,
            labels,
        })
    }
}

/// Shortest representation that round-trips exactly through f64 parsing.
fn format_float(v: f64) -> String {
    let mut s = format!("{v}");
    if s.parse::<f64>() != Ok(v) {
        s = format!("{v:?}");
    }
    s
}

/// Fitted featurizer: the config plus one fitted TFIDF model per
/// distinct grid setting in it.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FeatureExtractor {
    pub version: u32,
    pub config: FeatureConfig,
    config_hash: String,
    tfidf_models: BTreeMap<String, TfidfModel>,
}

impl FeatureExtractor {
    /// Fit every distinct TFIDF setting in the config on the corpus.
    pub fn fit<S: AsRef<str> + Sync>(config: FeatureConfig, corpus: &[S]) -> Result<Self> {
        let mut needed: BTreeMap<String, TfidfParams> = BTreeMap::new();
        for spec in &config.specs {
            if let FeatureSpec::Tfidf { params, .. } = spec {
                needed.insert(params.label(), *params);
            }
        }
        let entries: Vec<(&String, &TfidfParams)> = needed.iter().collect();
        let fitted = crate::par::try_map_slice(&entries, |(label, params)| {
            fit_tfidf(corpus, **params).map(|m| ((*label).clone(), m))
        })?;
        let config_hash = config.hash();
        Ok(FeatureExtractor {
            version: 1,
            config,
            config_hash,
            tfidf_models: fitted.into_iter().collect(),
        })
    }

    /// Fit on the union of claims and texts of the training pairs.
    pub fn fit_from_pairs(config: FeatureConfig, pairs: &[LabeledPair]) -> Result<Self> {
        let mut corpus = Vec::with_capacity(pairs.len() * 2);
        for p in pairs {
            corpus.push(p.claim.as_str());
            corpus.push(p.text.as_str());
        }
        Self::fit(config, &corpus)
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self)?;
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let extractor: FeatureExtractor = serde_json::from_str(&raw)?;
        if extractor.version != 1 {
            return Err(Error::InvalidInput(format!(
                "unsupported extractor version {}",
                extractor.version
            )));
        }
        Ok(extractor)
    }

    fn spec_value(
        &self,
        spec: &FeatureSpec,
        statement: &str,
        document: &str,
        providers: &ProviderSet,
    ) -> Result<f64> {
        let value = match spec {
            FeatureSpec::Tfidf { params, metric } => {
                let model = self
                    .tfidf_models
                    .get(&params.label())
                    .ok_or_else(|| Error::InvalidInput(format!(
                        "no fitted TFIDF model for {}",
                        params.label()
                    )))?;
                let s = transform_tfidf(model, statement);
                let d = transform_tfidf(model, document);
                match metric {
                    VectorMetric::Cosine => cosine_sparse(&s, &d)?.value,
                    VectorMetric::NegEuclidean => neg_euclidean_sparse(&s, &d)?.value,
                }
            }
            FeatureSpec::Embedding { provider, metric } => {
                let p = providers.embedding(provider)?;
                let s = crate::textrep::get_embedding(p, statement)?;
                let d = crate::textrep::get_embedding(p, document)?;
                match metric {
                    VectorMetric::Cosine => cosine(&s, &d)?.value,
                    VectorMetric::NegEuclidean => neg_euclidean(&s, &d)?.value,
                }
            }
            FeatureSpec::EmbeddingSentence { provider, metric } => {
                let p = providers.embedding(provider)?;
                let s = crate::textrep::get_embedding(p, statement)?;
                let sentences = segment_sentences(document);
                let vectors = p.embed_batch(&sentences)?;
                for v in &vectors {
                    if v.len() != p.dimension() {
                        return Err(Error::DimensionMismatch {
                            left: p.dimension(),
                            right: v.len(),
                        });
                    }
                }
                max_sentence_similarity(&s, &vectors, *metric)?.value
            }
            FeatureSpec::EntitySim { provider, metric } => {
                let s = providers.entities(provider, statement)?;
                let d = providers.entities(provider, document)?;
                set_similarity(*metric, &s, &d).value
            }
        };
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite value from feature {}",
                spec.id()
            )));
        }
        Ok(value)
    }

    /// Feature vector for one statement–document pair.
    pub fn featurize_pair(
        &self,
        pair_id: &str,
        statement: &str,
        document: &str,
        providers: &ProviderSet,
    ) -> Result<FeatureVector> {
        let values = self
            .config
            .specs
            .iter()
            .map(|spec| self.spec_value(spec, statement, document, providers))
            .collect::<Result<Vec<f64>>>()?;
        Ok(FeatureVector {
            pair_id: pair_id.to_string(),
            values,
            config_hash: self.config_hash.clone(),
        })
    }

    /// Row-aligned feature matrix over the pairs; rows are computed
    /// independently (in parallel under the default feature).
    pub fn featurize_set(
        &self,
        pairs: &[LabeledPair],
        providers: &ProviderSet,
    ) -> Result<FeatureMatrix> {
        let rows = crate::par::try_map_slice(pairs, |p| {
            self.featurize_pair(&p.id, &p.claim, &p.text, providers)
        })?;
        Ok(FeatureMatrix {
            config_hash: self.config_hash.clone(),
            columns: self.config.column_ids(),
            pair_ids: rows.iter().map(|r| r.pair_id.clone()).collect(),
            values: rows.into_iter().map(|r| r.values).collect(),
            labels: pairs.iter().map(|p| p.label.code()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{PairLabel, SimLabel};
    use approx::assert_relative_eq;

    fn tfidf_spec(metric: VectorMetric) -> FeatureSpec {
        FeatureSpec::Tfidf {
            params: TfidfParams {
                n_features: 100,
                ngram_range: (1, 1),
                max_df: 1.0,
                min_df: 1,
            },
            metric,
        }
    }

    fn pair(id: &str, claim: &str, text: &str, label: SimLabel) -> LabeledPair {
        LabeledPair {
            id: id.to_string(),
            claim: claim.to_string(),
            text: text.to_string(),
            label: PairLabel::Sim(label),
            claim_lang: "en".to_string(),
            text_lang: "en".to_string(),
            source: "test".to_string(),
        }
    }

    #[test]
    fn hash_changes_with_any_spec_change() {
        let a = FeatureConfig::new(vec![tfidf_spec(VectorMetric::Cosine)]).unwrap();
        let b = FeatureConfig::new(vec![tfidf_spec(VectorMetric::NegEuclidean)]).unwrap();
        let c = FeatureConfig::new(vec![
            tfidf_spec(VectorMetric::Cosine),
            tfidf_spec(VectorMetric::NegEuclidean),
        ])
        .unwrap();
        let c_reordered = FeatureConfig::new(vec![
            tfidf_spec(VectorMetric::NegEuclidean),
            tfidf_spec(VectorMetric::Cosine),
        ])
        .unwrap();
        assert_eq!(a.hash(), a.hash());
        assert_ne!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_ne!(c.hash(), c_reordered.hash());
    }

    #[test]
    fn self_similarity_is_one() {
        let config = FeatureConfig::new(vec![tfidf_spec(VectorMetric::Cosine)]).unwrap();
        let corpus = ["the quick brown fox", "jumped over the lazy dog"];
        let extractor = FeatureExtractor::fit(config, &corpus).unwrap();
        let providers = ProviderSet::new();
        let fv = extractor
            .featurize_pair("p", "the quick fox", "the quick fox", &providers)
            .unwrap();
        assert_eq!(fv.values.len(), 1);
        assert_relative_eq!(fv.values[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn vector_length_matches_spec_count_and_is_deterministic() {
        let config = FeatureConfig::new(vec![
            tfidf_spec(VectorMetric::Cosine),
            tfidf_spec(VectorMetric::NegEuclidean),
            FeatureSpec::EntitySim {
                provider: "heuristic".to_string(),
                metric: SetMetric::Jaccard,
            },
        ])
        .unwrap();
        let corpus = ["Anne Rice wrote novels", "San Francisco is a city"];
        let extractor = FeatureExtractor::fit(config, &corpus).unwrap();
        let providers = ProviderSet::new();
        let a = extractor
            .featurize_pair("p", "Anne Rice wrote", "Anne Rice wrote novels", &providers)
            .unwrap();
        let b = extractor
            .featurize_pair("p", "Anne Rice wrote", "Anne Rice wrote novels", &providers)
            .unwrap();
        assert_eq!(a.values.len(), 3);
        assert_eq!(a, b);
        assert!(a.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn featurize_set_rows_equal_pair_outputs() {
        let config = FeatureConfig::new(vec![tfidf_spec(VectorMetric::Cosine)]).unwrap();
        let pairs = vec![
            pair("a", "one two", "one two three", SimLabel::Mention),
            pair("b", "four five", "six seven", SimLabel::OffTopic),
        ];
        let extractor = FeatureExtractor::fit_from_pairs(config, &pairs).unwrap();
        let providers = ProviderSet::new();
        let matrix = extractor.featurize_set(&pairs, &providers).unwrap();
        assert_eq!(matrix.n_rows(), 2);
        assert_eq!(matrix.labels, vec![1, 0]);
        for (i, p) in pairs.iter().enumerate() {
            let fv = extractor
                .featurize_pair(&p.id, &p.claim, &p.text, &providers)
                .unwrap();
            assert_eq!(matrix.values[i], fv.values);
            assert_eq!(matrix.pair_ids[i], p.id);
        }

        // Swapping rows swaps outputs.
        let swapped: Vec<LabeledPair> = pairs.iter().rev().cloned().collect();
        let m2 = extractor.featurize_set(&swapped, &providers).unwrap();
        assert_eq!(m2.values[0], matrix.values[1]);
        assert_eq!(m2.values[1], matrix.values[0]);
    }

    #[test]
    fn empty_set_gives_empty_matrix() {
        let config = FeatureConfig::new(vec![tfidf_spec(VectorMetric::Cosine)]).unwrap();
        let extractor = FeatureExtractor::fit(config, &["seed corpus"]).unwrap();
        let matrix = extractor.featurize_set(&[], &ProviderSet::new()).unwrap();
        assert_eq!(matrix.n_rows(), 0);
        assert_eq!(matrix.n_features(), 1);
    }

    #[test]
    fn matrix_csv_round_trip() {
        let config = FeatureConfig::new(vec![
            tfidf_spec(VectorMetric::Cosine),
            tfidf_spec(VectorMetric::NegEuclidean),
        ])
        .unwrap();
        let pairs = vec![
            pair("a", "one two", "one two", SimLabel::Mention),
            pair("b", "three", "four", SimLabel::OffTopic),
        ];
        let extractor = FeatureExtractor::fit_from_pairs(config, &pairs).unwrap();
        let matrix = extractor.featurize_set(&pairs, &ProviderSet::new()).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        matrix.write_csv(&path).unwrap();
        let back = FeatureMatrix::read_csv(&path).unwrap();
        assert_eq!(back, matrix);
    }

    #[test]
    fn extractor_round_trips_with_hash() {
        let config = FeatureConfig::new(vec![tfidf_spec(VectorMetric::Cosine)]).unwrap();
        let extractor = FeatureExtractor::fit(config, &["alpha beta", "beta gamma"]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("extractor.json");
        extractor.save(&path).unwrap();
        let back = FeatureExtractor::load(&path).unwrap();
        assert_eq!(back, extractor);
        assert_eq!(back.config_hash(), extractor.config_hash());
    }

    #[test]
    fn sentence_pooling_uses_best_sentence() {
        struct WordCount;
        impl EmbeddingProvider for WordCount {
            fn name(&self) -> &str {
                "wordcount"
            }
            fn dimension(&self) -> usize {
                2
            }
            fn embed(&self, text: &str) -> Result<Vec<f64>> {
                let words = text.split_whitespace().count() as f64;
                let chars = text.chars().count() as f64;
                Ok(vec![words, chars])
            }
        }
        let mut providers = ProviderSet::new();
        providers.add_embedding(Box::new(WordCount));
        let config = FeatureConfig::new(vec![FeatureSpec::EmbeddingSentence {
            provider: "wordcount".to_string(),
            metric: VectorMetric::NegEuclidean,
        }])
        .unwrap();
        let extractor = FeatureExtractor::fit(config, &["x"]).unwrap();
        // Second sentence has the same word/char counts as the statement.
        let fv = extractor
            .featurize_pair("p", "ab cd", "One sentence here. Is ok.", &providers)
            .unwrap();
        let stmt = vec![2.0, 5.0];
        let s2 = vec![2.0, 6.0]; // "Is ok." → 2 words, 6 chars
        let expected = crate::simmetrics::neg_euclidean(&stmt, &s2).unwrap().value;
        assert_relative_eq!(fv.values[0], expected, epsilon = 1e-12);
    }

    #[test]
    fn missing_provider_is_an_error() {
        let config = FeatureConfig::new(vec![FeatureSpec::Embedding {
            provider: "nope".to_string(),
            metric: VectorMetric::Cosine,
        }])
        .unwrap();
        let extractor = FeatureExtractor::fit(config, &["x"]).unwrap();
        let err = extractor
            .featurize_pair("p", "a", "b", &ProviderSet::new())
            .unwrap_err();
        assert!(matches!(err, Error::Provider { .. }));
    }

    #[test]
    fn default_config_ranks_and_omits() {
        let grid = crate::textrep::tfidf_grid();
        let results: Vec<(TfidfParams, VectorMetric, f64)> = grid
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, VectorMetric::Cosine, (i % 10) as f64 / 10.0))
            .collect();
        let config = default_from_grid(
            &results,
            4,
            &["bert-it".to_string()],
            &["heuristic".to_string()],
        )
        .unwrap();
        // 4 TFIDF + 4 embedding (2 kinds × 2 metrics) + 6 entity metrics.
        assert_eq!(config.specs.len(), 14);
        let tfidf_count = config
            .specs
            .iter()
            .filter(|s| matches!(s, FeatureSpec::Tfidf { .. }))
            .count();
        assert_eq!(tfidf_count, 4);
        // Top-ranked settings all carry the best F1 (0.9).
        for spec in config.specs.iter().take(4) {
            if let FeatureSpec::Tfidf { params, .. } = spec {
                let (_, _, f1) = results
                    .iter()
                    .find(|(p, _, _)| p == params)
                    .expect("ranked spec came from results");
                assert_eq!(*f1, 0.9);
            }
        }

        let no_providers = default_from_grid(&results, 2, &[], &[]).unwrap();
        assert_eq!(no_providers.specs.len(), 2);
    }

    #[test]
    fn ner_fallback_applies_when_configured() {
        struct Failing;
        impl NerProvider for Failing {
            fn name(&self) -> &str {
                "failing"
            }
            fn entities(&self, _text: &str) -> Result<crate::textrep::EntitySet> {
                Err(Error::Provider {
                    provider: "failing".to_string(),
                    message: "down".to_string(),
                })
            }
        }
        let mut providers = ProviderSet::new();
        providers.add_ner(Box::new(Failing));
        assert!(providers.entities("failing", "visit San Francisco").is_err());

        providers.ner_fallback = true;
        let set = providers.entities("failing", "visit San Francisco").unwrap();
        assert_eq!(set.count("san francisco"), 1);
    }
}
