//! Run configuration: one TOML file describing datasets, features,
//! classifier, and providers, merged with command-line overrides (flags
//! win). Every run derives its randomness from the single top-level seed
//! via labeled sub-seeds, so a config + seed pair is self-describing.

use std::path::{Path, PathBuf};
use std::time::Duration;

use claimcheck_core::corpus::DatasetFormat;
use claimcheck_core::ensemble::ClassifierSpec;
use claimcheck_core::entailment::ProviderConfig;
use claimcheck_core::features::ProviderSet;
use claimcheck_core::hashing::{sha256_hex, sub_seed};
use claimcheck_core::textrep::{
    FileEmbeddingProvider, FileNerProvider, HttpEmbeddingProvider, HttpNerProvider,
};
use claimcheck_core::{Error, Result};

/// Parsed TOML configuration; every field is optional so flags and
/// per-command defaults can fill the gaps.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub dataset: Option<DatasetConfig>,
    pub features: Option<FeaturesConfig>,
    pub classifier: Option<ClassifierConfig>,
    pub provider: Option<ProviderTable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub embedding_providers: Vec<EmbeddingProviderConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ner_providers: Vec<NerProviderConfig>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&raw)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
    }
}

/// A dataset file plus its declared on-disk format.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    pub format: String,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturesConfig {
    /// Feature config JSON as written by `grid-search --emit-config`.
    pub config_path: PathBuf,
}

/// Classifier selection with optional hyperparameters; omitted values
/// take the family defaults, and omitted seeds derive from the master
/// seed under the label `"classifier"`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierConfig {
    pub kind: String,
    pub k: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_leaf: Option<usize>,
    pub n_trees: Option<usize>,
    pub bootstrap: Option<bool>,
    pub regularization: Option<f64>,
    pub epochs: Option<usize>,
    pub learning_rate: Option<f64>,
    pub seed: Option<u64>,
}

impl ClassifierConfig {
    pub fn to_spec(&self, master_seed: u64) -> Result<ClassifierSpec> {
        let seed = self.seed.unwrap_or_else(|| sub_seed(master_seed, "classifier"));
        let spec = match self.kind.as_str() {
            "knn" => ClassifierSpec::Knn {
                k: self.k.unwrap_or(3),
            },
            "decision_tree" => ClassifierSpec::DecisionTree {
                max_depth: self.max_depth.unwrap_or(8),
                min_leaf: self.min_leaf.unwrap_or(1),
            },
            "random_forest" => ClassifierSpec::RandomForest {
                n_trees: self.n_trees.unwrap_or(25),
                max_depth: self.max_depth.unwrap_or(8),
                min_leaf: self.min_leaf.unwrap_or(1),
                bootstrap: self.bootstrap.unwrap_or(true),
                seed,
            },
            "gaussian_nb" => ClassifierSpec::GaussianNb,
            "linear_max_margin" => ClassifierSpec::LinearMaxMargin {
                regularization: self.regularization.unwrap_or(0.01),
                epochs: self.epochs.unwrap_or(100),
                learning_rate: self.learning_rate.unwrap_or(0.1),
                seed,
            },
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown classifier kind {other:?} (expected knn, decision_tree, \
                     random_forest, gaussian_nb, or linear_max_margin)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Chat-completion endpoint settings; unset fields take the
/// [`ProviderConfig`] defaults.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderTable {
    pub endpoint: String,
    pub model: String,
    pub auth_env: Option<String>,
    pub temperature: Option<f64>,
    pub max_retries: Option<u32>,
    pub timeout_secs: Option<u64>,
    pub max_concurrency: Option<usize>,
    pub backoff_ms: Option<u64>,
}

impl ProviderTable {
    /// Lower to the core config; `jobs`, when given, caps concurrency.
    pub fn to_config(&self, jobs: Option<usize>) -> ProviderConfig {
        let mut config = ProviderConfig::new(&self.endpoint, &self.model);
        config.auth_env = self.auth_env.clone();
        if let Some(v) = self.temperature {
            config.temperature = v;
        }
        if let Some(v) = self.max_retries {
            config.max_retries = v;
        }
        if let Some(v) = self.timeout_secs {
            config.timeout_secs = v;
        }
        if let Some(v) = self.max_concurrency {
            config.max_concurrency = v;
        }
        if let Some(v) = self.backoff_ms {
            config.backoff_ms = v;
        }
        if let Some(jobs) = jobs {
            config.max_concurrency = config.max_concurrency.min(jobs.max(1));
        }
        config
    }
}

/// One embedding provider: a local vector table or an HTTP service.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EmbeddingProviderConfig {
    /// JSONL vector table plus its manifest (which carries the name).
    File { vectors: PathBuf, manifest: PathBuf },
    Http {
        name: String,
        base_url: String,
        dimension: usize,
        timeout_secs: Option<u64>,
    },
}

/// One named-entity provider. The `"heuristic"` extractor is always
/// available and needs no entry here.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NerProviderConfig {
    File { name: String, path: PathBuf },
    Http {
        name: String,
        base_url: String,
        timeout_secs: Option<u64>,
    },
}

const DEFAULT_SEED: u64 = 0;
const DEFAULT_PROVIDER_TIMEOUT_SECS: u64 = 30;

/// Effective settings for one invocation: config with flag overrides
/// already applied.
#[derive(Debug, Clone)]
pub struct Settings {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub cache_dir: PathBuf,
    pub jobs: Option<usize>,
    pub validate_only: bool,
    pub config: RunConfig,
}

/// Flag values that override the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub validate_only: bool,
}

impl Settings {
    pub fn resolve(overrides: &Overrides) -> Result<Settings> {
        let mut config = match &overrides.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = overrides.seed {
            config.seed = Some(seed);
        }
        if let Some(dir) = &overrides.output_dir {
            config.output_dir = Some(dir.clone());
        }
        if let Some(dir) = &overrides.cache_dir {
            config.cache_dir = Some(dir.clone());
        }
        if let Some(jobs) = overrides.jobs {
            if jobs == 0 {
                return Err(Error::InvalidInput("--jobs must be >= 1".into()));
            }
        }

        let seed = config.seed.unwrap_or(DEFAULT_SEED);
        let output_dir = config
            .output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("claimcheck-out"));
        let cache_dir = config
            .cache_dir
            .clone()
            .unwrap_or_else(|| output_dir.join("cache"));
        Ok(Settings {
            seed,
            output_dir,
            cache_dir,
            jobs: overrides.jobs,
            validate_only: overrides.validate_only,
            config,
        })
    }

    /// Digest of the effective configuration (after overrides), recorded
    /// in the run manifest. Placement fields (output/cache directory) are
    /// excluded: they decide where artifacts land, not what they contain,
    /// so reruns into a different directory hash identically.
    pub fn config_hash(&self) -> String {
        let mut content = self.config.clone();
        content.output_dir = None;
        content.cache_dir = None;
        let canonical = serde_json::to_string(&content).expect("config serializes");
        sha256_hex(canonical.as_bytes())
    }

    /// Sub-seed for one named random consumer.
    pub fn sub_seed(&self, label: &str) -> u64 {
        sub_seed(self.seed, label)
    }

    /// Dataset path + format from flags when given, else from the config.
    pub fn dataset(
        &self,
        input: Option<&Path>,
        format: Option<&str>,
    ) -> Result<(PathBuf, DatasetFormat)> {
        let (path, format_name) = match (input, &self.config.dataset) {
            (Some(path), _) => {
                let name = format
                    .map(str::to_string)
                    .or_else(|| self.config.dataset.as_ref().map(|d| d.format.clone()))
                    .ok_or_else(|| {
                        Error::InvalidInput("--format required with --input".into())
                    })?;
                (path.to_path_buf(), name)
            }
            (None, Some(dataset)) => {
                let name = format.map(str::to_string).unwrap_or_else(|| dataset.format.clone());
                (dataset.path.clone(), name)
            }
            (None, None) => {
                return Err(Error::InvalidInput(
                    "no dataset: pass --input/--format or set [dataset] in the config".into(),
                ))
            }
        };
        let parsed: DatasetFormat = format_name.parse()?;
        require_exists(&path)?;
        Ok((path, parsed))
    }

    /// Feature config path from the flag or the `[features]` table.
    pub fn feature_config_path(&self, flag: Option<&Path>) -> Result<PathBuf> {
        let path = flag
            .map(Path::to_path_buf)
            .or_else(|| self.config.features.as_ref().map(|f| f.config_path.clone()))
            .ok_or_else(|| {
                Error::InvalidInput(
                    "no feature config: pass --feature-config or set [features] in the config"
                        .into(),
                )
            })?;
        require_exists(&path)?;
        Ok(path)
    }

    /// Classifier spec from the `[classifier]` table (decision tree when
    /// absent), seeded from the master seed.
    pub fn classifier_spec(&self) -> Result<ClassifierSpec> {
        match &self.config.classifier {
            Some(classifier) => classifier.to_spec(self.seed),
            None => Ok(ClassifierSpec::default_decision_tree()),
        }
    }

    /// Provider config from the `[provider]` table; commands that talk to
    /// a language model require it.
    pub fn provider_config(&self) -> Result<ProviderConfig> {
        let table = self.config.provider.as_ref().ok_or_else(|| {
            Error::InvalidInput("this command needs a [provider] table in the config".into())
        })?;
        let config = table.to_config(self.jobs);
        config.validate()?;
        Ok(config)
    }

    /// Instantiate every configured embedding / entity provider.
    pub fn provider_set(&self) -> Result<ProviderSet> {
        let mut set = ProviderSet::new();
        for entry in &self.config.embedding_providers {
            match entry {
                EmbeddingProviderConfig::File { vectors, manifest } => {
                    require_exists(vectors)?;
                    require_exists(manifest)?;
                    set.add_embedding(Box::new(FileEmbeddingProvider::load(vectors, manifest)?));
                }
                EmbeddingProviderConfig::Http {
                    name,
                    base_url,
                    dimension,
                    timeout_secs,
                } => {
                    let timeout =
                        Duration::from_secs(timeout_secs.unwrap_or(DEFAULT_PROVIDER_TIMEOUT_SECS));
                    set.add_embedding(Box::new(HttpEmbeddingProvider::new(
                        name, base_url, *dimension, timeout,
                    )?));
                }
            }
        }
        for entry in &self.config.ner_providers {
            match entry {
                NerProviderConfig::File { name, path } => {
                    require_exists(path)?;
                    set.add_ner(Box::new(FileNerProvider::load(path, name)?));
                }
                NerProviderConfig::Http {
                    name,
                    base_url,
                    timeout_secs,
                } => {
                    let timeout =
                        Duration::from_secs(timeout_secs.unwrap_or(DEFAULT_PROVIDER_TIMEOUT_SECS));
                    set.add_ner(Box::new(HttpNerProvider::new(name, base_url, timeout)?));
                }
            }
        }
        Ok(set)
    }
}

pub fn require_exists(path: &Path) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{}: path does not exist",
            path.display()
        )))
    }
}
