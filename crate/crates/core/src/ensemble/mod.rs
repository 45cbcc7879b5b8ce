//! Binary classifiers over feature matrices.
//!
//! Five families are implemented from first principles: exact k-nearest
//! neighbors, Gini decision trees, bagged random forests, Gaussian naive
//! Bayes and a hinge-loss max-margin linear model. All randomness flows
//! from explicit seeds, so training is reproducible bit for bit. The
//! module also hosts the single-feature threshold baseline and permutation
//! feature importance, which share the classifiers' F1 conventions.

mod baseline;
mod forest;
mod importance;
mod knn;
mod linear;
mod naive_bayes;
mod tree;

pub use baseline::threshold_baseline;
pub use importance::{permutation_importance, DEFAULT_IMPORTANCE_REPEATS};
pub use tree::TreeNode;

use std::path::Path;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

/// Model document layout version.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Classifier family plus its hyperparameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifierSpec {
    Knn {
        k: usize,
    },
    DecisionTree {
        max_depth: usize,
        min_leaf: usize,
    },
    RandomForest {
        n_trees: usize,
        max_depth: usize,
        min_leaf: usize,
        bootstrap: bool,
        seed: u64,
    },
    GaussianNb,
    LinearMaxMargin {
        regularization: f64,
        epochs: usize,
        learning_rate: f64,
        seed: u64,
    },
}

impl ClassifierSpec {
    pub fn default_knn() -> Self {
        ClassifierSpec::Knn { k: 3 }
    }

    pub fn default_decision_tree() -> Self {
        ClassifierSpec::DecisionTree {
            max_depth: 8,
            min_leaf: 1,
        }
    }

    pub fn default_random_forest(seed: u64) -> Self {
        ClassifierSpec::RandomForest {
            n_trees: 25,
            max_depth: 8,
            min_leaf: 1,
            bootstrap: true,
            seed,
        }
    }

    pub fn default_linear(seed: u64) -> Self {
        ClassifierSpec::LinearMaxMargin {
            regularization: 0.01,
            epochs: 100,
            learning_rate: 0.1,
            seed,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ClassifierSpec::Knn { .. } => "knn",
            ClassifierSpec::DecisionTree { .. } => "decision_tree",
            ClassifierSpec::RandomForest { .. } => "random_forest",
            ClassifierSpec::GaussianNb => "gaussian_nb",
            ClassifierSpec::LinearMaxMargin { .. } => "linear_max_margin",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidInput(msg));
        match *self {
            ClassifierSpec::Knn { k } => {
                if k == 0 {
                    return fail("knn requires k >= 1".into());
                }
            }
            ClassifierSpec::DecisionTree { max_depth, min_leaf } => {
                if max_depth == 0 || min_leaf == 0 {
                    return fail("decision_tree requires max_depth >= 1 and min_leaf >= 1".into());
                }
            }
            ClassifierSpec::RandomForest {
                n_trees,
                max_depth,
                min_leaf,
                ..
            } => {
                if n_trees == 0 {
                    return fail("random_forest requires n_trees >= 1".into());
                }
                if max_depth == 0 || min_leaf == 0 {
                    return fail("random_forest requires max_depth >= 1 and min_leaf >= 1".into());
                }
            }
            ClassifierSpec::GaussianNb => {}
            ClassifierSpec::LinearMaxMargin {
                regularization,
                epochs,
                learning_rate,
                ..
            } => {
                // NaN must fail both numeric checks.
                if regularization.is_nan()
                    || regularization < 0.0
                    || learning_rate.is_nan()
                    || learning_rate <= 0.0
                    || epochs == 0
                {
                    return fail(
                        "linear_max_margin requires regularization >= 0, learning_rate > 0, epochs >= 1"
                            .into(),
                    );
                }
            }
        }
        Ok(())
    }
}

/// Learned parameters, one payload per family.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelParams {
    Knn(knn::KnnParams),
    DecisionTree(tree::TreeParams),
    RandomForest(forest::ForestParams),
    GaussianNb(naive_bayes::GnbParams),
    LinearMaxMargin(linear::LinearParams),
}

/// A classifier bound to the feature configuration it was trained on.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrainedModel {
    pub version: u32,
    pub spec: ClassifierSpec,
    pub config_hash: String,
    pub n_features: usize,
    pub params: ModelParams,
}

/// Checks shared by every family before training starts.
fn validate_training_inputs(x: &FeatureMatrix, y: &[u8]) -> Result<()> {
    if x.n_rows() != y.len() {
        return Err(Error::CountMismatch {
            expected: x.n_rows(),
            actual: y.len(),
        });
    }
    if y.len() < 2 {
        return Err(Error::InvalidInput(
            "training requires at least 2 samples".into(),
        ));
    }
    if let Some(bad) = y.iter().find(|&&label| label > 1) {
        return Err(Error::UnknownLabel(bad.to_string()));
    }
    if y.iter().all(|&l| l == y[0]) {
        return Err(Error::InvalidInput(
            "training labels contain a single class".into(),
        ));
    }
    Ok(())
}

/// Trains one classifier. Deterministic given (spec, data).
pub fn train_classifier(spec: &ClassifierSpec, x: &FeatureMatrix, y: &[u8]) -> Result<TrainedModel> {
    spec.validate()?;
    validate_training_inputs(x, y)?;

    let params = match *spec {
        ClassifierSpec::Knn { k } => ModelParams::Knn(knn::train(k, &x.values, y)?),
        ClassifierSpec::DecisionTree { max_depth, min_leaf } => {
            ModelParams::DecisionTree(tree::train(max_depth, min_leaf, &x.values, y))
        }
        ClassifierSpec::RandomForest {
            n_trees,
            max_depth,
            min_leaf,
            bootstrap,
            seed,
        } => ModelParams::RandomForest(forest::train(
            n_trees, max_depth, min_leaf, bootstrap, seed, &x.values, y,
        )),
        ClassifierSpec::GaussianNb => ModelParams::GaussianNb(naive_bayes::train(&x.values, y)),
        ClassifierSpec::LinearMaxMargin {
            regularization,
            epochs,
            learning_rate,
            seed,
        } => ModelParams::LinearMaxMargin(linear::train(
            regularization,
            epochs,
            learning_rate,
            seed,
            &x.values,
            y,
        )),
    };

    Ok(TrainedModel {
        version: MODEL_FORMAT_VERSION,
        spec: spec.clone(),
        config_hash: x.config_hash.clone(),
        n_features: x.n_features(),
        params,
    })
}

impl TrainedModel {
    /// Predicts labels for every row of `x`; the matrix must carry the
    /// feature configuration the model was trained on.
    pub fn predict(&self, x: &FeatureMatrix) -> Result<Vec<u8>> {
        if x.config_hash != self.config_hash {
            return Err(Error::ConfigHashMismatch {
                expected: self.config_hash.clone(),
                actual: x.config_hash.clone(),
            });
        }
        self.predict_rows(&x.values)
    }

    /// Row-level prediction used by `predict` and permutation importance.
    pub(crate) fn predict_rows(&self, rows: &[Vec<f64>]) -> Result<Vec<u8>> {
        for row in rows {
            if row.len() != self.n_features {
                return Err(Error::DimensionMismatch {
                    left: self.n_features,
                    right: row.len(),
                });
            }
        }
        let labels = match (&self.params, &self.spec) {
            (ModelParams::Knn(p), ClassifierSpec::Knn { k }) => {
                rows.iter().map(|r| knn::predict_row(p, *k, r)).collect()
            }
            (ModelParams::DecisionTree(p), _) => {
                rows.iter().map(|r| p.root.predict_row(r)).collect()
            }
            (ModelParams::RandomForest(p), _) => {
                rows.iter().map(|r| forest::predict_row(p, r)).collect()
            }
            (ModelParams::GaussianNb(p), _) => {
                rows.iter().map(|r| naive_bayes::predict_row(p, r)).collect()
            }
            (ModelParams::LinearMaxMargin(p), _) => {
                rows.iter().map(|r| linear::predict_row(p, r)).collect()
            }
            _ => {
                return Err(Error::InvalidInput(
                    "model parameters do not match classifier kind".into(),
                ))
            }
        };
        Ok(labels)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: TrainedModel = serde_json::from_str(&text)?;
        if model.version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported model version {} (expected {})",
                model.version, MODEL_FORMAT_VERSION
            )));
        }
        Ok(model)
    }
}

#[cfg(test)]
pub(crate) mod testdata {
    use crate::features::FeatureMatrix;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Two Gaussian-ish blobs at (-2,-2) and (2,2); the gap keeps every
    /// point at margin >= 1 from the separating diagonal.
    pub fn separable_blobs(n: usize, seed: u64) -> FeatureMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        let mut pair_ids = Vec::with_capacity(n);
        for i in 0..n {
            let label = (i % 2) as u8;
            let center = if label == 0 { -2.0 } else { 2.0 };
            let dx: f64 = rng.gen_range(-0.9..0.9);
            let dy: f64 = rng.gen_range(-0.9..0.9);
            values.push(vec![center + dx, center + dy]);
            labels.push(label);
            pair_ids.push(format!("p{i}"));
        }
        FeatureMatrix {
            config_hash: "blob-config".into(),
            columns: vec!["f0".into(), "f1".into()],
            pair_ids,
            values,
            labels,
        }
    }

    pub fn matrix_from(values: Vec<Vec<f64>>, labels: Vec<u8>) -> FeatureMatrix {
        let n_features = values.first().map_or(0, Vec::len);
        FeatureMatrix {
            config_hash: "test-config".into(),
            columns: (0..n_features).map(|i| format!("f{i}")).collect(),
            pair_ids: (0..values.len()).map(|i| format!("p{i}")).collect(),
            values,
            labels,
        }
    }

    pub fn split_half(m: &FeatureMatrix) -> (FeatureMatrix, FeatureMatrix) {
        let mid = m.n_rows() / 2;
        let take = |range: std::ops::Range<usize>| FeatureMatrix {
            config_hash: m.config_hash.clone(),
            columns: m.columns.clone(),
            pair_ids: m.pair_ids[range.clone()].to_vec(),
            values: m.values[range.clone()].to_vec(),
            labels: m.labels[range].to_vec(),
        };
        (take(0..mid), take(mid..m.n_rows()))
    }
}
