//! Claim-verification toolkit.
//!
//! The crate covers the full pipeline for statement–document analysis:
//!
//! - [`corpus`]: dataset ingestion (entailment pairs, similarity pairs,
//!   fact-check verdicts), multilingual expansion, fold and chronological
//!   splits.
//! - [`textrep`]: text representations — TFIDF models over a parameter
//!   grid, sentence segmentation, pluggable embedding and named-entity
//!   providers.
//! - [`simmetrics`]: similarity measures over vectors and entity sets.
//! - [`features`]: per-pair similarity feature vectors feeding the
//!   classifier ensemble.
//! - [`ensemble`]: binary classifiers over feature vectors plus the
//!   single-feature threshold baseline and permutation importance.
//! - [`entailment`]: prompt construction, cached external-model querying,
//!   and response parsing for entailment, verdict categorization, content
//!   treatment, and clarity checks.
//! - [`evalreport`]: metrics (P/R/F1, accuracy, balanced accuracy,
//!   confusion matrices), fold summaries, learning curves, report bundles.
//!
//! Batch operations (featurization, grid search, forest training) run on
//! rayon when the `parallel` feature is enabled (the default) and fall
//! back to sequential loops without it. Outputs are identical either way.

pub mod corpus;
pub mod ensemble;
pub mod entailment;
pub mod error;
pub mod evalreport;
pub mod features;
pub mod hashing;
pub mod simmetrics;
pub mod textrep;

pub(crate) mod par;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
