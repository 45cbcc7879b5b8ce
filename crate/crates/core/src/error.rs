//! Crate-wide error type.

use std::path::PathBuf;

/// One invalid record inside a dataset file, with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordFailure {
    /// 1-based physical line in the file (CSV records report their start line).
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for RecordFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown format {0:?}")]
    UnknownFormat(String),

    #[error("{path}: {} invalid record(s): {}", failures.len(), format_failures(failures))]
    InvalidRecords {
        path: PathBuf,
        failures: Vec<RecordFailure>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("id mismatch between inputs: {0}")]
    IdMismatch(String),

    #[error("label disagreement for id {id}")]
    LabelDisagreement { id: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("missing embedding for key {key}")]
    MissingEmbedding { key: String },

    #[error("provider {provider} failed: {message}")]
    Provider { provider: String, message: String },

    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },

    #[error("unparseable response: {0:?}")]
    UnparseableResponse(String),

    #[error("missing placeholder binding {0:?}")]
    MissingBinding(String),

    #[error("missing stratum {0:?} in treatment response")]
    MissingStratum(String),

    #[error("unknown value {value:?} for stratum {stratum:?}")]
    UnknownStratumValue { stratum: String, value: String },

    #[error("unknown label token {0:?}")]
    UnknownLabel(String),

    #[error("feature config hash mismatch: model trained on {expected}, input carries {actual}")]
    ConfigHashMismatch { expected: String, actual: String },

    #[error("count mismatch: expected {expected} rows, found {actual}")]
    CountMismatch { expected: usize, actual: usize },

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

fn format_failures(failures: &[RecordFailure]) -> String {
    let shown: Vec<String> = failures.iter().take(5).map(|f| f.to_string()).collect();
    let mut out = shown.join("; ");
    if failures.len() > 5 {
        out.push_str(&format!("; … and {} more", failures.len() - 5));
    }
    out
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
