//! Metrics and report generation.
//!
//! Precision/recall/F1, accuracy, balanced accuracy, confusion matrices,
//! per-fold tables with mean and population standard deviation, learning
//! curves, and the on-disk report bundle (JSON + CSV + Markdown).

mod bundle;
mod curve;
mod folds;
mod metrics;
mod strata;

pub use bundle::{EvaluationReport, MetricsBlock};
pub use curve::{learning_curve, LearningCurve};
pub use folds::{fold_summary, FoldRow, FoldSummary, FoldTable};
pub use metrics::{accuracy, balanced_accuracy, confusion, prf1, ConfusionMatrix};
pub use strata::{strata_evaluation, StrataReport, StratumMetrics};
