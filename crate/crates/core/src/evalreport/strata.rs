//! Per-stratum scoring of treatment labels.

use crate::corpus::TreatmentLabel;
use crate::error::Result;
use crate::evalreport::metrics::{accuracy, balanced_accuracy};

/// Accuracy pair for one stratum.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StratumMetrics {
    pub accuracy: f64,
    pub balanced_accuracy: f64,
}

/// Per-stratum metrics plus the exact-match rate over all three strata.
///
/// `all_exact` is the proportion of samples where orientation, subject and
/// argumentation are all correct; it is not an average of the per-stratum
/// columns and never exceeds any of them.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StrataReport {
    pub orientation: StratumMetrics,
    pub subject: StratumMetrics,
    pub argumentation: StratumMetrics,
    pub all_exact: f64,
}

fn stratum_metrics(y_true: &[u8], y_pred: &[u8]) -> Result<StratumMetrics> {
    Ok(StratumMetrics {
        accuracy: accuracy(y_true, y_pred)?,
        balanced_accuracy: balanced_accuracy(y_true, y_pred)?,
    })
}

/// Scores predicted treatment labels stratum by stratum.
pub fn strata_evaluation(truths: &[TreatmentLabel], preds: &[TreatmentLabel]) -> Result<StrataReport> {
    let codes = |f: fn(&TreatmentLabel) -> u8| -> (Vec<u8>, Vec<u8>) {
        (truths.iter().map(f).collect(), preds.iter().map(f).collect())
    };

    let (o_true, o_pred) = codes(|l| l.orientation.code());
    let (s_true, s_pred) = codes(|l| l.subject.code());
    let (a_true, a_pred) = codes(|l| l.argumentation.code());

    let orientation = stratum_metrics(&o_true, &o_pred)?;
    let subject = stratum_metrics(&s_true, &s_pred)?;
    let argumentation = stratum_metrics(&a_true, &a_pred)?;

    let exact = truths
        .iter()
        .zip(preds)
        .filter(|(t, p)| t == p)
        .count();
    Ok(StrataReport {
        orientation,
        subject,
        argumentation,
        all_exact: exact as f64 / truths.len() as f64,
    })
}
