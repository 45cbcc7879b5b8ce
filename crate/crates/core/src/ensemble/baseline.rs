//! Single-feature threshold baseline: the best F1 any one score column
//! can reach on its own.

use crate::error::{Error, Result};
use crate::evalreport::prf1;

/// Scans thresholds at the midpoints between consecutive distinct scores
/// plus ±∞, predicting 1 when score ≥ threshold. Returns the threshold with
/// the highest class-1 F1; ties keep the smaller threshold.
pub fn threshold_baseline(scores: &[f64], y: &[u8]) -> Result<(f64, f64)> {
    if scores.len() != y.len() {
        return Err(Error::CountMismatch {
            expected: scores.len(),
            actual: y.len(),
        });
    }
    if scores.is_empty() {
        return Err(Error::InvalidInput("threshold baseline needs samples".into()));
    }
    if let Some(bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite score {bad}")));
    }
    if let Some(bad) = y.iter().find(|&&label| label > 1) {
        return Err(Error::UnknownLabel(bad.to_string()));
    }
    if y.iter().all(|&l| l == y[0]) {
        return Err(Error::InvalidInput(
            "threshold baseline requires both classes".into(),
        ));
    }

    let mut best: Option<(f64, f64)> = None;
    for threshold in candidate_thresholds(scores) {
        let preds: Vec<u8> = scores.iter().map(|&s| u8::from(s >= threshold)).collect();
        let (_, _, f1) = prf1(y, &preds, 1)?;
        // Strictly-greater keeps the smallest threshold on ties because the
        // candidates arrive in ascending order.
        if best.is_none_or(|(_, best_f1)| f1 > best_f1) {
            best = Some((threshold, f1));
        }
    }
    Ok(best.expect("candidate list is never empty"))
}

/// Ascending candidates: −∞, midpoints of consecutive distinct scores, +∞.
fn candidate_thresholds(scores: &[f64]) -> Vec<f64> {
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut candidates = vec![f64::NEG_INFINITY];
    candidates.extend(
        sorted
            .windows(2)
            .map(|pair| pair[0] + (pair[1] - pair[0]) / 2.0),
    );
    candidates.push(f64::INFINITY);
    candidates
}
