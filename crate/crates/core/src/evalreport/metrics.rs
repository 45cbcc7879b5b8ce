//! Core classification metrics.

use std::path::Path;

use crate::error::{Error, Result};

fn check_lengths(y_true: usize, y_pred: usize) -> Result<()> {
    if y_true != y_pred {
        return Err(Error::CountMismatch {
            expected: y_true,
            actual: y_pred,
        });
    }
    if y_true == 0 {
        return Err(Error::InvalidInput("empty label vectors".into()));
    }
    Ok(())
}

/// Precision, recall and F1 of the positive class.
///
/// Zero-denominator conventions: precision 0 with no positive
/// predictions, recall 0 with no positive truths, F1 0 when p + r = 0.
pub fn prf1(y_true: &[u8], y_pred: &[u8], positive_class: u8) -> Result<(f64, f64, f64)> {
    check_lengths(y_true.len(), y_pred.len())?;
    let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == positive_class, p == positive_class) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    let precision = if tp + fp == 0 {
        0.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_ == 0 {
        0.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok((precision, recall, f1))
}

/// Proportion of exact matches.
pub fn accuracy(y_true: &[u8], y_pred: &[u8]) -> Result<f64> {
    check_lengths(y_true.len(), y_pred.len())?;
    let hits = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    Ok(hits as f64 / y_true.len() as f64)
}

/// Mean per-class recall over the classes present in `y_true`.
pub fn balanced_accuracy(y_true: &[u8], y_pred: &[u8]) -> Result<f64> {
    check_lengths(y_true.len(), y_pred.len())?;
    let mut classes: Vec<u8> = y_true.to_vec();
    classes.sort_unstable();
    classes.dedup();

    let mut recall_sum = 0.0;
    for &class in &classes {
        let support = y_true.iter().filter(|&&t| t == class).count();
        let hits = y_true
            .iter()
            .zip(y_pred)
            .filter(|(&t, &p)| t == class && p == class)
            .count();
        recall_sum += hits as f64 / support as f64;
    }
    Ok(recall_sum / classes.len() as f64)
}

/// Square count matrix indexed by (true class, predicted class), with
/// the class order given by the caller.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConfusionMatrix {
    pub class_names: Vec<String>,
    /// counts[i][j] = samples of true class i predicted as class j.
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        self.counts.iter().enumerate().map(|(i, row)| row[i]).sum()
    }

    /// Support of each true class.
    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.trace() as f64 / total as f64
        }
    }

    /// CSV with predicted classes as columns and true classes as rows.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        let mut header = vec!["true\\predicted".to_string()];
        header.extend(self.class_names.iter().cloned());
        writer.write_record(&header)?;
        for (name, row) in self.class_names.iter().zip(&self.counts) {
            let mut record = vec![name.clone()];
            record.extend(row.iter().map(u64::to_string));
            writer.write_record(&record)?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }

    pub fn markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| true \\ predicted |");
        for name in &self.class_names {
            out.push_str(&format!(" {name} |"));
        }
        out.push('\n');
        out.push_str("|---|");
        for _ in &self.class_names {
            out.push_str("---|");
        }
        out.push('\n');
        for (name, row) in self.class_names.iter().zip(&self.counts) {
            out.push_str(&format!("| {name} |"));
            for count in row {
                out.push_str(&format!(" {count} |"));
            }
            out.push('\n');
        }
        out
    }
}

/// Count (true, predicted) occurrences over the given class order.
/// Labels outside `classes` are an error.
pub fn confusion<T>(y_true: &[T], y_pred: &[T], classes: &[T]) -> Result<ConfusionMatrix>
where
    T: PartialEq + std::fmt::Display,
{
    check_lengths(y_true.len(), y_pred.len())?;
    let index_of = |label: &T| -> Result<usize> {
        classes
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    };
    let k = classes.len();
    let mut counts = vec![vec![0u64; k]; k];
    for (t, p) in y_true.iter().zip(y_pred) {
        counts[index_of(t)?][index_of(p)?] += 1;
    }
    Ok(ConfusionMatrix {
        class_names: classes.iter().map(|c| c.to_string()).collect(),
        counts,
    })
}
