//! Per-fold accuracy tables and their aggregates.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// One cross-evaluation cell: a model trained on `train_dataset`,
/// tested on fold `fold_index` of `test_dataset`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FoldRow {
    pub train_dataset: String,
    pub test_dataset: String,
    pub fold_index: usize,
    /// Percent in [0, 100].
    pub accuracy: f64,
}

/// Collection of fold rows with unique (train, test, fold) keys.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FoldTable {
    rows: Vec<FoldRow>,
}

impl FoldTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: FoldRow) -> Result<()> {
        if !(0.0..=100.0).contains(&row.accuracy) {
            return Err(Error::InvalidInput(format!(
                "fold accuracy {} outside [0, 100]",
                row.accuracy
            )));
        }
        let duplicate = self.rows.iter().any(|r| {
            r.train_dataset == row.train_dataset
                && r.test_dataset == row.test_dataset
                && r.fold_index == row.fold_index
        });
        if duplicate {
            return Err(Error::InvalidInput(format!(
                "duplicate fold row ({}, {}, {})",
                row.train_dataset, row.test_dataset, row.fold_index
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[FoldRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        writer.write_record(["train_dataset", "test_dataset", "fold_index", "accuracy"])?;
        for row in &self.rows {
            writer.write_record([
                row.train_dataset.as_str(),
                row.test_dataset.as_str(),
                &row.fold_index.to_string(),
                &format!("{}", row.accuracy),
            ])?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }
}

/// Aggregate of one (train, test) group.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FoldSummary {
    pub train_dataset: String,
    pub test_dataset: String,
    pub n_folds: usize,
    pub mean: f64,
    /// Population standard deviation (divide by N).
    pub std: f64,
}

/// Mean and population standard deviation per (train, test) group,
/// groups ordered by name.
pub fn fold_summary(table: &FoldTable) -> Vec<FoldSummary> {
    let mut groups: BTreeMap<(&str, &str), Vec<f64>> = BTreeMap::new();
    for row in table.rows() {
        groups
            .entry((&row.train_dataset, &row.test_dataset))
            .or_default()
            .push(row.accuracy);
    }
    groups
        .into_iter()
        .map(|((train, test), accs)| {
            let n = accs.len() as f64;
            let mean = accs.iter().sum::<f64>() / n;
            let variance = accs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
            FoldSummary {
                train_dataset: train.to_string(),
                test_dataset: test.to_string(),
                n_folds: accs.len(),
                mean,
                std: variance.sqrt(),
            }
        })
        .collect()
}
