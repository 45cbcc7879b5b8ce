//! Exact k-nearest-neighbor classification.

use crate::error::{Error, Result};

/// KNN keeps the whole training set.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KnnParams {
    pub train_rows: Vec<Vec<f64>>,
    pub train_labels: Vec<u8>,
}

pub(crate) fn train(k: usize, rows: &[Vec<f64>], y: &[u8]) -> Result<KnnParams> {
    if k > rows.len() {
        return Err(Error::InvalidInput(format!(
            "knn k={k} exceeds the {} training samples",
            rows.len()
        )));
    }
    Ok(KnnParams {
        train_rows: rows.to_vec(),
        train_labels: y.to_vec(),
    })
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Majority vote over the k nearest training points; distance ties break by
/// training index, vote ties resolve to class 0.
pub(crate) fn predict_row(params: &KnnParams, k: usize, row: &[f64]) -> u8 {
    let mut order: Vec<usize> = (0..params.train_rows.len()).collect();
    order.sort_by(|&a, &b| {
        squared_distance(&params.train_rows[a], row)
            .total_cmp(&squared_distance(&params.train_rows[b], row))
            .then(a.cmp(&b))
    });
    let ones = order
        .iter()
        .take(k)
        .filter(|&&i| params.train_labels[i] == 1)
        .count();
    u8::from(ones * 2 > k)
}
