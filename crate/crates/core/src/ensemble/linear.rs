//! Max-margin linear classifier: hinge loss, L2 regularization,
//! subgradient descent on standardized features.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinearParams {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Training-split standardization, applied again at prediction time.
    pub feature_means: Vec<f64>,
    pub feature_stds: Vec<f64>,
}

fn standardize(value: f64, mean: f64, std: f64) -> f64 {
    (value - mean) / std
}

pub(crate) fn train(
    regularization: f64,
    epochs: usize,
    learning_rate: f64,
    seed: u64,
    rows: &[Vec<f64>],
    y: &[u8],
) -> LinearParams {
    let d = rows.first().map_or(0, Vec::len);
    let n = rows.len() as f64;

    let mut means = vec![0.0; d];
    for row in rows {
        for (m, v) in means.iter_mut().zip(row) {
            *m += v / n;
        }
    }
    let mut stds = vec![0.0; d];
    for row in rows {
        for f in 0..d {
            let delta = row[f] - means[f];
            stds[f] += delta * delta / n;
        }
    }
    for s in &mut stds {
        *s = s.sqrt();
        // Constant features carry no signal; unit scale keeps them finite.
        if *s == 0.0 {
            *s = 1.0;
        }
    }

    let standardized: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(f, &v)| standardize(v, means[f], stds[f]))
                .collect()
        })
        .collect();
    let signs: Vec<f64> = y.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();

    let mut weights = vec![0.0; d];
    let mut bias = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..rows.len()).collect();

    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let row = &standardized[i];
            let sign = signs[i];
            let margin = sign * (dot(&weights, row) + bias);
            if margin < 1.0 {
                for (w, &v) in weights.iter_mut().zip(row) {
                    *w -= learning_rate * (regularization * *w - sign * v);
                }
                bias += learning_rate * sign;
            } else {
                for w in &mut weights {
                    *w -= learning_rate * regularization * *w;
                }
            }
        }
    }

    LinearParams {
        weights,
        bias,
        feature_means: means,
        feature_stds: stds,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Positive side of the hyperplane is class 1; a score of exactly 0 is 0.
pub(crate) fn predict_row(params: &LinearParams, row: &[f64]) -> u8 {
    let score: f64 = row
        .iter()
        .enumerate()
        .map(|(f, &v)| {
            params.weights[f] * standardize(v, params.feature_means[f], params.feature_stds[f])
        })
        .sum::<f64>()
        + params.bias;
    u8::from(score > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separates_shifted_clusters() {
        // Raw values far from zero: standardization has to do real work.
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| {
                let offset = if i % 2 == 0 { 1000.0 } else { 1010.0 };
                vec![offset + (i as f64 * 0.17).sin()]
            })
            .collect();
        let y: Vec<u8> = (0..40).map(|i| (i % 2) as u8).collect();
        let params = train(0.01, 100, 0.1, 3, &rows, &y);
        let correct = rows
            .iter()
            .zip(&y)
            .filter(|(r, &label)| predict_row(&params, r) == label)
            .count();
        assert_eq!(correct, 40);
    }

    #[test]
    fn constant_feature_stays_finite() {
        let rows = vec![vec![5.0, -1.0], vec![5.0, 1.0], vec![5.0, -1.2], vec![5.0, 1.2]];
        let y = vec![0, 1, 0, 1];
        let params = train(0.01, 50, 0.1, 1, &rows, &y);
        assert_eq!(params.feature_stds[0], 1.0);
        assert!(params.weights.iter().all(|w| w.is_finite()));
        assert_eq!(predict_row(&params, &[5.0, 1.1]), 1);
        assert_eq!(predict_row(&params, &[5.0, -1.1]), 0);
    }

    #[test]
    fn same_seed_same_model() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let y: Vec<u8> = (0..20).map(|i| u8::from(i >= 10)).collect();
        let a = train(0.01, 30, 0.1, 11, &rows, &y);
        let b = train(0.01, 30, 0.1, 11, &rows, &y);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_score_is_class_zero() {
        let params = LinearParams {
            weights: vec![0.0],
            bias: 0.0,
            feature_means: vec![0.0],
            feature_stds: vec![1.0],
        };
        assert_eq!(predict_row(&params, &[3.0]), 0);
    }
}
