//! Gaussian naive Bayes with per-feature population variances.

/// Variances are floored here so zero-variance features stay finite.
const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GnbParams {
    /// Log prior per class, ln(count/n).
    pub log_priors: [f64; 2],
    pub means: [Vec<f64>; 2],
    pub variances: [Vec<f64>; 2],
}

pub(crate) fn train(rows: &[Vec<f64>], y: &[u8]) -> GnbParams {
    let d = rows.first().map_or(0, Vec::len);
    let n = rows.len() as f64;
    let mut counts = [0usize; 2];
    let mut means = [vec![0.0; d], vec![0.0; d]];
    for (row, &label) in rows.iter().zip(y) {
        counts[label as usize] += 1;
        for (m, v) in means[label as usize].iter_mut().zip(row) {
            *m += v;
        }
    }
    for class in 0..2 {
        for m in &mut means[class] {
            *m /= counts[class] as f64;
        }
    }

    let mut variances = [vec![0.0; d], vec![0.0; d]];
    for (row, &label) in rows.iter().zip(y) {
        let class = label as usize;
        for f in 0..d {
            let delta = row[f] - means[class][f];
            variances[class][f] += delta * delta;
        }
    }
    for class in 0..2 {
        for v in &mut variances[class] {
            *v = (*v / counts[class] as f64).max(VARIANCE_FLOOR);
        }
    }

    GnbParams {
        log_priors: [
            (counts[0] as f64 / n).ln(),
            (counts[1] as f64 / n).ln(),
        ],
        means,
        variances,
    }
}

fn log_posterior(params: &GnbParams, class: usize, row: &[f64]) -> f64 {
    let mut score = params.log_priors[class];
    for ((&x, &mean), &var) in row
        .iter()
        .zip(&params.means[class])
        .zip(&params.variances[class])
    {
        score += -0.5 * (2.0 * std::f64::consts::PI * var).ln()
            - (x - mean) * (x - mean) / (2.0 * var);
    }
    score
}

/// Higher log posterior wins; an exact tie resolves to class 0.
pub(crate) fn predict_row(params: &GnbParams, row: &[f64]) -> u8 {
    u8::from(log_posterior(params, 1, row) > log_posterior(params, 0, row))
}
