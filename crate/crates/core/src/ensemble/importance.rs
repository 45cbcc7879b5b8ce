//! Permutation feature importance: how much F1 drops when one column
//! is shuffled.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::TrainedModel;
use crate::error::{Error, Result};
use crate::evalreport::prf1;
use crate::features::FeatureMatrix;
use crate::hashing::sub_seed;

pub const DEFAULT_IMPORTANCE_REPEATS: usize = 5;

/// importance(f) = baseline F1 − mean F1 over `repeats` shuffles of column f.
/// Each (feature, repeat) cell draws its own sub-seed, so results do not
/// depend on evaluation order.
pub fn permutation_importance(
    model: &TrainedModel,
    x: &FeatureMatrix,
    y: &[u8],
    seed: u64,
    repeats: usize,
) -> Result<Vec<f64>> {
    if repeats == 0 {
        return Err(Error::InvalidInput("repeats must be >= 1".into()));
    }
    if x.n_rows() != y.len() {
        return Err(Error::CountMismatch {
            expected: x.n_rows(),
            actual: y.len(),
        });
    }
    let baseline_preds = model.predict(x)?;
    let (_, _, baseline_f1) = prf1(y, &baseline_preds, 1)?;

    let mut importances = Vec::with_capacity(x.n_features());
    for feature in 0..x.n_features() {
        let mut f1_sum = 0.0;
        for repeat in 0..repeats {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(
                seed,
                &format!("perm-{feature}-{repeat}"),
            ));
            let mut order: Vec<usize> = (0..x.n_rows()).collect();
            order.shuffle(&mut rng);

            let mut shuffled = x.values.clone();
            for (row, &source) in order.iter().enumerate() {
                shuffled[row][feature] = x.values[source][feature];
            }
            let preds = model.predict_rows(&shuffled)?;
            f1_sum += prf1(y, &preds, 1)?.2;
        }
        importances.push(baseline_f1 - f1_sum / repeats as f64);
    }
    Ok(importances)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::testdata::matrix_from;
    use crate::ensemble::{train_classifier, ClassifierSpec};
    use rand::Rng;

    /// Column 0 equals the label; columns 1 and 2 are noise; column 3 is
    /// constant.
    fn synthetic() -> FeatureMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut values = Vec::new();
        let mut labels = Vec::new();
        for i in 0..80 {
            let label = (i % 2) as u8;
            values.push(vec![
                f64::from(label),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                0.75,
            ]);
            labels.push(label);
        }
        matrix_from(values, labels)
    }

    #[test]
    fn predictive_feature_dominates_and_constant_scores_zero() {
        let data = synthetic();
        let model =
            train_classifier(&ClassifierSpec::default_decision_tree(), &data, &data.labels)
                .unwrap();
        let importances =
            permutation_importance(&model, &data, &data.labels, 99, DEFAULT_IMPORTANCE_REPEATS)
                .unwrap();
        assert_eq!(importances.len(), data.n_features());
        assert!(
            importances[0] > importances[1]
                && importances[0] > importances[2]
                && importances[0] > importances[3],
            "importances: {importances:?}"
        );
        // Permuting a constant column is the identity, so the drop is exactly 0.
        assert_eq!(importances[3], 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let data = synthetic();
        let model =
            train_classifier(&ClassifierSpec::default_decision_tree(), &data, &data.labels)
                .unwrap();
        let a = permutation_importance(&model, &data, &data.labels, 4, 3).unwrap();
        let b = permutation_importance(&model, &data, &data.labels, 4, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_repeats_rejected() {
        let data = synthetic();
        let model = train_classifier(&ClassifierSpec::GaussianNb, &data, &data.labels).unwrap();
        assert!(permutation_importance(&model, &data, &data.labels, 4, 0).is_err());
    }
}
