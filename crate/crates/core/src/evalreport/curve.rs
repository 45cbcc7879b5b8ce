//! Accuracy as a function of training-set size.

use std::path::Path;

use crate::error::{Error, Result};

/// One learning-curve point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CurvePoint {
    pub n_train: usize,
    /// Percent in [0, 100].
    pub accuracy: f64,
}

/// Learning-curve points sorted ascending by `n_train`.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LearningCurve {
    points: Vec<CurvePoint>,
}

impl LearningCurve {
    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        writer.write_record(["n_train", "accuracy"])?;
        for p in &self.points {
            writer.write_record([p.n_train.to_string(), format!("{}", p.accuracy)])?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }
}

/// Sorts points by training size; each size may appear once.
pub fn learning_curve(points: &[(usize, f64)]) -> Result<LearningCurve> {
    let mut sorted: Vec<CurvePoint> = points
        .iter()
        .map(|&(n_train, accuracy)| {
            if !(0.0..=100.0).contains(&accuracy) {
                return Err(Error::InvalidInput(format!(
                    "learning-curve accuracy {accuracy} outside [0, 100]"
                )));
            }
            Ok(CurvePoint { n_train, accuracy })
        })
        .collect::<Result<_>>()?;
    sorted.sort_by_key(|p| p.n_train);
    for pair in sorted.windows(2) {
        if pair[0].n_train == pair[1].n_train {
            return Err(Error::InvalidInput(format!(
                "duplicate learning-curve size {}",
                pair[0].n_train
            )));
        }
    }
    Ok(LearningCurve { points: sorted })
}
