//! Report bundle: one directory holding metrics, tables and a Markdown summary.

use std::path::Path;

use crate::error::{Error, Result};
use crate::evalreport::curve::LearningCurve;
use crate::evalreport::folds::{fold_summary, FoldTable};
use crate::evalreport::metrics::{accuracy, balanced_accuracy, prf1, ConfusionMatrix};
use crate::evalreport::strata::StrataReport;

/// Headline scores on one prediction set.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricsBlock {
    pub positive_class: u8,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub balanced_accuracy: f64,
}

impl MetricsBlock {
    pub fn from_predictions(y_true: &[u8], y_pred: &[u8], positive_class: u8) -> Result<Self> {
        let (precision, recall, f1) = prf1(y_true, y_pred, positive_class)?;
        Ok(Self {
            positive_class,
            precision,
            recall,
            f1,
            accuracy: accuracy(y_true, y_pred)?,
            balanced_accuracy: balanced_accuracy(y_true, y_pred)?,
        })
    }
}

/// Everything one evaluation run produced. Any section may be absent;
/// the bundle files are still written so consumers can rely on the layout.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EvaluationReport {
    pub title: String,
    pub metrics: Option<MetricsBlock>,
    pub confusion: Option<ConfusionMatrix>,
    pub folds: FoldTable,
    pub curve: LearningCurve,
    pub strata: Option<StrataReport>,
}

#[derive(serde::Serialize)]
struct MetricsFile<'a> {
    title: &'a str,
    metrics: &'a Option<MetricsBlock>,
    strata: &'a Option<StrataReport>,
}

impl EvaluationReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    /// Writes metrics.json, confusion.csv, folds.csv, learning_curve.csv and
    /// report.md into `dir`. All five files are written even when a section
    /// is empty; empty tables reduce to their header line.
    pub fn write_bundle(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

        let metrics_path = dir.join("metrics.json");
        let file = MetricsFile {
            title: &self.title,
            metrics: &self.metrics,
            strata: &self.strata,
        };
        let mut json = serde_json::to_string_pretty(&file)?;
        json.push('\n');
        std::fs::write(&metrics_path, json).map_err(|e| Error::io(&metrics_path, e))?;

        let confusion_path = dir.join("confusion.csv");
        match &self.confusion {
            Some(matrix) => matrix.write_csv(&confusion_path)?,
            None => std::fs::write(&confusion_path, "true\\predicted\n")
                .map_err(|e| Error::io(&confusion_path, e))?,
        }

        self.folds.write_csv(&dir.join("folds.csv"))?;
        self.curve.write_csv(&dir.join("learning_curve.csv"))?;

        let report_path = dir.join("report.md");
        std::fs::write(&report_path, self.markdown()).map_err(|e| Error::io(&report_path, e))
    }

    /// Human-readable summary of every present section.
    pub fn markdown(&self) -> String {
        let mut out = format!("# {}\n", self.title);

        out.push_str("\n## Metrics\n\n");
        match &self.metrics {
            Some(m) => {
                out.push_str("| metric | value |\n|---|---|\n");
                out.push_str(&format!("| positive class | {} |\n", m.positive_class));
                out.push_str(&format!("| precision | {:.4} |\n", m.precision));
                out.push_str(&format!("| recall | {:.4} |\n", m.recall));
                out.push_str(&format!("| f1 | {:.4} |\n", m.f1));
                out.push_str(&format!("| accuracy | {:.4} |\n", m.accuracy));
                out.push_str(&format!("| balanced accuracy | {:.4} |\n", m.balanced_accuracy));
            }
            None => out.push_str("_none_\n"),
        }

        out.push_str("\n## Confusion matrix\n\n");
        match &self.confusion {
            Some(matrix) => out.push_str(&matrix.markdown()),
            None => out.push_str("_none_\n"),
        }

        out.push_str("\n## Folds\n\n");
        if self.folds.is_empty() {
            out.push_str("_none_\n");
        } else {
            out.push_str("| train | test | fold | accuracy |\n|---|---|---|---|\n");
            for row in self.folds.rows() {
                out.push_str(&format!(
                    "| {} | {} | {} | {:.2} |\n",
                    row.train_dataset, row.test_dataset, row.fold_index, row.accuracy
                ));
            }
            out.push_str("\n| train | test | folds | mean | std |\n|---|---|---|---|---|\n");
            for s in fold_summary(&self.folds) {
                out.push_str(&format!(
                    "| {} | {} | {} | {:.2} | {:.2} |\n",
                    s.train_dataset, s.test_dataset, s.n_folds, s.mean, s.std
                ));
            }
        }

        out.push_str("\n## Learning curve\n\n");
        if self.curve.is_empty() {
            out.push_str("_none_\n");
        } else {
            out.push_str("| n_train | accuracy |\n|---|---|\n");
            for p in self.curve.points() {
                out.push_str(&format!("| {} | {:.2} |\n", p.n_train, p.accuracy));
            }
        }

        out.push_str("\n## Strata\n\n");
        match &self.strata {
            Some(s) => {
                out.push_str("| stratum | accuracy | balanced accuracy |\n|---|---|---|\n");
                for (name, m) in [
                    ("orientation", s.orientation),
                    ("subject", s.subject),
                    ("argumentation", s.argumentation),
                ] {
                    out.push_str(&format!(
                        "| {name} | {:.4} | {:.4} |\n",
                        m.accuracy, m.balanced_accuracy
                    ));
                }
                out.push_str(&format!("| all (exact match) | {:.4} | |\n", s.all_exact));
            }
            None => out.push_str("_none_\n"),
        }

        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalreport::curve::learning_curve;
    use crate::evalreport::folds::FoldRow;
    use crate::evalreport::metrics::confusion;

    const BUNDLE_FILES: [&str; 5] = [
        "metrics.json",
        "confusion.csv",
        "folds.csv",
        "learning_curve.csv",
        "report.md",
    ];

    fn sample_report() -> EvaluationReport {
        let y_true = [1u8, 1, 0, 0, 1];
        let y_pred = [1u8, 0, 0, 0, 1];
        let mut folds = FoldTable::new();
        for (i, acc) in [89.51, 99.70, 99.66].iter().enumerate() {
            folds
                .push(FoldRow {
                    train_dataset: "pairs".into(),
                    test_dataset: "pairs".into(),
                    fold_index: i + 1,
                    accuracy: *acc,
                })
                .unwrap();
        }
        EvaluationReport {
            title: "smoke run".into(),
            metrics: Some(MetricsBlock::from_predictions(&y_true, &y_pred, 1).unwrap()),
            confusion: Some(confusion(&y_true, &y_pred, &[0, 1]).unwrap()),
            folds,
            curve: learning_curve(&[(50, 71.0), (150, 84.0)]).unwrap(),
            strata: None,
        }
    }

    #[test]
    fn bundle_always_writes_all_five_files() {
        let dir = tempfile::tempdir().unwrap();
        EvaluationReport::new("empty").write_bundle(dir.path()).unwrap();
        for name in BUNDLE_FILES {
            let path = dir.path().join(name);
            assert!(path.is_file(), "missing {name}");
            assert!(std::fs::metadata(&path).unwrap().len() > 0, "{name} is empty");
        }
        let folds = std::fs::read_to_string(dir.path().join("folds.csv")).unwrap();
        assert_eq!(folds.lines().count(), 1, "empty table should be header-only");
    }

    #[test]
    fn bundle_rewrites_byte_identically() {
        let report = sample_report();
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        report.write_bundle(a.path()).unwrap();
        report.write_bundle(b.path()).unwrap();
        for name in BUNDLE_FILES {
            let left = std::fs::read(a.path().join(name)).unwrap();
            let right = std::fs::read(b.path().join(name)).unwrap();
            assert_eq!(left, right, "{name} differs between reruns");
        }
    }

    #[test]
    fn metrics_json_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let report = sample_report();
        report.write_bundle(dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("metrics.json")).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["title"], "smoke run");
        let expected = report.metrics.unwrap();
        assert!((value["metrics"]["f1"].as_f64().unwrap() - expected.f1).abs() < 1e-12);
    }

    #[test]
    fn markdown_mentions_every_section() {
        let md = sample_report().markdown();
        for heading in ["# smoke run", "## Metrics", "## Confusion matrix", "## Folds", "## Learning curve", "## Strata"] {
            assert!(md.contains(heading), "missing {heading}");
        }
        assert!(md.contains("| 150 | 84.00 |"));
        assert!(md.contains("| pairs | pairs | 3 |"));
    }

    #[test]
    fn metrics_block_matches_components() {
        let y_true = [1u8, 1, 0];
        let y_pred = [1u8, 0, 0];
        let block = MetricsBlock::from_predictions(&y_true, &y_pred, 1).unwrap();
        assert_eq!(block.precision, 1.0);
        assert_eq!(block.recall, 0.5);
        assert!((block.f1 - 2.0 / 3.0).abs() < 1e-12);
    }
}
