//! Subcommand implementations. Each command loads and validates its
//! inputs, stops before the first side effect under `--validate-only`,
//! writes its artifacts under the output directory, and prints a
//! one-line JSON summary to stdout.

use std::path::{Path, PathBuf};

use claimcheck_core::corpus::{
    chronological_prefix_splits, expand_multilingual, load_pairs, load_treatment_records,
    load_verdicts, make_folds, make_folds_grouped, write_pairs_jsonl, write_verdicts_csv, Dataset,
    DatasetFormat, LabeledPair, PairLabel,
};
use claimcheck_core::ensemble::{threshold_baseline, train_classifier, TrainedModel};
use claimcheck_core::entailment::{
    clarity_check, entailment_prompt, ingest_predictions, parse_entailment_response,
    parse_treatment_response, parse_verdict_category, query_many, treatment_prompt, verdict_prompt,
    ResponseCache, TemplateId,
};
use claimcheck_core::evalreport::{
    accuracy, confusion, learning_curve, strata_evaluation, EvaluationReport, FoldRow, FoldTable,
    MetricsBlock,
};
use claimcheck_core::features::{
    default_from_grid, FeatureConfig, FeatureExtractor, FeatureMatrix,
};
use claimcheck_core::simmetrics::{cosine_sparse, VectorMetric};
use claimcheck_core::textrep::{fit_tfidf, tfidf_grid, transform_tfidf, TfidfParams};
use claimcheck_core::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{require_exists, Settings};

fn dataset_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Resolve an artifact path: explicit flag as given, otherwise
/// `default_name` under the output directory.
fn artifact_path(settings: &Settings, flag: Option<&Path>, default_name: &str) -> PathBuf {
    match flag {
        Some(path) => path.to_path_buf(),
        None => settings.output_dir.join(default_name),
    }
}

fn print_summary(value: serde_json::Value) {
    println!("{value}");
}

// ---------------------------------------------------------------- ingest

#[derive(Debug, clap::Args)]
pub struct IngestArgs {
    /// Dataset file; defaults to [dataset] in the config.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Dataset format: fever-jsonl | pairs-csv | verdicts-csv.
    #[arg(long)]
    pub format: Option<String>,
    /// Output file name under the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Load, validate, and rewrite a dataset in its canonical on-disk form
/// (pairs as JSONL, verdicts as CSV).
pub fn ingest(settings: &Settings, args: &IngestArgs) -> Result<()> {
    let (path, format) = settings.dataset(args.input.as_deref(), args.format.as_deref())?;
    let dataset = claimcheck_core::corpus::load_dataset(&path, format)?;
    if settings.validate_only {
        return Ok(());
    }
    let (out, records) = match &dataset {
        Dataset::Pairs(pairs) => {
            let out = artifact_path(settings, args.out.as_deref(), "ingested.jsonl");
            write_pairs_jsonl(&out, pairs)?;
            (out, pairs.len())
        }
        Dataset::Verdicts(verdicts) => {
            let out = artifact_path(settings, args.out.as_deref(), "ingested.csv");
            write_verdicts_csv(&out, verdicts)?;
            (out, verdicts.len())
        }
    };
    print_summary(serde_json::json!({
        "command": "ingest",
        "records": records,
        "format": format.as_str(),
        "output": out,
    }));
    Ok(())
}

// ------------------------------------------------------------- expand-ml

#[derive(Debug, clap::Args)]
pub struct ExpandMlArgs {
    /// First aligned pair file (e.g. the original language).
    #[arg(long)]
    pub input_a: PathBuf,
    #[arg(long)]
    pub format_a: String,
    /// Second aligned pair file (e.g. the translation).
    #[arg(long)]
    pub input_b: PathBuf,
    #[arg(long)]
    pub format_b: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Cross-language expansion: two id-aligned pair files become the four
/// claim/text language combinations per id.
pub fn expand_ml(settings: &Settings, args: &ExpandMlArgs) -> Result<()> {
    require_exists(&args.input_a)?;
    require_exists(&args.input_b)?;
    let format_a: DatasetFormat = args.format_a.parse()?;
    let format_b: DatasetFormat = args.format_b.parse()?;
    let pairs_a = load_pairs(&args.input_a, format_a)?;
    let pairs_b = load_pairs(&args.input_b, format_b)?;
    let expanded = expand_multilingual(&pairs_a, &pairs_b)?;
    if settings.validate_only {
        return Ok(());
    }
    let out = artifact_path(settings, args.out.as_deref(), "expanded.jsonl");
    write_pairs_jsonl(&out, &expanded)?;
    print_summary(serde_json::json!({
        "command": "expand-ml",
        "input_records": pairs_a.len(),
        "records": expanded.len(),
        "output": out,
    }));
    Ok(())
}

// ------------------------------------------------------------------ split

#[derive(Debug, clap::Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    /// Number of cross-validation folds.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Keep pairs sharing a claim id prefix in the same fold.
    #[arg(long)]
    pub grouped: bool,
    /// Chronological prefix mode over a verdict dataset.
    #[arg(long)]
    pub chronological: bool,
    /// Training-set sizes for --chronological, strictly ascending.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Held-out most-recent test-set size for --chronological.
    #[arg(long)]
    pub test_size: Option<usize>,
}

/// Cut a dataset into k seeded folds, or into nested chronological
/// training prefixes plus a most-recent test set.
pub fn split(settings: &Settings, args: &SplitArgs) -> Result<()> {
    let (path, format) = settings.dataset(args.input.as_deref(), args.format.as_deref())?;
    let dir = settings.output_dir.join("splits");

    if args.chronological {
        if format != DatasetFormat::VerdictsCsv {
            return Err(Error::InvalidInput(
                "--chronological needs a verdicts-csv dataset".into(),
            ));
        }
        let test_size = args.test_size.ok_or_else(|| {
            Error::InvalidInput("--chronological requires --test-size".into())
        })?;
        let verdicts = load_verdicts(&path)?;
        let splits = chronological_prefix_splits(&verdicts, &args.sizes, test_size)?;
        if settings.validate_only {
            return Ok(());
        }
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for train in &splits.trains {
            write_verdicts_csv(&dir.join(format!("train-{:05}.csv", train.len())), train)?;
        }
        write_verdicts_csv(&dir.join("test.csv"), &splits.test)?;
        print_summary(serde_json::json!({
            "command": "split",
            "mode": "chronological",
            "train_sizes": splits.trains.iter().map(Vec::len).collect::<Vec<_>>(),
            "test_size": splits.test.len(),
            "dir": dir,
        }));
        return Ok(());
    }

    let pairs = load_pairs(&path, format)?;
    let seed = settings.sub_seed("folds");
    let folds = if args.grouped {
        make_folds_grouped(&pairs, args.k, seed)?
    } else {
        make_folds(&pairs, args.k, seed)?
    };
    if settings.validate_only {
        return Ok(());
    }
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    for fold in &folds {
        let prefix = format!("fold-{:02}", fold.fold_index);
        write_pairs_jsonl(&dir.join(format!("{prefix}-train.jsonl")), &fold.train)?;
        write_pairs_jsonl(&dir.join(format!("{prefix}-test.jsonl")), &fold.test)?;
    }
    print_summary(serde_json::json!({
        "command": "split",
        "mode": if args.grouped { "grouped" } else { "plain" },
        "folds": folds.len(),
        "records": pairs.len(),
        "dir": dir,
    }));
    Ok(())
}

// ------------------------------------------------------------ grid-search

#[derive(Debug, clap::Args)]
pub struct GridSearchArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    /// Ranked results CSV name.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also emit a feature config built from the top M settings
    /// (M defaults to 16 when the flag is bare).
    #[arg(long, num_args = 0..=1, default_missing_value = "16")]
    pub emit_config: Option<usize>,
    /// Path for the emitted feature config.
    #[arg(long)]
    pub config_out: Option<PathBuf>,
}

struct GridRow {
    params: TfidfParams,
    threshold: f64,
    f1: f64,
}

/// Evaluate one TFIDF setting: fit on all texts of the pairs, score each
/// pair by statement/document cosine, and take the best single-threshold
/// F1.
fn evaluate_setting(params: TfidfParams, pairs: &[LabeledPair], y: &[u8]) -> Result<GridRow> {
    let corpus: Vec<&str> = pairs
        .iter()
        .flat_map(|p| [p.claim.as_str(), p.text.as_str()])
        .collect();
    let model = fit_tfidf(&corpus, params)?;
    let scores: Vec<f64> = pairs
        .iter()
        .map(|p| {
            let u = transform_tfidf(&model, &p.claim);
            let v = transform_tfidf(&model, &p.text);
            cosine_sparse(&u, &v).map(|s| s.value)
        })
        .collect::<Result<_>>()?;
    let (threshold, f1) = threshold_baseline(&scores, y)?;
    Ok(GridRow {
        params,
        threshold,
        f1,
    })
}

#[cfg(feature = "parallel")]
fn map_grid<F>(grid: Vec<TfidfParams>, f: F) -> Result<Vec<GridRow>>
where
    F: Fn(TfidfParams) -> Result<GridRow> + Sync + Send,
{
    use rayon::prelude::*;
    grid.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_grid<F>(grid: Vec<TfidfParams>, f: F) -> Result<Vec<GridRow>>
where
    F: Fn(TfidfParams) -> Result<GridRow>,
{
    grid.into_iter().map(f).collect()
}

/// Rank every setting of the TFIDF grid by threshold-baseline F1 over a
/// binary-labeled pair dataset.
pub fn grid_search(settings: &Settings, args: &GridSearchArgs) -> Result<()> {
    let (path, format) = settings.dataset(args.input.as_deref(), args.format.as_deref())?;
    let pairs = load_pairs(&path, format)?;
    let y: Vec<u8> = pairs.iter().map(|p| p.label.code()).collect();
    if let Some(bad) = y.iter().find(|&&code| code > 1) {
        return Err(Error::InvalidInput(format!(
            "grid search needs binary labels (codes 0/1), found code {bad}"
        )));
    }
    if settings.validate_only {
        return Ok(());
    }

    let mut rows = map_grid(tfidf_grid(), |params| evaluate_setting(params, &pairs, &y))?;
    // Stable sort: ties keep grid order, so output is deterministic.
    rows.sort_by(|a, b| b.f1.partial_cmp(&a.f1).expect("f1 is finite"));

    let out = artifact_path(settings, args.out.as_deref(), "grid.csv");
    let mut writer = csv::Writer::from_path(&out)?;
    writer.write_record([
        "rank",
        "n_features",
        "ngram_lo",
        "ngram_hi",
        "max_df",
        "min_df",
        "metric",
        "threshold",
        "f1",
    ])?;
    for (rank, row) in rows.iter().enumerate() {
        writer.write_record([
            (rank + 1).to_string(),
            row.params.n_features.to_string(),
            row.params.ngram_range.0.to_string(),
            row.params.ngram_range.1.to_string(),
            row.params.max_df.to_string(),
            row.params.min_df.to_string(),
            "cosine".to_string(),
            row.threshold.to_string(),
            row.f1.to_string(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io(&out, e))?;

    let mut summary = serde_json::json!({
        "command": "grid-search",
        "settings": rows.len(),
        "best_f1": rows.first().map(|r| r.f1),
        "output": out,
    });
    if let Some(top_m) = args.emit_config {
        let results: Vec<(TfidfParams, VectorMetric, f64)> = rows
            .iter()
            .map(|r| (r.params, VectorMetric::Cosine, r.f1))
            .collect();
        let providers = settings.provider_set()?;
        let mut ner_names = providers.ner_names();
        ner_names.push("heuristic".to_string());
        let config = default_from_grid(&results, top_m, &providers.embedding_names(), &ner_names)?;
        let config_out = artifact_path(settings, args.config_out.as_deref(), "feature_config.json");
        config.save(&config_out)?;
        summary["feature_config"] = serde_json::json!(config_out);
    }
    print_summary(summary);
    Ok(())
}

// -------------------------------------------------------------- featurize

#[derive(Debug, clap::Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    /// Feature config JSON; defaults to [features] in the config.
    #[arg(long)]
    pub feature_config: Option<PathBuf>,
    /// Reuse a fitted extractor instead of fitting on the input.
    #[arg(long)]
    pub extractor: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to save the fitted extractor.
    #[arg(long)]
    pub save_extractor: Option<PathBuf>,
    /// Fall back to the heuristic entity extractor when a configured
    /// provider fails.
    #[arg(long)]
    pub ner_fallback: bool,
}

/// Turn labeled pairs into the per-pair similarity feature matrix.
pub fn featurize(settings: &Settings, args: &FeaturizeArgs) -> Result<()> {
    let (path, format) = settings.dataset(args.input.as_deref(), args.format.as_deref())?;
    let pairs = load_pairs(&path, format)?;
    let mut providers = settings.provider_set()?;
    providers.ner_fallback = args.ner_fallback;

    enum Source {
        Fitted,
        Loaded(PathBuf),
    }
    let (extractor, source) = match &args.extractor {
        Some(extractor_path) => {
            require_exists(extractor_path)?;
            (
                FeatureExtractor::load(extractor_path)?,
                Source::Loaded(extractor_path.clone()),
            )
        }
        None => {
            let config_path = settings.feature_config_path(args.feature_config.as_deref())?;
            let config = FeatureConfig::load(&config_path)?;
            (
                FeatureExtractor::fit_from_pairs(config, &pairs)?,
                Source::Fitted,
            )
        }
    };
    if settings.validate_only {
        return Ok(());
    }

    let matrix = extractor.featurize_set(&pairs, &providers)?;
    let out = artifact_path(settings, args.out.as_deref(), "features.csv");
    matrix.write_csv(&out)?;

    let extractor_out = match source {
        Source::Loaded(path) => path,
        Source::Fitted => {
            let path = artifact_path(settings, args.save_extractor.as_deref(), "extractor.json");
            extractor.save(&path)?;
            path
        }
    };
    print_summary(serde_json::json!({
        "command": "featurize",
        "rows": matrix.n_rows(),
        "features": matrix.n_features(),
        "config_hash": matrix.config_hash,
        "output": out,
        "extractor": extractor_out,
    }));
    Ok(())
}

// ------------------------------------------------------------------ train

#[derive(Debug, clap::Args)]
pub struct TrainArgs {
    /// Feature matrix CSV produced by `featurize`.
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[arg(long)]
    pub model_out: Option<PathBuf>,
}

/// Train the configured classifier on a feature matrix.
pub fn train(settings: &Settings, args: &TrainArgs) -> Result<()> {
    let features = artifact_path(settings, args.features.as_deref(), "features.csv");
    require_exists(&features)?;
    let matrix = FeatureMatrix::read_csv(&features)?;
    let spec = settings.classifier_spec()?;
    if settings.validate_only {
        return Ok(());
    }
    let model = train_classifier(&spec, &matrix, &matrix.labels)?;
    let out = artifact_path(settings, args.model_out.as_deref(), "model.json");
    model.save(&out)?;
    print_summary(serde_json::json!({
        "command": "train",
        "classifier": spec.kind_name(),
        "rows": matrix.n_rows(),
        "features": matrix.n_features(),
        "output": out,
    }));
    Ok(())
}

// ---------------------------------------------------------------- predict

#[derive(Debug, clap::Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Predict labels for a feature matrix with a trained model.
pub fn predict(settings: &Settings, args: &PredictArgs) -> Result<()> {
    let features = artifact_path(settings, args.features.as_deref(), "features.csv");
    let model_path = artifact_path(settings, args.model.as_deref(), "model.json");
    require_exists(&features)?;
    require_exists(&model_path)?;
    let matrix = FeatureMatrix::read_csv(&features)?;
    let model = TrainedModel::load(&model_path)?;
    let predicted = model.predict(&matrix)?;
    if settings.validate_only {
        return Ok(());
    }
    let out = artifact_path(settings, args.out.as_deref(), "predictions.csv");
    let mut writer = csv::Writer::from_path(&out)?;
    writer.write_record(["id", "label"])?;
    for (id, label) in matrix.pair_ids.iter().zip(&predicted) {
        writer.write_record([id.as_str(), &label.to_string()])?;
    }
    writer.flush().map_err(|e| Error::io(&out, e))?;
    print_summary(serde_json::json!({
        "command": "predict",
        "rows": predicted.len(),
        "output": out,
    }));
    Ok(())
}

// --------------------------------------------------------------- evaluate

#[derive(Debug, clap::Args)]
pub struct EvaluateArgs {
    /// Feature matrix to evaluate a model on.
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Prediction CSV (id,label) to score against the configured dataset
    /// instead of running a model.
    #[arg(long, conflicts_with_all = ["features", "model", "folds", "curve_sizes"])]
    pub predictions: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub positive_class: u8,
    /// Re-train and score the configured classifier over K seeded folds
    /// of the feature matrix.
    #[arg(long)]
    pub folds: Option<usize>,
    /// Training sizes for a learning curve over the feature matrix.
    #[arg(long, value_delimiter = ',')]
    pub curve_sizes: Vec<usize>,
    #[arg(long)]
    pub title: Option<String>,
    #[arg(long)]
    pub report_dir: Option<PathBuf>,
}

fn submatrix(matrix: &FeatureMatrix, rows: &[usize]) -> FeatureMatrix {
    FeatureMatrix {
        config_hash: matrix.config_hash.clone(),
        columns: matrix.columns.clone(),
        pair_ids: rows.iter().map(|&i| matrix.pair_ids[i].clone()).collect(),
        values: rows.iter().map(|&i| matrix.values[i].clone()).collect(),
        labels: rows.iter().map(|&i| matrix.labels[i]).collect(),
    }
}

fn confusion_over_codes(
    y_true: &[u8],
    y_pred: &[u8],
) -> Result<claimcheck_core::evalreport::ConfusionMatrix> {
    let mut classes: Vec<u8> = y_true.iter().chain(y_pred).copied().collect();
    classes.sort_unstable();
    classes.dedup();
    confusion(y_true, y_pred, &classes)
}

/// Cross-validate the configured classifier over seeded row folds of the
/// matrix; accuracies are percentages.
fn fold_rows(
    settings: &Settings,
    matrix: &FeatureMatrix,
    k: usize,
    dataset_name: &str,
) -> Result<FoldTable> {
    let n = matrix.n_rows();
    if k < 2 || k > n {
        return Err(Error::InvalidInput(format!(
            "--folds {k} out of range for {n} rows"
        )));
    }
    let spec = settings.classifier_spec()?;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.sub_seed("folds"));
    order.shuffle(&mut rng);

    let mut table = FoldTable::new();
    for fold in 0..k {
        let lo = fold * n / k;
        let hi = (fold + 1) * n / k;
        let test_rows = &order[lo..hi];
        let train_rows: Vec<usize> = order[..lo].iter().chain(&order[hi..]).copied().collect();
        let train = submatrix(matrix, &train_rows);
        let test = submatrix(matrix, test_rows);
        let model = train_classifier(&spec, &train, &train.labels)?;
        let predicted = model.predict(&test)?;
        table.push(FoldRow {
            train_dataset: dataset_name.to_string(),
            test_dataset: dataset_name.to_string(),
            fold_index: fold + 1,
            accuracy: accuracy(&test.labels, &predicted)? * 100.0,
        })?;
    }
    Ok(table)
}

/// Accuracy at growing training prefixes of a seeded shuffle, scored on
/// a held-out 20% tail.
fn curve_points(
    settings: &Settings,
    matrix: &FeatureMatrix,
    sizes: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let n = matrix.n_rows();
    let n_test = (n / 5).max(1);
    let spec = settings.classifier_spec()?;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.sub_seed("curve"));
    order.shuffle(&mut rng);
    let (pool, test_rows) = order.split_at(n - n_test);
    let test = submatrix(matrix, test_rows);

    let mut points = Vec::with_capacity(sizes.len());
    for &size in sizes {
        if size == 0 || size > pool.len() {
            return Err(Error::InvalidInput(format!(
                "curve size {size} out of range: {} rows available for training",
                pool.len()
            )));
        }
        let train = submatrix(matrix, &pool[..size]);
        let model = train_classifier(&spec, &train, &train.labels)?;
        let predicted = model.predict(&test)?;
        points.push((size, accuracy(&test.labels, &predicted)? * 100.0));
    }
    Ok(points)
}

/// Score predictions (from a model or a prediction file) and write the
/// full report bundle.
pub fn evaluate(settings: &Settings, args: &EvaluateArgs) -> Result<()> {
    let report_dir = artifact_path(settings, args.report_dir.as_deref(), "report");

    let (y_true, y_pred, dataset_name) = match &args.predictions {
        Some(predictions_path) => {
            require_exists(predictions_path)?;
            let (path, format) = settings.dataset(args.input.as_deref(), args.format.as_deref())?;
            let pairs = load_pairs(&path, format)?;
            let rows = ingest_predictions(predictions_path, pairs.len())?;
            let mut by_id: std::collections::HashMap<&str, PairLabel> =
                rows.iter().map(|(id, label)| (id.as_str(), *label)).collect();
            if by_id.len() != rows.len() {
                return Err(Error::InvalidInput(format!(
                    "{}: duplicate prediction ids",
                    predictions_path.display()
                )));
            }
            let mut y_true = Vec::with_capacity(pairs.len());
            let mut y_pred = Vec::with_capacity(pairs.len());
            for pair in &pairs {
                let label = by_id.remove(pair.id.as_str()).ok_or_else(|| {
                    Error::IdMismatch(format!("no prediction for id {:?}", pair.id))
                })?;
                y_true.push(pair.label.code());
                y_pred.push(label.code());
            }
            (y_true, y_pred, dataset_label(&path))
        }
        None => {
            let features = artifact_path(settings, args.features.as_deref(), "features.csv");
            let model_path = artifact_path(settings, args.model.as_deref(), "model.json");
            require_exists(&features)?;
            require_exists(&model_path)?;
            let matrix = FeatureMatrix::read_csv(&features)?;
            let model = TrainedModel::load(&model_path)?;
            let y_pred = model.predict(&matrix)?;
            let name = dataset_label(&features);

            if settings.validate_only {
                return Ok(());
            }
            let mut report = EvaluationReport::new(
                args.title.clone().unwrap_or_else(|| name.clone()),
            );
            report.metrics = Some(MetricsBlock::from_predictions(
                &matrix.labels,
                &y_pred,
                args.positive_class,
            )?);
            report.confusion = Some(confusion_over_codes(&matrix.labels, &y_pred)?);
            if let Some(k) = args.folds {
                report.folds = fold_rows(settings, &matrix, k, &name)?;
            }
            if !args.curve_sizes.is_empty() {
                report.curve = learning_curve(&curve_points(settings, &matrix, &args.curve_sizes)?)?;
            }
            report.write_bundle(&report_dir)?;
            let metrics = report.metrics.as_ref().expect("metrics set above");
            print_summary(serde_json::json!({
                "command": "evaluate",
                "rows": matrix.n_rows(),
                "accuracy": metrics.accuracy,
                "f1": metrics.f1,
                "report_dir": report_dir,
            }));
            return Ok(());
        }
    };

    if settings.validate_only {
        return Ok(());
    }
    let mut report =
        EvaluationReport::new(args.title.clone().unwrap_or_else(|| dataset_name.clone()));
    report.metrics = Some(MetricsBlock::from_predictions(
        &y_true,
        &y_pred,
        args.positive_class,
    )?);
    report.confusion = Some(confusion_over_codes(&y_true, &y_pred)?);
    report.write_bundle(&report_dir)?;
    let metrics = report.metrics.as_ref().expect("metrics set above");
    print_summary(serde_json::json!({
        "command": "evaluate",
        "rows": y_true.len(),
        "accuracy": metrics.accuracy,
        "f1": metrics.f1,
        "report_dir": report_dir,
    }));
    Ok(())
}

// ----------------------------------------------------------------- entail

#[derive(Debug, clap::Args)]
pub struct EntailArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    /// Prompt template: v1 or v2.
    #[arg(long, default_value = "v1")]
    pub template: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn entail_template(name: &str) -> Result<TemplateId> {
    match name {
        "v1" => Ok(TemplateId::EntailV1),
        "v2" => Ok(TemplateId::EntailV2),
        other => Err(Error::InvalidInput(format!(
            "unknown template {other:?} (expected v1 or v2)"
        ))),
    }
}

/// Run the entailment prompt over every pair through the configured
/// provider (cached) and write parsed labels with rationales.
pub fn entail(settings: &Settings, args: &EntailArgs) -> Result<()> {
    let (path, format) = settings.dataset(args.input.as_deref(), args.format.as_deref())?;
    let pairs = load_pairs(&path, format)?;
    let template = entail_template(&args.template)?;
    let provider = settings.provider_config()?;
    let prompts: Vec<String> = pairs
        .iter()
        .map(|p| entailment_prompt(template, &p.claim, &p.text))
        .collect::<Result<_>>()?;
    if settings.validate_only {
        return Ok(());
    }

    let cache = ResponseCache::open(&settings.cache_dir)?;
    let responses = query_many(&provider, &prompts, &cache)?;
    let parsed = responses
        .iter()
        .map(|raw| parse_entailment_response(raw))
        .collect::<Result<Vec<_>>>()?;

    let out = artifact_path(settings, args.out.as_deref(), "entail_predictions.csv");
    let mut writer = csv::Writer::from_path(&out)?;
    writer.write_record(["id", "label", "rationale"])?;
    for (pair, p) in pairs.iter().zip(&parsed) {
        writer.write_record([pair.id.as_str(), p.label.as_str(), p.rationale.as_str()])?;
    }
    writer.flush().map_err(|e| Error::io(&out, e))?;

    // Agreement with gold labels only makes sense on the entailment taxonomy.
    let gold: Option<Vec<u8>> = pairs
        .iter()
        .map(|p| match p.label {
            PairLabel::Entail(l) => Some(l.code()),
            PairLabel::Sim(_) => None,
        })
        .collect();
    let agreement = gold.and_then(|gold| {
        let predicted: Vec<u8> = parsed.iter().map(|p| p.label.code()).collect();
        accuracy(&gold, &predicted).ok()
    });
    print_summary(serde_json::json!({
        "command": "entail",
        "records": pairs.len(),
        "template": template.as_str(),
        "accuracy": agreement,
        "output": out,
    }));
    Ok(())
}

// ------------------------------------------------------------- categorize

#[derive(Debug, clap::Args)]
pub struct CategorizeArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Assign each verdict text one of the five prompt categories through
/// the configured provider.
pub fn categorize(settings: &Settings, args: &CategorizeArgs) -> Result<()> {
    let (path, format) = settings.dataset(args.input.as_deref(), args.format.as_deref())?;
    if format != DatasetFormat::VerdictsCsv {
        return Err(Error::InvalidInput(
            "categorize needs a verdicts-csv dataset".into(),
        ));
    }
    let verdicts = load_verdicts(&path)?;
    let provider = settings.provider_config()?;
    let prompts: Vec<String> = verdicts
        .iter()
        .map(|v| verdict_prompt(&v.verdict_text))
        .collect::<Result<_>>()?;
    if settings.validate_only {
        return Ok(());
    }

    let cache = ResponseCache::open(&settings.cache_dir)?;
    let responses = query_many(&provider, &prompts, &cache)?;
    let categories = responses
        .iter()
        .map(|raw| parse_verdict_category(raw))
        .collect::<Result<Vec<_>>>()?;

    let out = artifact_path(settings, args.out.as_deref(), "categories.csv");
    let mut writer = csv::Writer::from_path(&out)?;
    writer.write_record(["id", "category"])?;
    for (verdict, category) in verdicts.iter().zip(&categories) {
        writer.write_record([verdict.id.as_str(), category.as_str()])?;
    }
    writer.flush().map_err(|e| Error::io(&out, e))?;
    print_summary(serde_json::json!({
        "command": "categorize",
        "records": verdicts.len(),
        "output": out,
    }));
    Ok(())
}

// -------------------------------------------------------------- treatment

#[derive(Debug, clap::Args)]
pub struct TreatmentArgs {
    /// Treatment record CSV (id,statement,content,orientation,subject,
    /// argumentation); defaults to the [dataset] path.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub title: Option<String>,
    #[arg(long)]
    pub report_dir: Option<PathBuf>,
}

/// Predict the three treatment strata for every record through the
/// configured provider and score them against the gold annotations.
pub fn treatment(settings: &Settings, args: &TreatmentArgs) -> Result<()> {
    let path = match (&args.input, &settings.config.dataset) {
        (Some(path), _) => path.clone(),
        (None, Some(dataset)) => dataset.path.clone(),
        (None, None) => {
            return Err(Error::InvalidInput(
                "no dataset: pass --input or set [dataset] in the config".into(),
            ))
        }
    };
    require_exists(&path)?;
    let records = load_treatment_records(&path)?;
    let provider = settings.provider_config()?;
    let prompts: Vec<String> = records
        .iter()
        .map(|r| treatment_prompt(&r.statement, &r.content))
        .collect::<Result<_>>()?;
    if settings.validate_only {
        return Ok(());
    }

    let cache = ResponseCache::open(&settings.cache_dir)?;
    let responses = query_many(&provider, &prompts, &cache)?;
    let predicted = responses
        .iter()
        .map(|raw| parse_treatment_response(raw))
        .collect::<Result<Vec<_>>>()?;

    let out = artifact_path(settings, args.out.as_deref(), "treatment_predictions.csv");
    let mut writer = csv::Writer::from_path(&out)?;
    writer.write_record(["id", "orientation", "subject", "argumentation"])?;
    for (record, label) in records.iter().zip(&predicted) {
        writer.write_record([
            record.id.as_str(),
            label.orientation.as_str(),
            label.subject.as_str(),
            label.argumentation.as_str(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io(&out, e))?;

    let gold: Vec<_> = records.iter().map(|r| r.label).collect();
    let strata = strata_evaluation(&gold, &predicted)?;
    let all_exact = strata.all_exact;
    let mut report = EvaluationReport::new(
        args.title
            .clone()
            .unwrap_or_else(|| dataset_label(&path)),
    );
    report.strata = Some(strata);
    let report_dir = artifact_path(settings, args.report_dir.as_deref(), "report");
    report.write_bundle(&report_dir)?;
    print_summary(serde_json::json!({
        "command": "treatment",
        "records": records.len(),
        "all_exact": all_exact,
        "output": out,
        "report_dir": report_dir,
    }));
    Ok(())
}

// ---------------------------------------------------------------- clarity

#[derive(Debug, clap::Args)]
pub struct ClarityArgs {
    /// The statement the explanation should support.
    #[arg(long)]
    pub statement: String,
    /// The explanation under review.
    #[arg(long)]
    pub explanation: String,
}

/// Single-shot clarity check of an explanation against its statement;
/// prints the verdict JSON to stdout.
pub fn clarity(settings: &Settings, args: &ClarityArgs) -> Result<()> {
    let provider = settings.provider_config()?;
    if args.statement.trim().is_empty() || args.explanation.trim().is_empty() {
        return Err(Error::InvalidInput(
            "--statement and --explanation must be nonempty".into(),
        ));
    }
    if settings.validate_only {
        return Ok(());
    }
    let cache = ResponseCache::open(&settings.cache_dir)?;
    let check = clarity_check(&args.statement, &args.explanation, &provider, &cache)?;
    println!("{}", serde_json::to_string(&check)?);
    Ok(())
}

// ----------------------------------------------------------------- report

#[derive(Debug, clap::Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub title: String,
    /// Fold accuracy CSV (train_dataset,test_dataset,fold_index,accuracy).
    #[arg(long)]
    pub folds_csv: Option<PathBuf>,
    /// Learning-curve CSV (n_train,accuracy).
    #[arg(long)]
    pub curve_csv: Option<PathBuf>,
    #[arg(long)]
    pub report_dir: Option<PathBuf>,
}

fn read_folds_csv(path: &Path) -> Result<FoldTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let mut table = FoldTable::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize, name: &str| {
            record
                .get(i)
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| {
                    Error::InvalidInput(format!("{}: missing {name}", path.display()))
                })
        };
        table.push(FoldRow {
            train_dataset: field(0, "train_dataset")?.to_string(),
            test_dataset: field(1, "test_dataset")?.to_string(),
            fold_index: field(2, "fold_index")?.parse().map_err(|e| {
                Error::InvalidInput(format!("{}: bad fold_index: {e}", path.display()))
            })?,
            accuracy: field(3, "accuracy")?.parse().map_err(|e| {
                Error::InvalidInput(format!("{}: bad accuracy: {e}", path.display()))
            })?,
        })?;
    }
    Ok(table)
}

fn read_curve_csv(path: &Path) -> Result<Vec<(usize, f64)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record?;
        let bad = |what: &str| Error::InvalidInput(format!("{}: {what}", path.display()));
        let n_train: usize = record
            .get(0)
            .ok_or_else(|| bad("missing n_train"))?
            .trim()
            .parse()
            .map_err(|e| bad(&format!("bad n_train: {e}")))?;
        let accuracy: f64 = record
            .get(1)
            .ok_or_else(|| bad("missing accuracy"))?
            .trim()
            .parse()
            .map_err(|e| bad(&format!("bad accuracy: {e}")))?;
        points.push((n_train, accuracy));
    }
    Ok(points)
}

/// Assemble a report bundle from previously computed fold and curve
/// tables.
pub fn report(settings: &Settings, args: &ReportArgs) -> Result<()> {
    let mut report = EvaluationReport::new(args.title.clone());
    if let Some(path) = &args.folds_csv {
        require_exists(path)?;
        report.folds = read_folds_csv(path)?;
    }
    if let Some(path) = &args.curve_csv {
        require_exists(path)?;
        report.curve = learning_curve(&read_curve_csv(path)?)?;
    }
    if settings.validate_only {
        return Ok(());
    }
    let report_dir = artifact_path(settings, args.report_dir.as_deref(), "report");
    report.write_bundle(&report_dir)?;
    print_summary(serde_json::json!({
        "command": "report",
        "folds": report.folds.rows().len(),
        "curve_points": report.curve.points().len(),
        "report_dir": report_dir,
    }));
    Ok(())
}
