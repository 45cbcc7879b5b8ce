//! `claimcheck`: the claim-verification pipeline as subcommands.
//!
//! One TOML config plus flag overrides (flags win) drives every command.
//! Exit codes: 0 success, 1 validation error, 2 transport/provider
//! error, with a machine-readable error JSON on stderr.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use claimcheck_core::{Error, Result};

use config::{Overrides, Settings};

#[derive(Debug, Parser)]
#[command(
    name = "claimcheck",
    version,
    about = "Claim verification: dataset ingestion, similarity features, classifiers, \
             entailment prompting, and evaluation reports"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct GlobalArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; every random choice derives from it via labeled
    /// sub-seeds.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory receiving all outputs and the run manifest.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Provider response cache directory.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Upper bound on worker threads and provider concurrency.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Run all precondition checks, then exit without side effects.
    #[arg(long, global = true)]
    validate_only: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a dataset file and rewrite it in canonical form.
    Ingest(commands::IngestArgs),
    /// Expand two id-aligned pair files into the four language combinations.
    ExpandMl(commands::ExpandMlArgs),
    /// Cut seeded folds, or chronological prefixes of a verdict set.
    Split(commands::SplitArgs),
    /// Rank every TFIDF grid setting by single-threshold F1.
    GridSearch(commands::GridSearchArgs),
    /// Build the per-pair similarity feature matrix.
    Featurize(commands::FeaturizeArgs),
    /// Train the configured classifier on a feature matrix.
    Train(commands::TrainArgs),
    /// Predict labels for a feature matrix with a trained model.
    Predict(commands::PredictArgs),
    /// Score a model or a prediction file and write the report bundle.
    Evaluate(commands::EvaluateArgs),
    /// Run the entailment prompt over pairs through the provider.
    Entail(commands::EntailArgs),
    /// Assign verdict categories through the provider.
    Categorize(commands::CategorizeArgs),
    /// Predict and score content-treatment strata through the provider.
    Treatment(commands::TreatmentArgs),
    /// Check one explanation's clarity against its statement.
    Clarity(commands::ClarityArgs),
    /// Assemble a report bundle from existing fold/curve tables.
    Report(commands::ReportArgs),
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Ingest(_) => "ingest",
        Command::ExpandMl(_) => "expand-ml",
        Command::Split(_) => "split",
        Command::GridSearch(_) => "grid-search",
        Command::Featurize(_) => "featurize",
        Command::Train(_) => "train",
        Command::Predict(_) => "predict",
        Command::Evaluate(_) => "evaluate",
        Command::Entail(_) => "entail",
        Command::Categorize(_) => "categorize",
        Command::Treatment(_) => "treatment",
        Command::Clarity(_) => "clarity",
        Command::Report(_) => "report",
    }
}

fn dispatch(command: &Command, settings: &Settings) -> Result<()> {
    match command {
        Command::Ingest(args) => commands::ingest(settings, args),
        Command::ExpandMl(args) => commands::expand_ml(settings, args),
        Command::Split(args) => commands::split(settings, args),
        Command::GridSearch(args) => commands::grid_search(settings, args),
        Command::Featurize(args) => commands::featurize(settings, args),
        Command::Train(args) => commands::train(settings, args),
        Command::Predict(args) => commands::predict(settings, args),
        Command::Evaluate(args) => commands::evaluate(settings, args),
        Command::Entail(args) => commands::entail(settings, args),
        Command::Categorize(args) => commands::categorize(settings, args),
        Command::Treatment(args) => commands::treatment(settings, args),
        Command::Clarity(args) => commands::clarity(settings, args),
        Command::Report(args) => commands::report(settings, args),
    }
}

#[cfg(feature = "parallel")]
fn configure_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // The global pool can only be initialized once; a failure just
        // means a pool already exists, which is fine.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_jobs(_jobs: Option<usize>) {}

fn run(cli: &Cli) -> Result<()> {
    let settings = Settings::resolve(&Overrides {
        config: cli.global.config.clone(),
        seed: cli.global.seed,
        output_dir: cli.global.output_dir.clone(),
        cache_dir: cli.global.cache_dir.clone(),
        jobs: cli.global.jobs,
        validate_only: cli.global.validate_only,
    })?;
    configure_jobs(settings.jobs);

    let name = command_name(&cli.command);
    if !settings.validate_only {
        std::fs::create_dir_all(&settings.output_dir)
            .map_err(|e| Error::io(&settings.output_dir, e))?;
        manifest::write_manifest(&settings, name)?;
    }
    dispatch(&cli.command, &settings)?;
    if settings.validate_only {
        println!(
            "{}",
            serde_json::json!({ "command": name, "validate_only": true, "ok": true })
        );
    }
    Ok(())
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Io { .. } => "io",
        Error::UnknownFormat(_) => "unknown_format",
        Error::InvalidRecords { .. } => "invalid_records",
        Error::InvalidInput(_) => "invalid_input",
        Error::IdMismatch(_) => "id_mismatch",
        Error::LabelDisagreement { .. } => "label_disagreement",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::MissingEmbedding { .. } => "missing_embedding",
        Error::Provider { .. } => "provider",
        Error::Transport { .. } => "transport",
        Error::UnparseableResponse(_) => "unparseable_response",
        Error::MissingBinding(_) => "missing_binding",
        Error::MissingStratum(_) => "missing_stratum",
        Error::UnknownStratumValue { .. } => "unknown_stratum_value",
        Error::UnknownLabel(_) => "unknown_label",
        Error::ConfigHashMismatch { .. } => "config_hash_mismatch",
        Error::CountMismatch { .. } => "count_mismatch",
        Error::Serde(_) => "serde",
        Error::Csv(_) => "csv",
    }
}

/// Transport and provider failures get exit code 2; every other error is
/// a validation failure (1).
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Transport { .. } | Error::Provider { .. } => 2,
        _ => 1,
    }
}

fn main() {
    // Usage errors are validation errors (exit 1); clap's default exit
    // code of 2 is reserved for transport failures here.
    let cli = Cli::try_parse().unwrap_or_else(|err| {
        let _ = err.print();
        std::process::exit(if err.use_stderr() { 1 } else { 0 });
    });
    if let Err(err) = run(&cli) {
        let payload = serde_json::json!({
            "error": { "kind": error_kind(&err), "message": err.to_string() }
        });
        eprintln!("{payload}");
        std::process::exit(exit_code(&err));
    }
}
