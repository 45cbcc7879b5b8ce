//! File ingestion and serialization for the dataset shapes.
//!
//! Canonical pair format is JSON-lines with fields
//! {id, claim, text, label, claim_lang, text_lang, source}; a CSV variant
//! with the same columns is accepted for spreadsheet-edited data. Verdicts
//! travel as CSV {id, date, verdict_text, category, party, source} and
//! treatment annotations as CSV
//! {id, statement, content, orientation, subject, argumentation}.
//!
//! Invalid records are collected with their line numbers and reported
//! together; they are never silently dropped.

use std::collections::HashMap;
use std::path::Path;

use chrono::NaiveDate;

use crate::corpus::{
    Argumentation, EntailLabel, LabeledPair, Orientation, PagellaLabel, PairLabel, SimLabel,
    Subject, TreatmentLabel, TreatmentRecord, Verdict,
};
use crate::error::{Error, RecordFailure, Result};

/// On-disk dataset formats. Bare numeric labels are resolved per format:
/// entailment codes in `fever-jsonl`, similarity codes in `pairs-csv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    FeverJsonl,
    PairsCsv,
    VerdictsCsv,
}

impl DatasetFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            DatasetFormat::FeverJsonl => "fever-jsonl",
            DatasetFormat::PairsCsv => "pairs-csv",
            DatasetFormat::VerdictsCsv => "verdicts-csv",
        }
    }
}

impl std::str::FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "fever-jsonl" => Ok(DatasetFormat::FeverJsonl),
            "pairs-csv" => Ok(DatasetFormat::PairsCsv),
            "verdicts-csv" => Ok(DatasetFormat::VerdictsCsv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl std::fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A loaded dataset: labeled pairs or verdicts depending on the format.
#[derive(Debug, Clone)]
pub enum Dataset {
    Pairs(Vec<LabeledPair>),
    Verdicts(Vec<Verdict>),
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Dataset::Pairs(p) => p.len(),
            Dataset::Verdicts(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Load a dataset file in the given format.
pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<Dataset> {
    match format {
        DatasetFormat::FeverJsonl => load_pairs(path, format).map(Dataset::Pairs),
        DatasetFormat::PairsCsv => load_pairs(path, format).map(Dataset::Pairs),
        DatasetFormat::VerdictsCsv => load_verdicts(path).map(Dataset::Verdicts),
    }
}

/// Load labeled pairs from a `fever-jsonl` or `pairs-csv` file.
pub fn load_pairs(path: &Path, format: DatasetFormat) -> Result<Vec<LabeledPair>> {
    match format {
        DatasetFormat::FeverJsonl => load_pairs_jsonl(path),
        DatasetFormat::PairsCsv => load_pairs_csv(path),
        DatasetFormat::VerdictsCsv => Err(Error::InvalidInput(
            "verdicts-csv holds verdicts, not pairs; use load_verdicts".to_string(),
        )),
    }
}

fn read_utf8(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Tracks id uniqueness and collects per-record failures.
struct RecordSink {
    failures: Vec<RecordFailure>,
    seen: HashMap<String, usize>,
}

impl RecordSink {
    fn new() -> Self {
        RecordSink {
            failures: Vec::new(),
            seen: HashMap::new(),
        }
    }

    fn fail(&mut self, line: usize, message: impl Into<String>) {
        self.failures.push(RecordFailure {
            line,
            message: message.into(),
        });
    }

    /// Returns false (and records a failure) when the id was already seen.
    fn claim_id(&mut self, id: &str, line: usize) -> bool {
        match self.seen.get(id) {
            Some(first) => {
                self.fail(
                    line,
                    format!("duplicate id {:?} (first seen at line {first})", id),
                );
                false
            }
            None => {
                self.seen.insert(id.to_string(), line);
                true
            }
        }
    }

    fn finish<T>(self, path: &Path, records: Vec<T>) -> Result<Vec<T>> {
        if self.failures.is_empty() {
            Ok(records)
        } else {
            Err(Error::InvalidRecords {
                path: path.to_path_buf(),
                failures: self.failures,
            })
        }
    }
}

fn validate_lang(raw: Option<&str>) -> std::result::Result<String, String> {
    let s = match raw {
        None => return Ok("en".to_string()),
        Some(s) if s.trim().is_empty() => return Ok("en".to_string()),
        Some(s) => s.trim().to_lowercase(),
    };
    if s.len() == 2 && s.bytes().all(|b| b.is_ascii_lowercase()) {
        Ok(s)
    } else {
        Err(format!("language {s:?} is not an ISO-639-1 code"))
    }
}

fn parse_pair_label(raw: &str, format: DatasetFormat) -> std::result::Result<PairLabel, String> {
    if let Some(l) = PairLabel::parse_name(raw) {
        return Ok(l);
    }
    // Bare digits carry the taxonomy of the file format.
    if let Ok(code) = raw.trim().parse::<u8>() {
        let parsed = match format {
            DatasetFormat::FeverJsonl => EntailLabel::from_code(code).map(PairLabel::Entail),
            DatasetFormat::PairsCsv => SimLabel::from_code(code).map(PairLabel::Sim),
            DatasetFormat::VerdictsCsv => None,
        };
        return parsed.ok_or_else(|| format!("label code {code} out of range for {format}"));
    }
    Err(format!("unknown label {raw:?}"))
}

fn load_pairs_jsonl(path: &Path) -> Result<Vec<LabeledPair>> {
    let content = read_utf8(path)?;
    let mut sink = RecordSink::new();
    let mut pairs = Vec::new();

    for (idx, raw_line) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = if idx == 0 {
            raw_line.trim_start_matches('\u{feff}')
        } else {
            raw_line
        };
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = match serde_json::from_str(line) {
            Ok(v) => v,
            Err(e) => {
                sink.fail(line_no, format!("invalid JSON: {e}"));
                continue;
            }
        };
        match pair_from_json(&value, DatasetFormat::FeverJsonl) {
            Ok(pair) => {
                if sink.claim_id(&pair.id, line_no) {
                    pairs.push(pair);
                }
            }
            Err(msg) => sink.fail(line_no, msg),
        }
    }
    sink.finish(path, pairs)
}

fn pair_from_json(
    value: &serde_json::Value,
    format: DatasetFormat,
) -> std::result::Result<LabeledPair, String> {
    let obj = value.as_object().ok_or("record is not a JSON object")?;

    let id = match obj.get("id") {
        Some(serde_json::Value::String(s)) => s.clone(),
        Some(serde_json::Value::Number(n)) => n.to_string(),
        Some(_) => return Err("field \"id\" must be a string or integer".to_string()),
        None => return Err("missing field \"id\"".to_string()),
    };

    let text_field = |name: &str| -> std::result::Result<String, String> {
        match obj.get(name) {
            Some(serde_json::Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(format!("field {name:?} must be a string")),
            None => Err(format!("missing field {name:?}")),
        }
    };
    let claim = text_field("claim")?;
    let text = text_field("text")?;
    if claim.trim().is_empty() {
        return Err("claim is empty".to_string());
    }
    if text.trim().is_empty() {
        return Err("text is empty".to_string());
    }

    let label = match obj.get("label") {
        Some(serde_json::Value::String(s)) => parse_pair_label(s, format)?,
        Some(serde_json::Value::Number(n)) => {
            let code = n
                .as_u64()
                .and_then(|c| u8::try_from(c).ok())
                .ok_or_else(|| format!("label code {n} out of range"))?;
            parse_pair_label(&code.to_string(), format)?
        }
        Some(_) => return Err("field \"label\" must be a string or integer".to_string()),
        None => return Err("missing field \"label\"".to_string()),
    };

    let opt_str = |name: &str| -> std::result::Result<Option<String>, String> {
        match obj.get(name) {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(serde_json::Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(format!("field {name:?} must be a string")),
        }
    };
    let claim_lang = validate_lang(opt_str("claim_lang")?.as_deref())?;
    let text_lang = validate_lang(opt_str("text_lang")?.as_deref())?;
    let source = opt_str("source")?.unwrap_or_default();

    Ok(LabeledPair {
        id,
        claim,
        text,
        label,
        claim_lang,
        text_lang,
        source,
    })
}

/// Case-insensitive header lookup for the CSV loaders.
struct HeaderMap {
    index: HashMap<String, usize>,
}

impl HeaderMap {
    fn new(headers: &csv::StringRecord, required: &[&str], path: &Path) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, name) in headers.iter().enumerate() {
            index.insert(name.trim().to_lowercase(), i);
        }
        for name in required {
            if !index.contains_key(*name) {
                return Err(Error::InvalidInput(format!(
                    "{}: missing required column {name:?}",
                    path.display()
                )));
            }
        }
        Ok(HeaderMap { index })
    }

    fn get<'r>(&self, record: &'r csv::StringRecord, name: &str) -> Option<&'r str> {
        self.index.get(name).and_then(|&i| record.get(i))
    }

    fn get_nonblank<'r>(&self, record: &'r csv::StringRecord, name: &str) -> Option<&'r str> {
        self.get(record, name).filter(|s| !s.trim().is_empty())
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(Error::Csv)
}

fn record_line(record: &csv::StringRecord, fallback: usize) -> usize {
    record
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback)
}

fn load_pairs_csv(path: &Path) -> Result<Vec<LabeledPair>> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers()?.clone();
    let map = HeaderMap::new(&headers, &["id", "claim", "text", "label"], path)?;

    let mut sink = RecordSink::new();
    let mut pairs = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let fallback_line = idx + 2;
        let record = match row {
            Ok(r) => r,
            Err(e) => {
                sink.fail(fallback_line, format!("malformed CSV row: {e}"));
                continue;
            }
        };
        let line = record_line(&record, fallback_line);
        match pair_from_record(&map, &record) {
            Ok(pair) => {
                if sink.claim_id(&pair.id, line) {
                    pairs.push(pair);
                }
            }
            Err(msg) => sink.fail(line, msg),
        }
    }
    sink.finish(path, pairs)
}

fn pair_from_record(
    map: &HeaderMap,
    record: &csv::StringRecord,
) -> std::result::Result<LabeledPair, String> {
    let id = map
        .get_nonblank(record, "id")
        .ok_or("missing id")?
        .to_string();
    let claim = map.get(record, "claim").unwrap_or_default().to_string();
    let text = map.get(record, "text").unwrap_or_default().to_string();
    if claim.trim().is_empty() {
        return Err("claim is empty".to_string());
    }
    if text.trim().is_empty() {
        return Err("text is empty".to_string());
    }
    let label_raw = map.get_nonblank(record, "label").ok_or("missing label")?;
    let label = parse_pair_label(label_raw, DatasetFormat::PairsCsv)?;
    let claim_lang = validate_lang(map.get(record, "claim_lang"))?;
    let text_lang = validate_lang(map.get(record, "text_lang"))?;
    let source = map
        .get_nonblank(record, "source")
        .unwrap_or_default()
        .to_string();
    Ok(LabeledPair {
        id,
        claim,
        text,
        label,
        claim_lang,
        text_lang,
        source,
    })
}

/// Load verdicts from a `verdicts-csv` file. Dates are ISO-8601 days.
pub fn load_verdicts(path: &Path) -> Result<Vec<Verdict>> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers()?.clone();
    let map = HeaderMap::new(&headers, &["id", "date", "verdict_text", "category"], path)?;

    let mut sink = RecordSink::new();
    let mut verdicts = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let fallback_line = idx + 2;
        let record = match row {
            Ok(r) => r,
            Err(e) => {
                sink.fail(fallback_line, format!("malformed CSV row: {e}"));
                continue;
            }
        };
        let line = record_line(&record, fallback_line);
        match verdict_from_record(&map, &record) {
            Ok(v) => {
                if sink.claim_id(&v.id, line) {
                    verdicts.push(v);
                }
            }
            Err(msg) => sink.fail(line, msg),
        }
    }
    sink.finish(path, verdicts)
}

fn verdict_from_record(
    map: &HeaderMap,
    record: &csv::StringRecord,
) -> std::result::Result<Verdict, String> {
    let id = map
        .get_nonblank(record, "id")
        .ok_or("missing id")?
        .to_string();
    let date_raw = map.get_nonblank(record, "date").ok_or("missing date")?;
    let date = NaiveDate::parse_from_str(date_raw.trim(), "%Y-%m-%d")
        .map_err(|e| format!("date {date_raw:?} is not ISO-8601 (YYYY-MM-DD): {e}"))?;
    let verdict_text = map
        .get(record, "verdict_text")
        .unwrap_or_default()
        .to_string();
    if verdict_text.trim().is_empty() {
        return Err("verdict_text is empty".to_string());
    }
    let category_raw = map
        .get_nonblank(record, "category")
        .ok_or("missing category")?;
    let category = PagellaLabel::parse_name(category_raw)
        .ok_or_else(|| format!("unknown category {category_raw:?}"))?;
    let party = map
        .get_nonblank(record, "party")
        .map(|s| s.trim().to_string());
    let source = map
        .get_nonblank(record, "source")
        .map(|s| s.trim().to_string());
    Ok(Verdict {
        id,
        date,
        verdict_text,
        category,
        party,
        source,
    })
}

/// Load treatment annotations from CSV
/// {id, statement, content, orientation, subject, argumentation}.
pub fn load_treatment_records(path: &Path) -> Result<Vec<TreatmentRecord>> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers()?.clone();
    let map = HeaderMap::new(
        &headers,
        &[
            "id",
            "statement",
            "content",
            "orientation",
            "subject",
            "argumentation",
        ],
        path,
    )?;

    let mut sink = RecordSink::new();
    let mut records = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let fallback_line = idx + 2;
        let record = match row {
            Ok(r) => r,
            Err(e) => {
                sink.fail(fallback_line, format!("malformed CSV row: {e}"));
                continue;
            }
        };
        let line = record_line(&record, fallback_line);
        match treatment_from_record(&map, &record) {
            Ok(r) => {
                if sink.claim_id(&r.id, line) {
                    records.push(r);
                }
            }
            Err(msg) => sink.fail(line, msg),
        }
    }
    sink.finish(path, records)
}

fn treatment_from_record(
    map: &HeaderMap,
    record: &csv::StringRecord,
) -> std::result::Result<TreatmentRecord, String> {
    let id = map
        .get_nonblank(record, "id")
        .ok_or("missing id")?
        .to_string();
    let statement = map.get(record, "statement").unwrap_or_default().to_string();
    let content = map.get(record, "content").unwrap_or_default().to_string();
    if statement.trim().is_empty() {
        return Err("statement is empty".to_string());
    }
    if content.trim().is_empty() {
        return Err("content is empty".to_string());
    }
    let stratum = |name: &str| map.get_nonblank(record, name).ok_or(format!("missing {name}"));
    let orientation = Orientation::parse_name(stratum("orientation")?)
        .ok_or_else(|| "unknown orientation value".to_string())?;
    let subject = Subject::parse_name(stratum("subject")?)
        .ok_or_else(|| "unknown subject value".to_string())?;
    let argumentation = Argumentation::parse_name(stratum("argumentation")?)
        .ok_or_else(|| "unknown argumentation value".to_string())?;
    Ok(TreatmentRecord {
        id,
        statement,
        content,
        label: TreatmentLabel {
            orientation,
            subject,
            argumentation,
        },
    })
}

#[derive(serde::Serialize)]
struct PairRow<'a> {
    id: &'a str,
    claim: &'a str,
    text: &'a str,
    label: &'a str,
    claim_lang: &'a str,
    text_lang: &'a str,
    source: &'a str,
}

fn pair_row<'a>(p: &'a LabeledPair) -> PairRow<'a> {
    PairRow {
        id: &p.id,
        claim: &p.claim,
        text: &p.text,
        label: p.label.as_str(),
        claim_lang: &p.claim_lang,
        text_lang: &p.text_lang,
        source: &p.source,
    }
}

/// Serialize pairs to canonical JSON-lines. Labels are written by name,
/// so files round-trip through [`load_pairs`] unchanged.
pub fn write_pairs_jsonl(path: &Path, pairs: &[LabeledPair]) -> Result<()> {
    use std::io::Write;
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    for pair in pairs {
        serde_json::to_writer(&mut out, &pair_row(pair))?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Serialize pairs to the CSV variant.
pub fn write_pairs_csv(path: &Path, pairs: &[LabeledPair]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for pair in pairs {
        writer.serialize(pair_row(pair))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Serialize verdicts to `verdicts-csv`.
pub fn write_verdicts_csv(path: &Path, verdicts: &[Verdict]) -> Result<()> {
    #[derive(serde::Serialize)]
    struct VerdictRow<'a> {
        id: &'a str,
        date: String,
        verdict_text: &'a str,
        category: &'a str,
        party: &'a str,
        source: &'a str,
    }
    let mut writer = csv::Writer::from_path(path)?;
    for v in verdicts {
        writer.serialize(VerdictRow {
            id: &v.id,
            date: v.date.format("%Y-%m-%d").to_string(),
            verdict_text: &v.verdict_text,
            category: v.category.as_str(),
            party: v.party.as_deref().unwrap_or(""),
            source: v.source.as_deref().unwrap_or(""),
        })?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
