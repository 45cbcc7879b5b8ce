//! Ingestion of prediction files produced by externally fine-tuned models.

use std::path::Path;

use crate::corpus::{EntailLabel, PairLabel};
use crate::error::{Error, Result};

/// Reads a CSV of (id, label) rows and checks it is row-aligned with a
/// split of `expected_count` samples. Labels may be written by name
/// (either taxonomy) or as bare entailment digits 0/1/2.
pub fn ingest_predictions(path: &Path, expected_count: usize) -> Result<Vec<(String, PairLabel)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)?;

    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::InvalidInput(format!("{}: missing column {name:?}", path.display())))
    };
    let id_col = find("id")?;
    let label_col = find("label")?;

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let id = record.get(id_col).unwrap_or("").trim().to_string();
        let token = record.get(label_col).unwrap_or("").trim();
        let label = parse_prediction_label(token)?;
        rows.push((id, label));
    }

    if rows.len() != expected_count {
        return Err(Error::CountMismatch {
            expected: expected_count,
            actual: rows.len(),
        });
    }
    Ok(rows)
}

fn parse_prediction_label(token: &str) -> Result<PairLabel> {
    if let Some(label) = PairLabel::parse_name(token) {
        return Ok(label);
    }
    if let Ok(code) = token.parse::<u8>() {
        if let Some(label) = EntailLabel::from_code(code) {
            return Ok(PairLabel::Entail(label));
        }
    }
    Err(Error::UnknownLabel(token.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SimLabel;

    fn write_csv(lines: &[&str]) -> tempfile::NamedTempFile {
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(file.path(), lines.join("\n")).unwrap();
        file
    }

    #[test]
    fn accepts_named_and_digit_labels_when_counts_match() {
        let file = write_csv(&[
            "id,label",
            "a,supports",
            "b,2",
            "c,REFUTES",
            "d,Mention",
        ]);
        let rows = ingest_predictions(file.path(), 4).unwrap();
        assert_eq!(rows[0], ("a".into(), PairLabel::Entail(EntailLabel::Supported)));
        assert_eq!(rows[1].1, PairLabel::Entail(EntailLabel::NotEnoughInfo));
        assert_eq!(rows[2].1, PairLabel::Entail(EntailLabel::Refuted));
        assert_eq!(rows[3].1, PairLabel::Sim(SimLabel::Mention));
    }

    #[test]
    fn count_mismatch_is_rejected() {
        let file = write_csv(&["id,label", "a,0", "b,1"]);
        assert!(matches!(
            ingest_predictions(file.path(), 99),
            Err(Error::CountMismatch { expected: 99, actual: 2 })
        ));
    }

    #[test]
    fn ninety_nine_row_file_for_a_99_sample_split_is_accepted() {
        let mut lines = vec!["id,label".to_string()];
        lines.extend((0..99).map(|i| format!("s{i},{}", i % 3)));
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(file.path(), lines.join("\n")).unwrap();
        let rows = ingest_predictions(file.path(), 99).unwrap();
        assert_eq!(rows.len(), 99);
    }

    #[test]
    fn unknown_label_token_is_rejected() {
        let file = write_csv(&["id,label", "a,maybe"]);
        assert!(matches!(
            ingest_predictions(file.path(), 1),
            Err(Error::UnknownLabel(token)) if token == "maybe"
        ));
    }

    #[test]
    fn digit_three_is_not_a_valid_code() {
        let file = write_csv(&["id,label", "a,3"]);
        assert!(ingest_predictions(file.path(), 1).is_err());
    }

    #[test]
    fn missing_label_column_is_reported() {
        let file = write_csv(&["id,prediction", "a,0"]);
        assert!(ingest_predictions(file.path(), 1).is_err());
    }
}
