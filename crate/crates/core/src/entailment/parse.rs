//! Parsers for model responses: entailment digits, verdict categories,
//! treatment strata.

use crate::corpus::{Argumentation, EntailLabel, Orientation, Subject, TreatmentLabel};
use crate::error::{Error, Result};

/// Entailment verdict plus the free-text rationale that followed the digit.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ParsedEntailment {
    pub label: EntailLabel,
    pub rationale: String,
}

/// Finds the first standalone digit ∈ {0,1,2} — standalone meaning not
/// adjacent to another ASCII digit, so "10" or "2020" never match — and
/// keeps everything after it as the rationale.
pub fn parse_entailment_response(raw: &str) -> Result<ParsedEntailment> {
    let bytes = raw.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(b'0'..=b'2').contains(&b) {
            continue;
        }
        let prev_is_digit = i > 0 && bytes[i - 1].is_ascii_digit();
        let next_is_digit = i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit();
        if prev_is_digit || next_is_digit {
            continue;
        }
        let label = EntailLabel::from_code(b - b'0').expect("digit is 0..=2");
        return Ok(ParsedEntailment {
            label,
            rationale: raw[i + 1..].trim_start().to_string(),
        });
    }
    Err(Error::UnparseableResponse(raw.to_string()))
}

/// The closed five-category set the verdict prompt asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictCategory {
    True,
    False,
    PartiallyTrue,
    Inaccurate,
    Exaggeration,
}

impl VerdictCategory {
    pub const ALL: [VerdictCategory; 5] = [
        VerdictCategory::True,
        VerdictCategory::False,
        VerdictCategory::PartiallyTrue,
        VerdictCategory::Inaccurate,
        VerdictCategory::Exaggeration,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VerdictCategory::True => "true",
            VerdictCategory::False => "false",
            VerdictCategory::PartiallyTrue => "partially true",
            VerdictCategory::Inaccurate => "inaccurate",
            VerdictCategory::Exaggeration => "exaggeration",
        }
    }
}

impl std::fmt::Display for VerdictCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Case-insensitive scan for the earliest category mention; when two
/// categories start at the same offset the longer one wins, so
/// "partially true" is never misread as "true".
pub fn parse_verdict_category(raw: &str) -> Result<VerdictCategory> {
    let haystack = raw.to_lowercase();
    let mut best: Option<(usize, usize, VerdictCategory)> = None; // (pos, len, cat)
    for category in VerdictCategory::ALL {
        let needle = category.as_str();
        if let Some(pos) = haystack.find(needle) {
            let better = match best {
                None => true,
                Some((best_pos, best_len, _)) => {
                    pos < best_pos || (pos == best_pos && needle.len() > best_len)
                }
            };
            if better {
                best = Some((pos, needle.len(), category));
            }
        }
    }
    best.map(|(_, _, category)| category)
        .ok_or_else(|| Error::UnparseableResponse(raw.to_string()))
}

/// Reads the three labeled lines the treatment prompt asks for. Keys are
/// case-insensitive; values must come from the closed per-stratum sets.
pub fn parse_treatment_response(raw: &str) -> Result<TreatmentLabel> {
    let find_value = |stratum: &str| -> Result<String> {
        for line in raw.lines() {
            let trimmed = line.trim();
            if let Some((key, value)) = trimmed.split_once(':') {
                if key.trim().eq_ignore_ascii_case(stratum) {
                    return Ok(value.trim().to_string());
                }
            }
        }
        Err(Error::MissingStratum(stratum.to_string()))
    };

    let unknown = |stratum: &str, value: &str| Error::UnknownStratumValue {
        stratum: stratum.to_string(),
        value: value.to_string(),
    };

    let orientation_raw = find_value(Orientation::STRATUM)?;
    let subject_raw = find_value(Subject::STRATUM)?;
    let argumentation_raw = find_value(Argumentation::STRATUM)?;

    Ok(TreatmentLabel {
        orientation: Orientation::parse_name(&orientation_raw)
            .ok_or_else(|| unknown(Orientation::STRATUM, &orientation_raw))?,
        subject: Subject::parse_name(&subject_raw)
            .ok_or_else(|| unknown(Subject::STRATUM, &subject_raw))?,
        argumentation: Argumentation::parse_name(&argumentation_raw)
            .ok_or_else(|| unknown(Argumentation::STRATUM, &argumentation_raw))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_example_outputs_parse_to_all_three_labels() {
        let cases = [
            (
                "0 (supporta) il testo supporta la frase perché...",
                EntailLabel::Supported,
            ),
            (
                "1 (confuta) il testo confuta la frase perché...",
                EntailLabel::Refuted,
            ),
            ("2 (not enough info) il testo...", EntailLabel::NotEnoughInfo),
        ];
        for (raw, expected) in cases {
            let parsed = parse_entailment_response(raw).unwrap();
            assert_eq!(parsed.label, expected, "{raw}");
            assert!(parsed.rationale.starts_with('('));
        }
    }

    #[test]
    fn numbers_inside_the_rationale_do_not_confuse_the_scan() {
        let raw = "2 (not enough info) The text provides a percentage of 10.8% of workers \
                   living below the relative poverty threshold in Italy in 2020 but does not \
                   provide specific information to confirm or refute the statement, which \
                   indicates a rate of 12-13%.";
        let parsed = parse_entailment_response(raw).unwrap();
        assert_eq!(parsed.label, EntailLabel::NotEnoughInfo);
        assert!(parsed.rationale.starts_with("(not enough info)"));
    }

    #[test]
    fn digit_adjacent_digits_are_not_standalone() {
        assert!(matches!(
            parse_entailment_response("the answer is 10"),
            Err(Error::UnparseableResponse(raw)) if raw == "the answer is 10"
        ));
        // 35 is skipped entirely; the later lone 1 counts.
        let parsed = parse_entailment_response("su 35 casi direi 1").unwrap();
        assert_eq!(parsed.label, EntailLabel::Refuted);
    }

    #[test]
    fn letters_next_to_a_digit_still_count() {
        let parsed = parse_entailment_response("risposta:0(supporta)").unwrap();
        assert_eq!(parsed.label, EntailLabel::Supported);
        assert_eq!(parsed.rationale, "(supporta)");
    }

    #[test]
    fn empty_or_digitless_text_is_unparseable() {
        assert!(parse_entailment_response("").is_err());
        assert!(parse_entailment_response("non saprei dire").is_err());
    }

    #[test]
    fn verdict_categories_parse_by_longest_earliest_match() {
        assert_eq!(
            parse_verdict_category("Partially true, because the data is old").unwrap(),
            VerdictCategory::PartiallyTrue
        );
        assert_eq!(parse_verdict_category("TRUE").unwrap(), VerdictCategory::True);
        assert_eq!(
            parse_verdict_category("the claim is an exaggeration").unwrap(),
            VerdictCategory::Exaggeration
        );
        assert_eq!(
            parse_verdict_category("false, though partially true in part").unwrap(),
            VerdictCategory::False
        );
        assert!(parse_verdict_category("no category here").is_err());
    }

    #[test]
    fn treatment_lines_parse_in_any_case_and_order() {
        let label = parse_treatment_response(
            "argumentation: Shallow\nORIENTATION: neutral\nSubject: fiction",
        )
        .unwrap();
        assert_eq!(label.orientation, Orientation::Neutral);
        assert_eq!(label.subject, Subject::Fiction);
        assert_eq!(label.argumentation, Argumentation::Shallow);
    }

    #[test]
    fn treatment_example_line_triplet() {
        let label = parse_treatment_response(
            "orientation: Neutral\nsubject: Direct\nargumentation: Shallow",
        )
        .unwrap();
        assert_eq!(
            label,
            TreatmentLabel {
                orientation: Orientation::Neutral,
                subject: Subject::Direct,
                argumentation: Argumentation::Shallow,
            }
        );
    }

    #[test]
    fn missing_stratum_is_named_in_the_error() {
        let err = parse_treatment_response("orientation: Neutral\nsubject: Direct").unwrap_err();
        assert!(matches!(err, Error::MissingStratum(s) if s == "argumentation"));
    }

    #[test]
    fn unknown_stratum_value_is_reported() {
        let err = parse_treatment_response(
            "orientation: sideways\nsubject: Direct\nargumentation: Shallow",
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::UnknownStratumValue { stratum, value }
                if stratum == "orientation" && value == "sideways"
        ));
    }
}
