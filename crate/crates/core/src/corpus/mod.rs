//! Dataset ingestion and splitting.
//!
//! Covers the dataset shapes used throughout the pipeline: entailment
//! pairs (FEVER-style), binary statement–document similarity pairs,
//! fact-check verdicts with categories and timestamps, and content
//! treatment annotations. Includes multilingual expansion, seeded k-fold
//! splits, and chronological prefix splits for learning curves.

mod expand;
mod folds;
mod load;

pub use expand::expand_multilingual;
pub use folds::{chronological_prefix_splits, make_folds, make_folds_grouped, ChronoSplits};
pub use load::{
    load_dataset, load_pairs, load_treatment_records, load_verdicts, write_pairs_csv,
    write_pairs_jsonl, write_verdicts_csv, Dataset, DatasetFormat,
};

use chrono::NaiveDate;

/// Three-way entailment label. Numeric codes match the prompt protocol
/// (0 supports, 1 refutes, 2 not enough info).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum EntailLabel {
    Supported,
    Refuted,
    NotEnoughInfo,
}

impl EntailLabel {
    pub const ALL: [EntailLabel; 3] = [
        EntailLabel::Supported,
        EntailLabel::Refuted,
        EntailLabel::NotEnoughInfo,
    ];

    pub fn code(self) -> u8 {
        match self {
            EntailLabel::Supported => 0,
            EntailLabel::Refuted => 1,
            EntailLabel::NotEnoughInfo => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(EntailLabel::Supported),
            1 => Some(EntailLabel::Refuted),
            2 => Some(EntailLabel::NotEnoughInfo),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EntailLabel::Supported => "Supported",
            EntailLabel::Refuted => "Refuted",
            EntailLabel::NotEnoughInfo => "NotEnoughInfo",
        }
    }

    /// Parse a named label. Accepts the canonical names, FEVER-style
    /// verb forms, and "not enough info"/"nei", case-insensitively.
    pub fn parse_name(s: &str) -> Option<Self> {
        let t = s.trim().to_lowercase();
        match t.as_str() {
            "supported" | "supports" => Some(EntailLabel::Supported),
            "refuted" | "refutes" => Some(EntailLabel::Refuted),
            "notenoughinfo" | "not enough info" | "not_enough_info" | "nei" => {
                Some(EntailLabel::NotEnoughInfo)
            }
            _ => None,
        }
    }
}

impl std::fmt::Display for EntailLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Binary statement–document similarity label: Mention (1) when the text
/// contains sentences related to the statement, Off-topic (0) otherwise.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum SimLabel {
    #[serde(rename = "Off-topic")]
    OffTopic,
    Mention,
}

impl SimLabel {
    pub fn code(self) -> u8 {
        match self {
            SimLabel::Mention => 1,
            SimLabel::OffTopic => 0,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(SimLabel::Mention),
            0 => Some(SimLabel::OffTopic),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SimLabel::Mention => "Mention",
            SimLabel::OffTopic => "Off-topic",
        }
    }

    pub fn parse_name(s: &str) -> Option<Self> {
        let t = s.trim().to_lowercase();
        match t.as_str() {
            "mention" | "m" => Some(SimLabel::Mention),
            "off-topic" | "offtopic" | "off topic" | "o" => Some(SimLabel::OffTopic),
            _ => None,
        }
    }
}

impl std::fmt::Display for SimLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Label of a [`LabeledPair`]: exactly one of the two taxonomies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairLabel {
    Entail(EntailLabel),
    Sim(SimLabel),
}

impl PairLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PairLabel::Entail(l) => l.as_str(),
            PairLabel::Sim(l) => l.as_str(),
        }
    }

    /// Numeric code within the label's own taxonomy.
    pub fn code(self) -> u8 {
        match self {
            PairLabel::Entail(l) => l.code(),
            PairLabel::Sim(l) => l.code(),
        }
    }

    /// Parse a named label from either taxonomy.
    pub fn parse_name(s: &str) -> Option<Self> {
        EntailLabel::parse_name(s)
            .map(PairLabel::Entail)
            .or_else(|| SimLabel::parse_name(s).map(PairLabel::Sim))
    }
}

impl std::fmt::Display for PairLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A claim/statement paired with a text plus its label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPair {
    pub id: String,
    pub claim: String,
    pub text: String,
    pub label: PairLabel,
    pub claim_lang: String,
    pub text_lang: String,
    pub source: String,
}

/// The closed 15-label verdict category set of the PagellaPolitica2 data.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum PagellaLabel {
    Vero,
    Falso,
    RagioneAMeta,
    Imprecisione,
    Esagerazione,
    Confusione,
    Plausibile,
    SostanzialmenteRagione,
    Infondatezza,
    MessaggioFuorviante,
    Omissione,
    Approssimazione,
    LetturaFuorviante,
    PresuppostoSbagliato,
    Travisamento,
}

impl PagellaLabel {
    pub const ALL: [PagellaLabel; 15] = [
        PagellaLabel::Vero,
        PagellaLabel::Falso,
        PagellaLabel::RagioneAMeta,
        PagellaLabel::Imprecisione,
        PagellaLabel::Esagerazione,
        PagellaLabel::Confusione,
        PagellaLabel::Plausibile,
        PagellaLabel::SostanzialmenteRagione,
        PagellaLabel::Infondatezza,
        PagellaLabel::MessaggioFuorviante,
        PagellaLabel::Omissione,
        PagellaLabel::Approssimazione,
        PagellaLabel::LetturaFuorviante,
        PagellaLabel::PresuppostoSbagliato,
        PagellaLabel::Travisamento,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PagellaLabel::Vero => "VERO",
            PagellaLabel::Falso => "FALSO",
            PagellaLabel::RagioneAMeta => "RAGIONE A METÀ",
            PagellaLabel::Imprecisione => "IMPRECISIONE",
            PagellaLabel::Esagerazione => "ESAGERAZIONE",
            PagellaLabel::Confusione => "CONFUSIONE",
            PagellaLabel::Plausibile => "PLAUSIBILE",
            PagellaLabel::SostanzialmenteRagione => "SOSTANZIALMENTE RAGIONE",
            PagellaLabel::Infondatezza => "INFONDATEZZA",
            PagellaLabel::MessaggioFuorviante => "MESSAGGIO FUORVIANTE",
            PagellaLabel::Omissione => "OMISSIONE",
            PagellaLabel::Approssimazione => "APPROSSIMAZIONE",
            PagellaLabel::LetturaFuorviante => "LETTURA FUORVIANTE",
            PagellaLabel::PresuppostoSbagliato => "PRESUPPOSTO SBAGLIATO",
            PagellaLabel::Travisamento => "TRAVISAMENTO",
        }
    }

    /// Case-insensitive parse; tolerates a missing accent on METÀ.
    pub fn parse_name(s: &str) -> Option<Self> {
        let t = s.trim().to_uppercase();
        Self::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == t || l.as_str().replace('À', "A") == t)
    }
}

impl std::fmt::Display for PagellaLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fact-check verdict with its category and a date for chronological
/// ordering. Party and source are carried through but never validated.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub id: String,
    pub date: NaiveDate,
    pub verdict_text: String,
    pub category: PagellaLabel,
    pub party: Option<String>,
    pub source: Option<String>,
}

/// One train/test split of a pair dataset. `fold_index` is 1-based.
#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub train: Vec<LabeledPair>,
    pub test: Vec<LabeledPair>,
    pub fold_index: usize,
}

/// Orientation stratum of a content-treatment annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Orientation {
    Reinforcing,
    Confuting,
    Neutral,
}

impl Orientation {
    pub const STRATUM: &'static str = "orientation";
    pub const ALL: [Orientation; 3] = [
        Orientation::Reinforcing,
        Orientation::Confuting,
        Orientation::Neutral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Reinforcing => "Reinforcing",
            Orientation::Confuting => "Confuting",
            Orientation::Neutral => "Neutral",
        }
    }

    pub fn parse_name(s: &str) -> Option<Self> {
        let t = s.trim().to_lowercase();
        Self::ALL
            .iter()
            .copied()
            .find(|v| v.as_str().to_lowercase() == t)
    }

    pub fn code(self) -> u8 {
        match self {
            Orientation::Reinforcing => 0,
            Orientation::Confuting => 1,
            Orientation::Neutral => 2,
        }
    }
}

/// Subject stratum: who voices the content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Subject {
    Direct,
    Indirect,
    Fiction,
}

impl Subject {
    pub const STRATUM: &'static str = "subject";
    pub const ALL: [Subject; 3] = [Subject::Direct, Subject::Indirect, Subject::Fiction];

    pub fn as_str(self) -> &'static str {
        match self {
            Subject::Direct => "Direct",
            Subject::Indirect => "Indirect",
            Subject::Fiction => "Fiction",
        }
    }

    pub fn parse_name(s: &str) -> Option<Self> {
        let t = s.trim().to_lowercase();
        Self::ALL
            .iter()
            .copied()
            .find(|v| v.as_str().to_lowercase() == t)
    }

    pub fn code(self) -> u8 {
        match self {
            Subject::Direct => 0,
            Subject::Indirect => 1,
            Subject::Fiction => 2,
        }
    }
}

/// Argumentation stratum: depth of the given reasons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Argumentation {
    Explained,
    Shallow,
}

impl Argumentation {
    pub const STRATUM: &'static str = "argumentation";
    pub const ALL: [Argumentation; 2] = [Argumentation::Explained, Argumentation::Shallow];

    pub fn as_str(self) -> &'static str {
        match self {
            Argumentation::Explained => "Explained",
            Argumentation::Shallow => "Shallow",
        }
    }

    pub fn parse_name(s: &str) -> Option<Self> {
        let t = s.trim().to_lowercase();
        Self::ALL
            .iter()
            .copied()
            .find(|v| v.as_str().to_lowercase() == t)
    }

    pub fn code(self) -> u8 {
        match self {
            Argumentation::Explained => 0,
            Argumentation::Shallow => 1,
        }
    }
}

/// Full three-stratum content-treatment label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct TreatmentLabel {
    pub orientation: Orientation,
    pub subject: Subject,
    pub argumentation: Argumentation,
}

/// A statement/content pair with its gold treatment annotation.
#[derive(Debug, Clone, PartialEq)]
pub struct TreatmentRecord {
    pub id: String,
    pub statement: String,
    pub content: String,
    pub label: TreatmentLabel,
}
