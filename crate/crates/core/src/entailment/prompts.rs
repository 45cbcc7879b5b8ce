//! Versioned prompt templates with `<placeholder>` substitution.

use crate::error::{Error, Result};

/// Identifies one immutable template wording. New wordings get new ids so
/// cached responses stay comparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateId {
    EntailV1,
    EntailV2,
    VerdictCat,
    TreatmentV1,
}

impl TemplateId {
    pub const ALL: [TemplateId; 4] = [
        TemplateId::EntailV1,
        TemplateId::EntailV2,
        TemplateId::VerdictCat,
        TemplateId::TreatmentV1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::EntailV1 => "entail_v1",
            TemplateId::EntailV2 => "entail_v2",
            TemplateId::VerdictCat => "verdict_cat",
            TemplateId::TreatmentV1 => "treatment_v1",
        }
    }

    /// BCP-47-ish tag of the language the prompt is written in.
    pub fn language(self) -> &'static str {
        match self {
            TemplateId::EntailV1 | TemplateId::EntailV2 => "it",
            TemplateId::VerdictCat | TemplateId::TreatmentV1 => "en",
        }
    }

    pub fn placeholders(self) -> &'static [&'static str] {
        match self {
            TemplateId::EntailV1 | TemplateId::EntailV2 => &["frase", "testo"],
            TemplateId::VerdictCat => &["verdict"],
            TemplateId::TreatmentV1 => &["statement", "content"],
        }
    }
}

impl std::str::FromStr for TemplateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TemplateId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown template id {s:?}")))
    }
}

const ENTAIL_V1_BODY: &str = "FRASE: <frase>\nTESTO: <testo>\nData la seguente coppia FRASE e TESTO, dimmi se il TESTO supporta la FRASE, la confuta o non c'è abbastanza informazione per dirlo rispondendo con 0 (supporta), 1 (confuta), 2 (not enough info). Esempio di output: 0 (supporta) il testo supporta la frase perché... Esempio di output: 1 (confuta) il testo confuta la frase perché... Esempio di output: 2 (not enough info) il testo...";

const ENTAIL_V2_BODY: &str = "FRASE: <frase>\nTESTO: <testo>\nData la seguente coppia FRASE e TESTO, dimmi se il TESTO supporta la FRASE, la confuta o non c'è abbastanza informazione per dirlo rispondendo con 0 (supporta), 1 (confuta), 2 (not enough info).";

const VERDICT_CAT_BODY: &str = "This is a verdict regarding the debunking of a politician's claim: <verdict>. Based on the text of the verdict, categorize it by returning one of the following labels: true, false, partially true, inaccurate, exaggeration";

const TREATMENT_V1_BODY: &str = "STATEMENT: <statement>\nCONTENT: <content>\nClassify how the CONTENT treats the STATEMENT. Answer with exactly three lines in this format:\norientation: Reinforcing, Confuting or Neutral\nsubject: Direct, Indirect or Fiction\nargumentation: Explained or Shallow";

/// Raw template body, placeholders included.
pub fn template_body(id: TemplateId) -> &'static str {
    match id {
        TemplateId::EntailV1 => ENTAIL_V1_BODY,
        TemplateId::EntailV2 => ENTAIL_V2_BODY,
        TemplateId::VerdictCat => VERDICT_CAT_BODY,
        TemplateId::TreatmentV1 => TREATMENT_V1_BODY,
    }
}

/// Substitutes every `<name>` placeholder. Bound values are inserted
/// verbatim — no trimming or escaping — and every placeholder of the
/// template must be bound.
pub fn build_prompt(id: TemplateId, bindings: &[(&str, &str)]) -> Result<String> {
    let mut prompt = template_body(id).to_string();
    for &name in id.placeholders() {
        let Some(&(_, value)) = bindings.iter().find(|(n, _)| *n == name) else {
            return Err(Error::MissingBinding(name.to_string()));
        };
        prompt = prompt.replace(&format!("<{name}>"), value);
    }
    Ok(prompt)
}

pub fn entailment_prompt(id: TemplateId, frase: &str, testo: &str) -> Result<String> {
    build_prompt(id, &[("frase", frase), ("testo", testo)])
}

pub fn verdict_prompt(verdict: &str) -> Result<String> {
    build_prompt(TemplateId::VerdictCat, &[("verdict", verdict)])
}

pub fn treatment_prompt(statement: &str, content: &str) -> Result<String> {
    build_prompt(
        TemplateId::TreatmentV1,
        &[("statement", statement), ("content", content)],
    )
}
