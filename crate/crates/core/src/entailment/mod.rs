//! Prompted entailment, verdict categorization, treatment detection and
//! clarity checks against chat-completion providers.
//!
//! Prompt templates are versioned and instantiated byte for byte; responses
//! are cached on disk keyed by (model, prompt) so reruns are free and
//! deterministic. Parsers are pure and tolerant of surrounding rationale
//! text.

mod cache;
mod parse;
mod predictions;
mod prompts;
mod provider;

pub use cache::{CacheMeta, ResponseCache};
pub use parse::{
    parse_entailment_response, parse_treatment_response, parse_verdict_category,
    ParsedEntailment, VerdictCategory,
};
pub use predictions::ingest_predictions;
pub use prompts::{
    build_prompt, entailment_prompt, template_body, treatment_prompt, verdict_prompt, TemplateId,
};
pub use provider::{clarity_check, query_many, query_provider, ClarityCheck, ProviderConfig};
