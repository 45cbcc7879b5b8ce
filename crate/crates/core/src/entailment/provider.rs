//! Chat-completion provider access: cached, retried, optionally concurrent.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use crate::corpus::EntailLabel;
use crate::entailment::cache::ResponseCache;
use crate::entailment::parse::parse_entailment_response;
use crate::entailment::prompts::{entailment_prompt, TemplateId};
use crate::error::{Error, Result};

/// Connection settings for one chat-completion endpoint.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProviderConfig {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the bearer token, if any.
    pub auth_env: Option<String>,
    pub temperature: f64,
    /// Extra attempts after the first, each preceded by exponential backoff.
    pub max_retries: u32,
    pub timeout_secs: u64,
    pub max_concurrency: usize,
    /// Base backoff; attempt i sleeps base · 2^i.
    pub backoff_ms: u64,
}

impl ProviderConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            model: model.into(),
            auth_env: None,
            temperature: 0.0,
            max_retries: 2,
            timeout_secs: 30,
            max_concurrency: 4,
            backoff_ms: 500,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_concurrency == 0 {
            return Err(Error::InvalidInput("max_concurrency must be >= 1".into()));
        }
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return Err(Error::InvalidInput(format!(
                "temperature {} must be finite and >= 0",
                self.temperature
            )));
        }
        Ok(())
    }

    fn bearer_token(&self) -> Result<Option<String>> {
        match &self.auth_env {
            None => Ok(None),
            Some(var) => match std::env::var(var) {
                Ok(token) => Ok(Some(token)),
                Err(_) => Err(Error::Provider {
                    provider: self.model.clone(),
                    message: format!("auth environment variable {var} is not set"),
                }),
            },
        }
    }
}

/// Returns the assistant text for `prompt`, from cache when present. A miss
/// performs the HTTP call with retries and stores the extracted text
/// verbatim, so identical reruns never touch the network.
pub fn query_provider(
    config: &ProviderConfig,
    prompt: &str,
    cache: &ResponseCache,
) -> Result<String> {
    config.validate()?;
    if let Some(hit) = cache.get(&config.model, prompt)? {
        return Ok(hit);
    }

    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(config.timeout_secs))
        .build()
        .map_err(|e| Error::Provider {
            provider: config.model.clone(),
            message: format!("client construction failed: {e}"),
        })?;
    let token = config.bearer_token()?;
    let payload = serde_json::json!({
        "model": config.model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": config.temperature,
    });

    let attempts = config.max_retries + 1;
    let mut last_failure = String::new();
    for attempt in 0..attempts {
        if attempt > 0 {
            let backoff = config.backoff_ms.saturating_mul(1 << (attempt - 1));
            std::thread::sleep(Duration::from_millis(backoff));
        }
        let mut request = client.post(&config.endpoint).json(&payload);
        if let Some(token) = &token {
            request = request.bearer_auth(token);
        }
        let response = match request.send() {
            Ok(r) => r,
            Err(e) => {
                last_failure = e.to_string();
                continue;
            }
        };
        let status = response.status();
        if status.is_server_error() {
            last_failure = format!("status {status}");
            continue;
        }
        if !status.is_success() {
            // Client errors will not heal on retry.
            return Err(Error::Provider {
                provider: config.model.clone(),
                message: format!("status {status}"),
            });
        }
        let text = extract_assistant_text(config, response)?;
        cache.put(&config.model, prompt, &text)?;
        return Ok(text);
    }
    Err(Error::Transport {
        attempts,
        message: last_failure,
    })
}

fn extract_assistant_text(
    config: &ProviderConfig,
    response: reqwest::blocking::Response,
) -> Result<String> {
    let provider_err = |message: String| Error::Provider {
        provider: config.model.clone(),
        message,
    };
    let value: serde_json::Value = response
        .json()
        .map_err(|e| provider_err(format!("invalid JSON payload: {e}")))?;
    value["choices"][0]["message"]["content"]
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| provider_err("payload lacks choices[0].message.content".into()))
}

/// Queries every prompt, at most `max_concurrency` in flight, preserving
/// input order in the result.
pub fn query_many(
    config: &ProviderConfig,
    prompts: &[String],
    cache: &ResponseCache,
) -> Result<Vec<String>> {
    config.validate()?;
    let results: Vec<Mutex<Option<Result<String>>>> =
        prompts.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = config.max_concurrency.min(prompts.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= prompts.len() {
                    break;
                }
                let outcome = query_provider(config, &prompts[i], cache);
                *results[i].lock().unwrap() = Some(outcome);
            });
        }
    });

    results
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every slot visited"))
        .collect()
}

/// Outcome of running the entailment prompt over a verdict explanation.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ClarityCheck {
    pub label: EntailLabel,
    pub rationale: String,
    /// Set when the model could not confirm or refute the statement from
    /// the explanation alone — the explanation likely needs rewording.
    pub insufficient_explanation: bool,
}

/// Asks whether `explanation` supports `statement` (entail_v1) and flags
/// explanations that yield "not enough info".
pub fn clarity_check(
    statement: &str,
    explanation: &str,
    config: &ProviderConfig,
    cache: &ResponseCache,
) -> Result<ClarityCheck> {
    let prompt = entailment_prompt(TemplateId::EntailV1, statement, explanation)?;
    let raw = query_provider(config, &prompt, cache)?;
    let parsed = parse_entailment_response(&raw)?;
    Ok(ClarityCheck {
        insufficient_explanation: parsed.label == EntailLabel::NotEnoughInfo,
        label: parsed.label,
        rationale: parsed.rationale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::StubServer;
    use std::collections::HashSet;
    use std::sync::atomic::AtomicU32;
    use std::sync::Arc;

    fn chat_reply(content: &str) -> String {
        serde_json::json!({
            "choices": [{"message": {"role": "assistant", "content": content}}]
        })
        .to_string()
    }

    fn test_config(url: &str) -> ProviderConfig {
        let mut config = ProviderConfig::new(url, "stub-model");
        config.backoff_ms = 1;
        config.timeout_secs = 5;
        config
    }

    #[test]
    fn second_identical_call_is_served_from_cache() {
        let server = StubServer::spawn(|body| {
            let value: serde_json::Value = serde_json::from_str(body).unwrap();
            assert_eq!(value["temperature"], 0.0);
            assert_eq!(value["messages"][0]["content"], "ciao");
            (200, chat_reply("0 (supporta) ok"))
        });
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let config = test_config(server.url());

        let first = query_provider(&config, "ciao", &cache).unwrap();
        let second = query_provider(&config, "ciao", &cache).unwrap();
        assert_eq!(first, "0 (supporta) ok");
        assert_eq!(first, second);
        assert_eq!(server.hits(), 1);

        // Cache round-trip invariant: parsing the cached copy gives the
        // same verdict as parsing the network capture.
        assert_eq!(
            parse_entailment_response(&first).unwrap(),
            parse_entailment_response(&second).unwrap()
        );
    }

    #[test]
    fn server_errors_exhaust_retries_into_transport_error() {
        let server = StubServer::spawn(|_| (500, "{}".to_string()));
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let config = test_config(server.url());

        match query_provider(&config, "x", &cache) {
            Err(Error::Transport { attempts, message }) => {
                assert_eq!(attempts, 3);
                assert!(message.contains("500"), "{message}");
            }
            other => panic!("expected transport error, got {other:?}"),
        }
        assert_eq!(server.hits(), 3);
        assert_eq!(cache.get(&config.model, "x").unwrap(), None);
    }

    #[test]
    fn client_errors_do_not_retry() {
        let server = StubServer::spawn(|_| (404, "{}".to_string()));
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let config = test_config(server.url());
        assert!(matches!(
            query_provider(&config, "x", &cache),
            Err(Error::Provider { .. })
        ));
        assert_eq!(server.hits(), 1);
    }

    #[test]
    fn malformed_payload_is_a_provider_error() {
        let server = StubServer::spawn(|_| (200, r#"{"choices": []}"#.to_string()));
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let config = test_config(server.url());
        match query_provider(&config, "x", &cache) {
            Err(Error::Provider { message, .. }) => {
                assert!(message.contains("choices"), "{message}")
            }
            other => panic!("expected provider error, got {other:?}"),
        }
    }

    #[test]
    fn transient_failure_then_success_recovers() {
        let failures = Arc::new(AtomicU32::new(2));
        let failures2 = failures.clone();
        let server = StubServer::spawn(move |_| {
            if failures2.fetch_update(Ordering::SeqCst, Ordering::SeqCst, |f| f.checked_sub(1))
                .is_ok()
            {
                (500, "{}".to_string())
            } else {
                (200, chat_reply("1 (confuta) no"))
            }
        });
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let config = test_config(server.url());
        assert_eq!(query_provider(&config, "x", &cache).unwrap(), "1 (confuta) no");
        assert_eq!(server.hits(), 3);
    }

    #[test]
    fn bearer_token_is_sent_when_configured() {
        let server = StubServer::spawn_with_headers(|headers, _| {
            assert!(
                headers.contains("authorization: Bearer sekrit")
                    || headers.contains("Authorization: Bearer sekrit"),
                "headers were: {headers}"
            );
            (200, chat_reply("ok"))
        });
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let mut config = test_config(server.url());
        config.auth_env = Some("CLAIMCHECK_TEST_TOKEN".to_string());
        std::env::set_var("CLAIMCHECK_TEST_TOKEN", "sekrit");
        assert_eq!(query_provider(&config, "x", &cache).unwrap(), "ok");

        config.auth_env = Some("CLAIMCHECK_TEST_TOKEN_UNSET".to_string());
        assert!(matches!(
            query_provider(&config, "y", &cache),
            Err(Error::Provider { .. })
        ));
    }

    #[test]
    fn query_many_answers_every_prompt_once() {
        let server = StubServer::spawn(|body| {
            let value: serde_json::Value = serde_json::from_str(body).unwrap();
            let prompt = value["messages"][0]["content"].as_str().unwrap();
            (200, chat_reply(&format!("echo {prompt}")))
        });
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let mut config = test_config(server.url());
        config.max_concurrency = 3;

        let prompts: Vec<String> = (0..20).map(|i| format!("prompt {i}")).collect();
        let answers = query_many(&config, &prompts, &cache).unwrap();
        assert_eq!(answers.len(), 20);
        for (i, answer) in answers.iter().enumerate() {
            assert_eq!(answer, &format!("echo prompt {i}"));
        }
        assert_eq!(server.hits(), 20);

        // Rerun: all cached.
        let again = query_many(&config, &prompts, &cache).unwrap();
        assert_eq!(again, answers);
        assert_eq!(server.hits(), 20);

        let distinct: HashSet<&String> = answers.iter().collect();
        assert_eq!(distinct.len(), 20);
    }

    #[test]
    fn zero_concurrency_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let mut config = ProviderConfig::new("http://localhost:1", "m");
        config.max_concurrency = 0;
        assert!(query_provider(&config, "x", &cache).is_err());
    }

    #[test]
    fn clarity_check_flags_not_enough_info() {
        let server = StubServer::spawn(|body| {
            let value: serde_json::Value = serde_json::from_str(body).unwrap();
            let prompt = value["messages"][0]["content"].as_str().unwrap();
            assert!(prompt.starts_with("FRASE: I lavoratori poveri"));
            assert!(prompt.contains("Esempio di output"));
            (
                200,
                chat_reply("2 (not enough info) il testo non fornisce dati sufficienti"),
            )
        });
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let config = test_config(server.url());

        let check = clarity_check(
            "I lavoratori poveri sono il 12-13%",
            "Nel 2020 il 10,8% dei lavoratori era sotto la soglia di povertà relativa.",
            &config,
            &cache,
        )
        .unwrap();
        assert_eq!(check.label, EntailLabel::NotEnoughInfo);
        assert!(check.insufficient_explanation);
        assert!(check.rationale.contains("non fornisce"));
    }

    #[test]
    fn clarity_check_passes_supported_explanations() {
        let server = StubServer::spawn(|_| (200, chat_reply("0 (supporta) la spiegazione basta")));
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path()).unwrap();
        let config = test_config(server.url());
        let check = clarity_check("s", "e", &config, &cache).unwrap();
        assert_eq!(check.label, EntailLabel::Supported);
        assert!(!check.insufficient_explanation);
    }
}
