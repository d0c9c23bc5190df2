//! Driving a model rater over a sample list: one answer record per sample,
//! in input order, with parse-failure handling and record/replay.

use serde::{Deserialize, Serialize};

use super::cassette::{unix_timestamp, Cassette, CassetteRecord};
use super::parse::{extract_confidence, parse_label};
use super::prompt::PromptTemplate;
use super::provider::{Clock, ProviderConfig, ProviderRequest, ProviderResponse, RateLimiter, SystemClock, Transport};
use crate::error::{Error, Result};

/// Appended to the prompt on the single automatic reprompt after a parse
/// failure. Frozen: it participates in cassette keys.
pub const REPROMPT_SUFFIX: &str = "\nAnswer using exactly one of the options.";

/// An artifact to annotate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleText {
    pub sample_id: String,
    pub text: String,
}

/// The outcome of querying one sample. A failed answer has no label and is
/// treated as a missing annotation downstream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelAnswer {
    pub sample_id: String,
    pub raw_text: String,
    pub label: Option<String>,
    pub confidence: Option<f64>,
    pub provider_meta: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl ModelAnswer {
    pub fn is_failed(&self) -> bool {
        self.label.is_none()
    }
}

/// Live querying options. When `record_to` is set, every exchange is
/// persisted for later replay.
pub struct LiveOptions<'a> {
    pub transport: &'a dyn Transport,
    pub record_to: Option<&'a Cassette>,
    pub clock: Option<&'a dyn Clock>,
}

/// Where answers come from. Replay mode performs no network operations at
/// all: it has no transport.
pub enum AnnotateBackend<'a> {
    Live(LiveOptions<'a>),
    Replay(&'a Cassette),
}

/// Annotate every sample with one model answer, preserving input order and
/// cardinality. Parse failures trigger one reprompt; a second failure marks
/// the answer failed rather than guessing a label.
pub fn annotate(
    samples: &[SampleText],
    template: &PromptTemplate,
    cfg: &ProviderConfig,
    backend: &AnnotateBackend,
) -> Result<Vec<ModelAnswer>> {
    cfg.validate()?;
    let system_clock = SystemClock;
    let (limiter, retries) = match backend {
        AnnotateBackend::Live(options) => {
            let clock: &dyn Clock = options.clock.unwrap_or(&system_clock);
            (
                Some(RateLimiter::per_minute(cfg.rate_limit_per_minute, clock)),
                cfg.max_retries,
            )
        }
        AnnotateBackend::Replay(_) => (None, 0),
    };

    let mut answers = Vec::with_capacity(samples.len());
    for sample in samples {
        let prompt = template.build_prompt(&sample.text)?;
        let answer = annotate_one(sample, &prompt, template, cfg, backend, limiter.as_ref(), retries)?;
        answers.push(answer);
    }
    Ok(answers)
}

fn annotate_one(
    sample: &SampleText,
    prompt: &str,
    template: &PromptTemplate,
    cfg: &ProviderConfig,
    backend: &AnnotateBackend,
    limiter: Option<&RateLimiter>,
    retries: u32,
) -> Result<ModelAnswer> {
    let first = match fetch(sample, prompt, cfg, backend, limiter, retries)? {
        Ok(resp) => resp,
        Err(message) => return Ok(failed_answer(sample, message)),
    };
    if let Some(label) = parse_label(&first.raw_text, &template.options) {
        return Ok(successful_answer(sample, &first, label, cfg, backend));
    }
    // One automatic reprompt with an explicit format instruction.
    let reprompt = format!("{prompt}{REPROMPT_SUFFIX}");
    let second = match fetch(sample, &reprompt, cfg, backend, limiter, retries)? {
        Ok(resp) => resp,
        Err(message) => return Ok(failed_answer(sample, message)),
    };
    match parse_label(&second.raw_text, &template.options) {
        Some(label) => Ok(successful_answer(sample, &second, label, cfg, backend)),
        None => {
            let mut answer = failed_answer(
                sample,
                "response did not contain any option, after one reprompt".to_string(),
            );
            answer.raw_text = second.raw_text;
            Ok(answer)
        }
    }
}

/// Outer result: hard errors (cassette miss in replay) abort the run; the
/// inner result distinguishes per-sample provider failures.
fn fetch(
    sample: &SampleText,
    prompt: &str,
    cfg: &ProviderConfig,
    backend: &AnnotateBackend,
    limiter: Option<&RateLimiter>,
    retries: u32,
) -> Result<std::result::Result<ProviderResponse, String>> {
    let key = Cassette::key(&cfg.provider, &cfg.model, prompt);
    match backend {
        AnnotateBackend::Replay(cassette) => match cassette.get(&key) {
            Some(record) => Ok(Ok(record.response())),
            None => Err(Error::CassetteMiss {
                key,
                sample_id: sample.sample_id.clone(),
            }),
        },
        AnnotateBackend::Live(options) => {
            let request = ProviderRequest {
                prompt: prompt.to_string(),
            };
            let mut last_error = String::new();
            for attempt in 0..=retries {
                if let Some(limiter) = limiter {
                    limiter.acquire();
                }
                match options.transport.execute(cfg, &request) {
                    Ok(resp) => {
                        if let Some(cassette) = options.record_to {
                            cassette.put(CassetteRecord {
                                key: key.clone(),
                                provider: cfg.provider.clone(),
                                model: cfg.model.clone(),
                                prompt: prompt.to_string(),
                                response_text: resp.raw_text.clone(),
                                token_probs: resp.token_probs.clone(),
                                timestamp: unix_timestamp(),
                            })?;
                        }
                        return Ok(Ok(resp));
                    }
                    Err(e) => {
                        last_error = e.to_string();
                        if attempt < retries {
                            if let Some(clock) = options.clock {
                                clock.sleep(std::time::Duration::from_millis(
                                    250 * (1 << attempt.min(4)),
                                ));
                            } else {
                                std::thread::sleep(std::time::Duration::from_millis(
                                    250 * (1 << attempt.min(4)),
                                ));
                            }
                        }
                    }
                }
            }
            Ok(Err(format!(
                "provider failed after {} attempts: {last_error}",
                retries + 1
            )))
        }
    }
}

fn successful_answer(
    sample: &SampleText,
    resp: &ProviderResponse,
    label: String,
    cfg: &ProviderConfig,
    backend: &AnnotateBackend,
) -> ModelAnswer {
    let confidence = extract_confidence(resp, &label);
    let provider_meta = serde_json::json!({
        "provider": cfg.provider,
        "model": cfg.model,
        "replayed": matches!(backend, AnnotateBackend::Replay(_)),
        "response": resp.meta,
    });
    ModelAnswer {
        sample_id: sample.sample_id.clone(),
        raw_text: resp.raw_text.clone(),
        label: Some(label),
        confidence,
        provider_meta,
        error: None,
    }
}

fn failed_answer(sample: &SampleText, message: String) -> ModelAnswer {
    ModelAnswer {
        sample_id: sample.sample_id.clone(),
        raw_text: String::new(),
        label: None,
        confidence: None,
        provider_meta: serde_json::Value::Null,
        error: Some(message),
    }
}
