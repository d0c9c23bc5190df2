//! Provider configuration and the HTTP transport for chat-completion style
//! APIs, with per-provider rate limiting.
//!
//! API keys are referenced by environment variable name and are never stored
//! in configs, cassettes, or reports.

use std::collections::VecDeque;
use std::path::Path;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How to reach one provider.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderConfig {
    /// Provider family, e.g. "openai-compatible".
    pub provider: String,
    /// Model identifier sent with each request.
    pub model: String,
    /// Chat-completions endpoint URL.
    pub endpoint: String,
    /// Name of the environment variable holding the API key.
    pub auth_env: String,
    /// Maximum requests per 60-second window; must be positive.
    pub rate_limit_per_minute: u32,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
}

fn default_max_retries() -> u32 {
    2
}

fn default_max_tokens() -> u32 {
    16
}

impl ProviderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rate_limit_per_minute == 0 {
            return Err(Error::InvalidParameter {
                name: "rate_limit_per_minute".into(),
                message: "must be positive".into(),
            });
        }
        Ok(())
    }

    /// Load from TOML (default) or JSON (by extension).
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(display.clone(), e))?;
        let cfg: ProviderConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text)?
        } else {
            toml::from_str(&text).map_err(|e| Error::Schema {
                location: display,
                message: e.to_string(),
            })?
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One request to a provider.
#[derive(Debug, Clone)]
pub struct ProviderRequest {
    pub prompt: String,
}

/// A token of the response with its probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenProb {
    pub token: String,
    pub probability: f64,
}

/// What came back from a provider.
#[derive(Debug, Clone, PartialEq)]
pub struct ProviderResponse {
    pub raw_text: String,
    /// Per-token probabilities, when the provider exposes them.
    pub token_probs: Option<Vec<TokenProb>>,
    /// Opaque diagnostics (finish reason, usage, ...).
    pub meta: serde_json::Value,
}

/// Transport abstraction so tests can run without a network.
pub trait Transport: Send + Sync {
    fn execute(&self, cfg: &ProviderConfig, req: &ProviderRequest) -> Result<ProviderResponse>;
}

/// Time source, injectable for rate-limiter tests.
pub trait Clock: Send + Sync {
    fn now(&self) -> Instant;
    fn sleep(&self, duration: Duration);
}

/// Wall-clock time and real sleeping.
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Instant {
        Instant::now()
    }

    fn sleep(&self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

/// Sliding-window limiter: at most `limit` acquisitions in any 60 s window.
pub struct RateLimiter<'a> {
    limit: usize,
    window: Duration,
    clock: &'a dyn Clock,
    history: Mutex<VecDeque<Instant>>,
}

impl<'a> RateLimiter<'a> {
    pub fn per_minute(limit: u32, clock: &'a dyn Clock) -> Self {
        RateLimiter {
            limit: limit.max(1) as usize,
            window: Duration::from_secs(60),
            clock,
            history: Mutex::new(VecDeque::new()),
        }
    }

    /// Block until a request slot is available, then claim it.
    pub fn acquire(&self) {
        loop {
            let wait = {
                let mut history = self.history.lock().unwrap();
                let now = self.clock.now();
                while let Some(front) = history.front() {
                    if now.duration_since(*front) >= self.window {
                        history.pop_front();
                    } else {
                        break;
                    }
                }
                if history.len() < self.limit {
                    history.push_back(now);
                    return;
                }
                self.window - now.duration_since(*history.front().unwrap())
            };
            self.clock.sleep(wait);
        }
    }
}

/// Chat-completions HTTP client (OpenAI-style wire format).
pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| Error::Provider {
                provider: "http".into(),
                message: format!("client construction failed: {e}"),
            })?;
        Ok(HttpTransport { client })
    }
}

impl Transport for HttpTransport {
    fn execute(&self, cfg: &ProviderConfig, req: &ProviderRequest) -> Result<ProviderResponse> {
        let key = std::env::var(&cfg.auth_env).map_err(|_| Error::Provider {
            provider: cfg.provider.clone(),
            message: format!("environment variable {} is not set", cfg.auth_env),
        })?;
        let body = serde_json::json!({
            "model": cfg.model,
            "messages": [{"role": "user", "content": req.prompt}],
            "temperature": cfg.temperature,
            "max_tokens": cfg.max_tokens,
            "logprobs": true,
        });
        let response = self
            .client
            .post(&cfg.endpoint)
            .bearer_auth(key)
            .json(&body)
            .send()
            .map_err(|e| Error::Provider {
                provider: cfg.provider.clone(),
                message: format!("request failed: {e}"),
            })?;
        let status = response.status();
        let payload: serde_json::Value = response.json().map_err(|e| Error::Provider {
            provider: cfg.provider.clone(),
            message: format!("invalid response body: {e}"),
        })?;
        if !status.is_success() {
            return Err(Error::Provider {
                provider: cfg.provider.clone(),
                message: format!("http {status}: {payload}"),
            });
        }
        parse_chat_completion(&cfg.provider, &payload)
    }
}

/// Pull text and token probabilities out of a chat-completion payload.
pub(crate) fn parse_chat_completion(
    provider: &str,
    payload: &serde_json::Value,
) -> Result<ProviderResponse> {
    let choice = payload
        .get("choices")
        .and_then(|c| c.get(0))
        .ok_or_else(|| Error::Provider {
            provider: provider.to_string(),
            message: "response carries no choices".into(),
        })?;
    let raw_text = choice
        .pointer("/message/content")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Provider {
            provider: provider.to_string(),
            message: "choice carries no message content".into(),
        })?
        .to_string();
    let token_probs = choice
        .pointer("/logprobs/content")
        .and_then(|v| v.as_array())
        .map(|items| {
            items
                .iter()
                .filter_map(|item| {
                    let token = item.get("token")?.as_str()?.to_string();
                    let logprob = item.get("logprob")?.as_f64()?;
                    Some(TokenProb {
                        token,
                        probability: logprob.exp(),
                    })
                })
                .collect::<Vec<_>>()
        })
        .filter(|v| !v.is_empty());
    let meta = serde_json::json!({
        "finish_reason": choice.get("finish_reason").cloned().unwrap_or(serde_json::Value::Null),
        "usage": payload.get("usage").cloned().unwrap_or(serde_json::Value::Null),
    });
    Ok(ProviderResponse {
        raw_text,
        token_probs,
        meta,
    })
}
