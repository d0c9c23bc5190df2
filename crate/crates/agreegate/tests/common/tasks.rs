//! The four bundled demo annotation tasks, built from the fixture files.
//! The cassette generator and the replay tests must construct identical
//! prompts, so everything goes through this module.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use agreegate::llm::{
    ProviderConfig, ProviderRequest, ProviderResponse, PromptTemplate, SampleText, TokenProb,
    Transport,
};
use agreegate::{LabelScale, Result};

pub fn fixture_path(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(relative)
}

pub fn demo_cassette_path() -> PathBuf {
    fixture_path("demo_cassette.jsonl")
}

pub fn provider_config() -> ProviderConfig {
    ProviderConfig::from_file(fixture_path("provider_demo.toml")).expect("provider fixture")
}

pub fn load_samples(relative: &str) -> Vec<SampleText> {
    let text = std::fs::read_to_string(fixture_path(relative)).expect("samples fixture");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("sample line"))
        .collect()
}

pub struct DemoTask {
    pub name: &'static str,
    pub scale: LabelScale,
    pub template: PromptTemplate,
    pub samples: Vec<SampleText>,
    /// Responses in request order (reprompts included), used when recording.
    pub script: Vec<ProviderResponse>,
}

fn template_for(task: &str, scale: &LabelScale) -> PromptTemplate {
    PromptTemplate::from_files(
        fixture_path(&format!("templates/{task}.txt")),
        Some(&fixture_path(&format!("templates/{task}_shots.json"))),
        scale.labels().expect("labeled scale").to_vec(),
    )
    .expect("template fixture")
}

fn with_probs(text: &str, tokens: &[(&str, f64)]) -> ProviderResponse {
    ProviderResponse {
        raw_text: text.to_string(),
        token_probs: Some(
            tokens
                .iter()
                .map(|(t, p)| TokenProb {
                    token: t.to_string(),
                    probability: *p,
                })
                .collect(),
        ),
        meta: serde_json::json!({"finish_reason": "stop"}),
    }
}

fn without_probs(text: &str) -> ProviderResponse {
    ProviderResponse {
        raw_text: text.to_string(),
        token_probs: None,
        meta: serde_json::json!({"finish_reason": "stop"}),
    }
}

/// All four demo tasks with their scripted recordings: a 4-option Likert
/// task, a 1-5 Likert task, a binary task, and a three-label status task
/// (whose last sample exercises the automatic reprompt).
pub fn demo_tasks() -> Vec<DemoTask> {
    let likert4 = LabelScale::from_json_file(fixture_path("scales/likert4.json")).unwrap();
    let likert5 = LabelScale::from_json_file(fixture_path("scales/likert5.json")).unwrap();
    let binary = LabelScale::from_json_file(fixture_path("scales/binary.json")).unwrap();
    let status = LabelScale::from_json_file(fixture_path("scales/warning_status.json")).unwrap();

    vec![
        DemoTask {
            name: "similarity",
            template: template_for("similarity", &likert4),
            samples: load_samples("samples/similarity.jsonl"),
            script: vec![
                with_probs("Strongly agree", &[("Strongly", 0.95), (" agree", 0.9)]),
                with_probs(
                    "strongly disagree.",
                    &[("strongly", 0.9), (" disagree", 0.8), (".", 0.99)],
                ),
                with_probs("Agree", &[("Agree", 0.88)]),
                with_probs("Agree", &[("Agree", 0.71)]),
                with_probs("Disagree", &[("Dis", 0.8), ("agree", 0.75)]),
                with_probs("Strongly agree", &[("Strongly", 0.93), (" agree", 0.87)]),
            ],
            scale: likert4,
        },
        DemoTask {
            name: "name_value",
            template: template_for("name_value", &likert5),
            samples: load_samples("samples/name_value.jsonl"),
            script: vec![
                with_probs("5", &[("5", 0.97)]),
                with_probs("1", &[("1", 0.97)]),
                with_probs("5", &[("5", 0.82)]),
                with_probs("2", &[("2", 0.64)]),
                with_probs("4", &[("4", 0.77)]),
                without_probs("3"),
            ],
            scale: likert5,
        },
        DemoTask {
            name: "causality",
            template: template_for("causality", &binary),
            samples: load_samples("samples/causality.jsonl"),
            script: vec![
                with_probs("1", &[("1", 0.93)]),
                with_probs("0", &[("0", 0.9)]),
                with_probs("1", &[("1", 0.85)]),
                with_probs("0", &[("0", 0.88)]),
                with_probs("1", &[("1", 0.95)]),
                with_probs("0", &[("0", 0.72)]),
            ],
            scale: binary,
        },
        DemoTask {
            name: "static_analysis",
            template: template_for("static_analysis", &status),
            samples: load_samples("samples/static_analysis.jsonl"),
            script: vec![
                with_probs("closed", &[("closed", 0.9)]),
                with_probs("open", &[("open", 0.85)]),
                with_probs("closed", &[("closed", 0.8)]),
                with_probs("unknown", &[("unknown", 0.6)]),
                with_probs("closed", &[("closed", 0.92)]),
                with_probs("open", &[("open", 0.55)]),
                // sa07 answers in prose first, then properly on the reprompt.
                without_probs("The change introduces an Optional so the issue will go away."),
                with_probs("closed", &[("closed", 0.7)]),
            ],
            scale: status,
        },
    ]
}

/// Transport that plays back a fixed script and counts calls.
pub struct ScriptedTransport {
    responses: Mutex<Vec<ProviderResponse>>,
    calls: AtomicUsize,
}

impl ScriptedTransport {
    pub fn new(responses: Vec<ProviderResponse>) -> Self {
        ScriptedTransport {
            responses: Mutex::new(responses),
            calls: AtomicUsize::new(0),
        }
    }

    pub fn call_count(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Transport for ScriptedTransport {
    fn execute(&self, cfg: &ProviderConfig, _req: &ProviderRequest) -> Result<ProviderResponse> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let mut responses = self.responses.lock().unwrap();
        if responses.is_empty() {
            return Err(agreegate::Error::Provider {
                provider: cfg.provider.clone(),
                message: "script exhausted".into(),
            });
        }
        Ok(responses.remove(0))
    }
}

/// Transport that must never be reached; proves an execution path performed
/// no network operations.
pub struct PanickingTransport;

impl Transport for PanickingTransport {
    fn execute(&self, _cfg: &ProviderConfig, _req: &ProviderRequest) -> Result<ProviderResponse> {
        panic!("transport was invoked on a path that must stay offline");
    }
}
