//! Few-shot prompting with offline replay: build prompts from the bundled
//! template, serve responses from the bundled cassette (no network at all),
//! parse answers into the label space, and read answer-token probabilities
//! as confidence.
//!
//! ```text
//! cargo run --example prompt_replay
//! ```

use std::path::PathBuf;

use agreegate::llm::{annotate, AnnotateBackend, Cassette, PromptTemplate, SampleText};
use agreegate::{LabelScale, ModelRatings, Rater, Result};

fn fixture(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(relative)
}

fn main() -> Result<()> {
    let scale = LabelScale::from_json_file(fixture("scales/likert4.json"))?;
    let template = PromptTemplate::from_files(
        fixture("templates/similarity.txt"),
        Some(&fixture("templates/similarity_shots.json")),
        scale.labels().unwrap().to_vec(),
    )?;
    for warning in template.lint() {
        println!("template warning: {warning}");
    }

    let text = std::fs::read_to_string(fixture("samples/similarity.jsonl"))
        .expect("bundled samples");
    let samples: Vec<SampleText> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("sample record"))
        .collect();

    println!("rendered prompt for the first sample:\n---");
    println!("{}", template.build_prompt(&samples[0].text)?);
    println!("---\n");

    let cfg = agreegate::llm::ProviderConfig::from_file(fixture("provider_demo.toml"))?;
    let cassette = Cassette::load(fixture("demo_cassette.jsonl"))?;
    let answers = annotate(&samples, &template, &cfg, &AnnotateBackend::Replay(&cassette))?;

    println!("replayed answers:");
    let mut ratings = ModelRatings::new(Rater::model("gpt-demo"));
    for a in &answers {
        println!(
            "  {:6} -> {:18} confidence {}",
            a.sample_id,
            a.label.as_deref().unwrap_or("(failed)"),
            a.confidence.map(|c| format!("{c:.3}")).unwrap_or_else(|| "n/a".into())
        );
        if let Some(label) = &a.label {
            ratings.insert(&a.sample_id, label, a.confidence);
        }
    }
    println!(
        "\n{} of {} answers usable as a model rating column",
        ratings.len(),
        answers.len()
    );
    Ok(())
}
