//! The task-level gate: mean model-model agreement against a strict
//! threshold decides between replacing one rating everywhere and selective
//! high-confidence delegation, then effort accounting turns a safe fraction
//! into saved ratings.
//!
//! ```text
//! cargo run --example gate_and_effort
//! ```

use agreegate::{effort_report, gate, DatasetBuilder, GateOutcome, LabelScale, Rater, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Three model raters whose labels share `coherence` of a common signal.
fn model_panel(coherence: f64, seed: u64) -> Result<agreegate::AnnotationDataset> {
    let labels = ["open", "closed", "unknown"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = DatasetBuilder::new(LabelScale::Nominal {
        labels: labels.iter().map(|s| s.to_string()).collect(),
    });
    for m in ["model-a", "model-b", "model-c"] {
        b.add_rater(Rater::model(m))?;
    }
    for i in 0..150 {
        let sample = format!("s{i:03}");
        let shared = rng.random_range(0..3);
        for m in ["model-a", "model-b", "model-c"] {
            let v = if rng.random_range(0.0..1.0) < coherence {
                shared
            } else {
                rng.random_range(0..3)
            };
            b.add_annotation(&sample, m, labels[v], None)?;
        }
    }
    b.build()
}

fn main() -> Result<()> {
    for (description, coherence) in [("models that mostly agree", 0.9), ("models that barely agree", 0.35)] {
        let panel = model_panel(coherence, 99)?;
        let decision = gate(&panel, 0.5)?;
        println!(
            "{description}: mean model-model alpha = {:.3} vs threshold {} -> {}",
            decision.mm_mean_alpha,
            decision.threshold,
            match decision.outcome {
                GateOutcome::ReplaceOneRatingAllSamples => "replace one rating on all samples",
                GateOutcome::SelectiveHighConfidenceOnly => "delegate high-confidence samples only",
            }
        );
    }

    println!("\neffort saved for one delegated rating:");
    println!("  k  safe fraction  one rating  overall");
    for (k, f) in [(3usize, 1.0), (11, 1.0), (2, 0.6), (2, 0.5), (3, 0.5)] {
        let e = effort_report(k, f)?;
        println!(
            "  {:>2}  {:>12}  {:>9}%  {:>6}%",
            k,
            f,
            e.display_one_rating_pct(),
            e.display_overall_pct()
        );
    }
    Ok(())
}
