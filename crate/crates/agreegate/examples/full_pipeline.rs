//! The whole decision workflow in one pass: zone summaries, the gate, a
//! replacement sweep with the strategy the gate picked, the maximum safe
//! delegation fraction, effort accounting, and a reproducible report.
//!
//! ```text
//! cargo run --example full_pipeline
//! ```

use agreegate::{
    agreement_matrix, effort_report, gate, max_safe_fraction, replacement_sweep,
    zone_summaries, DatasetBuilder, GateOutcome, LabelScale, ModelRatings, Rater, Result,
    RngSeed, RunParameters, RunReport, Strategy, SweepConfig,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    // A study with three human raters and three model raters over 150
    // samples, everything correlated with a latent per-sample value.
    let labels = ["agree", "disagree"];
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut b = DatasetBuilder::new(LabelScale::Nominal {
        labels: labels.iter().map(|s| s.to_string()).collect(),
    });
    for r in ["p1", "p2", "p3"] {
        b.add_rater(Rater::human(r))?;
    }
    for m in ["model-a", "model-b", "model-c"] {
        b.add_rater(Rater::model(m))?;
    }
    for i in 0..150 {
        let sample = format!("s{i:03}");
        let truth = rng.random_range(0..2);
        for (rater, noise) in [("p1", 0.2), ("p2", 0.22), ("p3", 0.25)] {
            let v = if rng.random_range(0.0..1.0) < noise { 1 - truth } else { truth };
            b.add_annotation(&sample, rater, labels[v], None)?;
        }
        for (m, noise) in [("model-a", 0.05), ("model-b", 0.07), ("model-c", 0.09)] {
            let v = if rng.random_range(0.0..1.0) < noise { 1 - truth } else { truth };
            let confidence = 0.6 + rng.random_range(0.0..0.39);
            b.add_annotation(&sample, m, labels[v], Some(confidence))?;
        }
    }
    let ds = b.build()?;

    // Stage 1: agreement landscape.
    let matrix = agreement_matrix(&ds)?;
    let summaries = zone_summaries(&matrix, None);
    for s in &summaries {
        println!(
            "zone {:11} mean {:+.3} median {:+.3} ({} pairs)",
            s.zone.as_str(),
            s.mean_alpha,
            s.median_alpha,
            s.pair_count
        );
    }

    // Stage 2: the gate picks the delegation mode.
    let decision = gate(&ds, 0.5)?;
    let strategy = match decision.outcome {
        GateOutcome::ReplaceOneRatingAllSamples => Strategy::Random,
        GateOutcome::SelectiveHighConfidenceOnly => Strategy::ByConfidence,
    };
    println!(
        "\ngate: mean model-model alpha {:.3} -> {:?} (sweep strategy {})",
        decision.mm_mean_alpha,
        decision.outcome,
        strategy.as_str()
    );

    // Stage 3: sweep and safe fraction, using the strongest model.
    let model = ModelRatings::from_dataset(&ds, "model-a")?;
    let cfg = SweepConfig::new(strategy, RngSeed(7));
    let curve = replacement_sweep(&ds, &model, &cfg)?;
    let safe = max_safe_fraction(&curve)?;
    println!("max safe delegation fraction: {safe}");

    // Stage 4: what that is worth.
    let effort = effort_report(ds.ratings_per_sample(), safe)?;
    println!(
        "effort saved: {}% of one rating, {}% of the whole study",
        effort.display_one_rating_pct(),
        effort.display_overall_pct()
    );

    // A reproducible report: same seed, same bytes.
    let report = RunReport {
        tool_version: RunReport::tool_version(),
        inputs: vec![],
        parameters: RunParameters {
            seed: 7,
            threshold: 0.5,
            fractions: cfg.fractions.clone(),
            trials: cfg.trials,
            bootstrap_iterations: cfg.bootstrap_iterations,
            bootstrap_fraction: cfg.bootstrap_fraction,
            level: cfg.level,
            sweep_model: Some("model-a".into()),
            strategy: Some(strategy),
        },
        zone_summaries: summaries,
        gate: Some(decision),
        sweeps: vec![curve],
        safe_fractions: vec![safe],
        effort: vec![effort],
        warnings: vec![],
    };
    agreegate::validate_report_json(&serde_json::from_str(&report.to_json_pretty()?)?)?;
    println!("\nmarkdown summary:\n\n{}", report.to_markdown());
    Ok(())
}
