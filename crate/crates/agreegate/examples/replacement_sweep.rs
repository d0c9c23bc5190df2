//! Replacement sweeps: replace one human rating with the model's answer on
//! a growing fraction of samples, chosen by model confidence or at random,
//! and find the largest fraction that stays statistically indistinguishable
//! from the human-only baseline.
//!
//! ```text
//! cargo run --example replacement_sweep
//! ```

use agreegate::{
    delegation_plan, max_safe_fraction, replacement_sweep, DatasetBuilder, LabelScale,
    ModelRatings, Rater, Result, RngSeed, Strategy, SweepConfig,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let labels = ["0", "1"];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut b = DatasetBuilder::new(LabelScale::Nominal {
        labels: labels.iter().map(|s| s.to_string()).collect(),
    });
    for r in ["p1", "p2"] {
        b.add_rater(Rater::human(r))?;
    }
    let mut model = ModelRatings::new(Rater::model("gpt-demo"));
    for i in 0..200 {
        let sample = format!("s{i:03}");
        let truth = rng.random_range(0..2);
        for r in ["p1", "p2"] {
            let v = if rng.random_range(0.0..1.0) < 0.15 { 1 - truth } else { truth };
            b.add_annotation(&sample, r, labels[v], None)?;
        }
        // The model is right on easy samples and noisy on hard ones, and its
        // confidence knows the difference.
        let hard = rng.random_range(0.0..1.0) < 0.3;
        let (answer, confidence) = if hard {
            (rng.random_range(0..2), 0.5 + rng.random_range(0.0..0.1))
        } else {
            (truth, 0.85 + rng.random_range(0.0..0.14))
        };
        model.insert(&sample, labels[answer], Some(confidence));
    }
    let ds = b.build()?;

    for strategy in [Strategy::ByConfidence, Strategy::Random] {
        let cfg = SweepConfig::new(strategy, RngSeed(42));
        let curve = replacement_sweep(&ds, &model, &cfg)?;
        println!(
            "strategy {:13} baseline alpha {:.3} CI [{:.3}, {:.3}]",
            strategy.as_str(),
            curve.baseline.point,
            curve.baseline.lower,
            curve.baseline.upper
        );
        for p in &curve.points {
            let marker = if p.ci.overlaps(&curve.baseline) { "" } else { "  <- separates" };
            println!(
                "  fraction {:>4.1}: mean {:+.3} CI [{:+.3}, {:+.3}]{marker}",
                p.fraction, p.mean_alpha, p.ci.lower, p.ci.upper
            );
        }
        let safe = max_safe_fraction(&curve)?;
        println!("  max safe fraction: {safe}\n");

        if strategy == Strategy::ByConfidence {
            let plan = delegation_plan(&ds, &model, safe)?;
            println!(
                "  delegation plan at {safe}: {} samples, first five {:?}\n",
                plan.len(),
                &plan[..plan.len().min(5)]
            );
        }
    }
    Ok(())
}
