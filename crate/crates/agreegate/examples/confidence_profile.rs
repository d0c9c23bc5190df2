//! Per-sample delegation signals: the confidence profile (answer probability
//! at each percentile of the confidence-sorted samples) and the cumulative
//! share of samples where the model matches the strict human majority.
//!
//! ```text
//! cargo run --example confidence_profile
//! ```

use agreegate::{
    confidence_profile, majority_agreement_curve, DatasetBuilder, LabelScale, ModelRatings,
    Rater, Result,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let labels = ["1", "2", "3", "4", "5"];
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut b = DatasetBuilder::new(LabelScale::Ordinal {
        labels: labels.iter().map(|s| s.to_string()).collect(),
    });
    for r in ["p1", "p2", "p3", "p4", "p5"] {
        b.add_rater(Rater::human(r))?;
    }
    let mut model = ModelRatings::new(Rater::model("gpt-demo"));
    for i in 0..100 {
        let sample = format!("s{i:03}");
        let center = rng.random_range(0..5) as i64;
        for r in ["p1", "p2", "p3", "p4", "p5"] {
            let v = if rng.random_range(0.0..1.0) < 0.7 {
                center as usize
            } else {
                (center + rng.random_range(-1..=1)).clamp(0, 4) as usize
            };
            b.add_annotation(&sample, r, labels[v], None)?;
        }
        // Confident and correct early, hesitant and noisy late.
        let hard = i >= 60;
        let (answer, confidence) = if hard {
            (
                (center + rng.random_range(-2..=2)).clamp(0, 4) as usize,
                0.35 + rng.random_range(0.0..0.3),
            )
        } else {
            (center as usize, 0.78 + rng.random_range(0.0..0.2))
        };
        model.insert(&sample, labels[answer], Some(confidence));
    }
    let ds = b.build()?;

    println!("confidence profile (sorted by descending answer probability):");
    let profile = confidence_profile(&model)?;
    for p in profile.iter().step_by(10) {
        println!("  top {:>5.1}% of samples -> confidence {:.3}", p.fraction * 100.0, p.confidence);
    }

    println!("\nmajority agreement (strict majority of 5 raters = at least 3):");
    let curve = majority_agreement_curve(&ds, &model)?;
    for p in curve.iter().step_by(10) {
        println!(
            "  top {:>5.1}% by confidence -> model matches majority on {:>5.1}%",
            p.fraction * 100.0,
            p.share * 100.0
        );
    }
    println!(
        "\nfull-data majority agreement: {:.1}%",
        curve.last().map(|p| p.share * 100.0).unwrap_or(0.0)
    );
    Ok(())
}
