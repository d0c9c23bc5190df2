//! A pairwise agreement matrix over humans, models, and a random rater,
//! with zone summaries and the plotting exports.
//!
//! ```text
//! cargo run --example agreement_matrix
//! ```

use agreegate::{
    agreement_matrix, zone_summaries, DatasetBuilder, LabelScale, Rater, Result,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let labels = ["agree", "disagree"];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut b = DatasetBuilder::new(LabelScale::Nominal {
        labels: labels.iter().map(|s| s.to_string()).collect(),
    });
    for r in ["p1", "p2", "p3"] {
        b.add_rater(Rater::human(r))?;
    }
    for m in ["model-a", "model-b"] {
        b.add_rater(Rater::model(m))?;
    }
    b.add_rater(Rater::random("coin-flip"))?;

    for i in 0..60 {
        let sample = format!("s{i:02}");
        let truth = rng.random_range(0..2);
        // Humans and models mostly follow the sample's latent value; the
        // random rater flips a coin.
        for (rater, noise) in [
            ("p1", 0.15), ("p2", 0.2), ("p3", 0.25),
            ("model-a", 0.18), ("model-b", 0.22),
        ] {
            if rng.random_range(0.0..1.0) < 0.1 {
                continue; // sparse: not everyone rates everything
            }
            let v = if rng.random_range(0.0..1.0) < noise { 1 - truth } else { truth };
            b.add_annotation(&sample, rater, labels[v], None)?;
        }
        b.add_annotation(&sample, "coin-flip", labels[rng.random_range(0..2)], None)?;
    }
    let ds = b.build()?;

    let matrix = agreement_matrix(&ds)?;
    println!("pairwise alpha (upper triangle):");
    for (i, j, zone, cell) in matrix.defined_pairs() {
        println!(
            "  {:9} - {:9} [{:11}] alpha = {:+.3}",
            matrix.raters()[i].id,
            matrix.raters()[j].id,
            zone.as_str(),
            cell.alpha
        );
    }

    println!("\nzone summaries (random-rater pairs excluded):");
    for s in zone_summaries(&matrix, None) {
        println!(
            "  {:11} mean {:+.3} median {:+.3} over {} pairs",
            s.zone.as_str(),
            s.mean_alpha,
            s.median_alpha,
            s.pair_count
        );
    }

    // Exports shaped for external plotting.
    println!("\nCSV grid:\n{}", matrix.to_csv());
    println!("JSON cells (first 300 bytes):");
    let json = matrix.to_json()?;
    println!("{}...", &json[..json.len().min(300)]);
    Ok(())
}
