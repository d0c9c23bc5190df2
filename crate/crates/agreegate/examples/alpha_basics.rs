//! Agreement coefficients on the three scale kinds, including missing data
//! and pairwise computation over shared samples.
//!
//! ```text
//! cargo run --example alpha_basics
//! ```

use agreegate::{compute_alpha, pairwise_alpha, DatasetBuilder, LabelScale, Rater, Result};

fn main() -> Result<()> {
    // Nominal: two raters in systematic disagreement.
    let mut b = DatasetBuilder::new(LabelScale::Nominal {
        labels: vec!["a".into(), "b".into()],
    });
    b.add_rater(Rater::human("r1"))?;
    b.add_rater(Rater::human("r2"))?;
    for (i, (x, y)) in [("a", "b"), ("b", "a"), ("a", "b"), ("b", "a")].iter().enumerate() {
        b.add_annotation(&format!("s{i}"), "r1", x, None)?;
        b.add_annotation(&format!("s{i}"), "r2", y, None)?;
    }
    let nominal = compute_alpha(&b.build()?)?;
    println!(
        "nominal, systematic disagreement: alpha = {:.4} (D_o {:.4}, D_e {:.4})",
        nominal.alpha, nominal.observed_disagreement, nominal.expected_disagreement
    );

    // Ordinal: a Likert-style scale; distances come from the observed
    // marginal distribution, not from raw rank indices.
    let likert = LabelScale::Ordinal {
        labels: vec!["1".into(), "2".into(), "3".into(), "4".into(), "5".into()],
    };
    let mut b = DatasetBuilder::new(likert);
    b.add_rater(Rater::human("r1"))?;
    b.add_rater(Rater::human("r2"))?;
    let ratings = [("1", "2"), ("2", "2"), ("4", "5"), ("5", "5"), ("3", "3"), ("2", "1")];
    for (i, (x, y)) in ratings.iter().enumerate() {
        b.add_annotation(&format!("s{i}"), "r1", x, None)?;
        b.add_annotation(&format!("s{i}"), "r2", y, None)?;
    }
    let ordinal = compute_alpha(&b.build()?)?;
    println!("ordinal, near agreement:          alpha = {:.4}", ordinal.alpha);

    // Interval with a missing cell: units with fewer than two ratings are
    // simply excluded.
    let mut b = DatasetBuilder::new(LabelScale::Interval { min: 0.0, max: 10.0 });
    b.add_rater(Rater::human("r1"))?;
    b.add_rater(Rater::human("r2"))?;
    b.add_rater(Rater::human("r3"))?;
    for (sample, rater, value) in [
        ("s0", "r1", "2.0"), ("s0", "r2", "2.5"), ("s0", "r3", "2.0"),
        ("s1", "r1", "7.0"), ("s1", "r2", "6.5"),
        ("s2", "r3", "4.0"), // single rating: not pairable
    ] {
        b.add_annotation(sample, rater, value, None)?;
    }
    let ds = b.build()?;
    let interval = compute_alpha(&ds)?;
    println!(
        "interval with missing cells:      alpha = {:.4} over {} units",
        interval.alpha, interval.units_used
    );

    // Pairwise agreement uses only the samples both raters annotated.
    match pairwise_alpha(&ds, "r1", "r2")? {
        Some(pair) => println!(
            "pairwise r1-r2 (shared samples):  alpha = {:.4} over {} units",
            pair.alpha, pair.units_used
        ),
        None => println!("pairwise r1-r2: no computable overlap"),
    }
    Ok(())
}
