//! Rank correlation between model-model and human-model agreement across
//! tasks: the signal behind the gate. Model-model agreement is free to
//! compute, so a strong correlation makes it a useful proxy for whether
//! models will track humans on a task.
//!
//! ```text
//! cargo run --example spearman_correlation
//! ```

use agreegate::{spearman, Result, RngSeed};

fn main() -> Result<()> {
    // Mean agreements per task, as produced by `zone_summaries` on ten
    // annotation tasks (model-model vs human-model).
    let tasks = [
        ("accuracy", 0.76, 0.48),
        ("adequacy", 0.74, 0.41),
        ("conciseness", 0.74, 0.21),
        ("similarity", 0.68, 0.44),
        ("name-value", 0.66, 0.49),
        ("causality", 0.39, 0.22),
        ("goals", 0.82, 0.77),
        ("operations", 0.77, 0.67),
        ("effects", 0.69, 0.64),
        ("static-analysis", 0.12, 0.15),
    ];
    let mm: Vec<f64> = tasks.iter().map(|t| t.1).collect();
    let hm: Vec<f64> = tasks.iter().map(|t| t.2).collect();

    println!("task              model-model  human-model");
    for (name, mm, hm) in &tasks {
        println!("{name:17} {mm:>11.2}  {hm:>11.2}");
    }

    let result = spearman(&mm, &hm, RngSeed(20240), 10_000)?;
    println!(
        "\nSpearman rho = {:.4} over {} tasks, two-sided permutation p = {:.4}",
        result.rho, result.n, result.p_value
    );
    if result.p_value < 0.05 {
        println!("model-model agreement is a significant predictor of human-model agreement");
    }
    Ok(())
}
