//! Agreegate measures agreement among human and model annotators of
//! software-engineering artifacts and decides, per task and per sample, how
//! much annotation effort can be safely delegated to a model rater.
//!
//! The pipeline has four stages:
//!
//! 1. **Agreement** — Krippendorff's alpha for nominal, ordinal, and interval
//!    scales with missing data, computed pairwise over shared samples and
//!    summarized by zone (human-human, human-model, model-model).
//! 2. **Gate** — the task-level rule: when mean model-model agreement clears
//!    a threshold (0.5 by default, strictly), one human rating per sample can
//!    be delegated everywhere; otherwise only high-confidence samples are.
//! 3. **Sweep** — simulation of replacing one human rating on a growing
//!    fraction of samples, ranked by model confidence or at random, tracking
//!    alpha with confidence intervals against a bootstrapped human-only
//!    baseline; the largest fraction whose interval still overlaps the
//!    baseline is the safe delegation fraction.
//! 4. **Effort** — what that fraction is worth, in ratings.
//!
//! A model-rater client (few-shot prompts, answer parsing, token-probability
//! confidence, cassette record/replay) produces the model answers, and every
//! stochastic step runs on seeded RNG streams so runs are reproducible
//! bit-for-bit.
//!
//! ```
//! use agreegate::{compute_alpha, DatasetBuilder, LabelScale, Rater};
//!
//! let mut b = DatasetBuilder::new(LabelScale::Nominal {
//!     labels: vec!["yes".into(), "no".into()],
//! });
//! b.add_rater(Rater::human("p1"))?;
//! b.add_rater(Rater::human("p2"))?;
//! for (sample, first, second) in [("s1", "yes", "yes"), ("s2", "no", "no"), ("s3", "yes", "no")] {
//!     b.add_annotation(sample, "p1", first, None)?;
//!     b.add_annotation(sample, "p2", second, None)?;
//! }
//! let alpha = compute_alpha(&b.build()?)?;
//! assert!(alpha.alpha < 1.0);
//! # Ok::<(), agreegate::Error>(())
//! ```
//!
//! The runnable examples under `examples/` walk through each capability;
//! the `agreegate` binary exposes the same pipeline as subcommands.

pub mod alpha;
pub mod dataset;
pub mod delegation;
pub mod error;
pub mod llm;
pub mod matrix;
pub mod report;
pub mod stats;

pub use alpha::{compute_alpha, compute_alpha_with, pairwise_alpha, AlphaOptions, AlphaResult};
pub use dataset::{
    load_csv_dataset, load_dataset, load_json_dataset, save_csv_dataset, save_json_dataset,
    Annotation, AnnotationDataset, DatasetBuilder, DatasetFormat, LabelScale, LoadedDataset,
    Rater, RaterKind, ScaleKind,
};
pub use delegation::{
    confidence_profile, default_fraction_grid, delegation_plan, effort_report, gate,
    majority_agreement_curve, max_safe_fraction, replacement_sweep, EffortReport, GateDecision,
    GateOutcome, MajorityPoint, ModelRatings, ProfilePoint, Strategy, SweepConfig, SweepCurve,
    SweepPoint,
};
pub use error::{Error, Result};
pub use matrix::{agreement_matrix, zone_summaries, AgreementMatrix, Zone, ZoneSummary};
pub use report::{sha256_file, validate_report_json, InputDigest, RunParameters, RunReport};
pub use stats::{bootstrap_alpha_ci, spearman, ConfidenceInterval, RngSeed, SpearmanResult};
