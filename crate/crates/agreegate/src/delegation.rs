//! The delegation workflow: gate on model-model agreement, one-rating
//! replacement sweeps, maximum safe delegation fraction, effort accounting,
//! confidence profiles, and majority-vote replaceability.
//!
//! The core rule: when the mean model-model alpha clears the threshold
//! (strictly), one human rating per sample can be replaced everywhere;
//! otherwise only samples where the model answers with high confidence are
//! delegated. Replacing more than one rating per sample is deliberately
//! unsupported, since model-model agreement would inflate the coefficient.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alpha::{alpha_from_units, pairwise_alpha_with, AlphaOptions};
use crate::dataset::{AnnotationDataset, Rater, RaterKind};
use crate::error::{Error, Result};
use crate::stats::{
    bootstrap_alpha_ci_with, sample_without_replacement, percentile_sorted, ConfidenceInterval,
    RngSeed, StreamDomain,
};

/// One rater's answers keyed by sample, with optional confidences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRatings {
    pub rater: Rater,
    labels: BTreeMap<String, String>,
    confidences: BTreeMap<String, f64>,
}

impl ModelRatings {
    pub fn new(rater: Rater) -> Self {
        ModelRatings {
            rater,
            labels: BTreeMap::new(),
            confidences: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, sample_id: impl Into<String>, label: impl Into<String>, confidence: Option<f64>) {
        let sample_id = sample_id.into();
        if let Some(c) = confidence {
            self.confidences.insert(sample_id.clone(), c);
        }
        self.labels.insert(sample_id, label.into());
    }

    /// Extract one rater's column from a dataset.
    pub fn from_dataset(ds: &AnnotationDataset, rater_id: &str) -> Result<Self> {
        let rater = ds
            .rater(rater_id)
            .ok_or_else(|| Error::UnknownRater(rater_id.to_string()))?
            .clone();
        let mut ratings = ModelRatings::new(rater);
        for a in ds.annotations().filter(|a| a.rater_id == rater_id) {
            ratings.insert(&a.sample_id, &a.label, a.confidence);
        }
        Ok(ratings)
    }

    pub fn label(&self, sample_id: &str) -> Option<&str> {
        self.labels.get(sample_id).map(|s| s.as_str())
    }

    pub fn confidence(&self, sample_id: &str) -> Option<f64> {
        self.confidences.get(sample_id).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Sample ids in ascending order.
    pub fn sample_ids(&self) -> impl Iterator<Item = &str> {
        self.labels.keys().map(|s| s.as_str())
    }
}

/// Outcome of the task-level gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateOutcome {
    /// Model-model agreement clears the threshold: one human rating per
    /// sample can be delegated on every sample.
    ReplaceOneRatingAllSamples,
    /// Delegate only where the model answers with high confidence.
    SelectiveHighConfidenceOnly,
}

/// Task-level gate decision with its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateDecision {
    pub mm_mean_alpha: f64,
    pub threshold: f64,
    pub outcome: GateOutcome,
}

impl GateDecision {
    /// The decision rule: strictly greater than the threshold.
    pub fn from_mean(mm_mean_alpha: f64, threshold: f64) -> Self {
        let outcome = if mm_mean_alpha > threshold {
            GateOutcome::ReplaceOneRatingAllSamples
        } else {
            GateOutcome::SelectiveHighConfidenceOnly
        };
        GateDecision {
            mm_mean_alpha,
            threshold,
            outcome,
        }
    }
}

/// Gate a task on the mean pairwise alpha over all model-model pairs of the
/// dataset. Needs at least two model raters and at least one computable pair.
pub fn gate(ds: &AnnotationDataset, threshold: f64) -> Result<GateDecision> {
    gate_with(ds, threshold, AlphaOptions::default())
}

pub fn gate_with(ds: &AnnotationDataset, threshold: f64, opts: AlphaOptions) -> Result<GateDecision> {
    let models: Vec<&Rater> = ds
        .raters()
        .iter()
        .filter(|r| r.kind == RaterKind::Model)
        .collect();
    if models.len() < 2 {
        return Err(Error::FewerThanTwoModels(models.len()));
    }
    let mut alphas = Vec::new();
    for i in 0..models.len() {
        for j in (i + 1)..models.len() {
            if let Some(r) = pairwise_alpha_with(ds, &models[i].id, &models[j].id, opts)? {
                alphas.push(r.alpha);
            }
        }
    }
    if alphas.is_empty() {
        return Err(Error::AllModelPairsUndefined);
    }
    let mean = alphas.iter().sum::<f64>() / alphas.len() as f64;
    Ok(GateDecision::from_mean(mean, threshold))
}

/// How the samples to delegate are selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Highest model confidence first, ties broken by sample id.
    ByConfidence,
    /// Uniform without replacement, redrawn each trial.
    Random,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::ByConfidence => "by_confidence",
            Strategy::Random => "random",
        }
    }
}

/// One point of a sweep curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub fraction: f64,
    pub mean_alpha: f64,
    pub ci: ConfidenceInterval,
    pub strategy: Strategy,
}

/// Delegation fraction versus agreement, with a human-only baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub points: Vec<SweepPoint>,
    pub baseline: ConfidenceInterval,
    pub trials_per_point: usize,
}

impl SweepCurve {
    /// `fraction,strategy,mean_alpha,ci_lower,ci_upper` rows for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fraction,strategy,mean_alpha,ci_lower,ci_upper\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.fraction,
                p.strategy.as_str(),
                p.mean_alpha,
                p.ci.lower,
                p.ci.upper
            ));
        }
        out
    }
}

/// Parameters of a replacement sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub fractions: Vec<f64>,
    pub strategy: Strategy,
    pub trials: usize,
    pub seed: RngSeed,
    pub bootstrap_iterations: usize,
    pub bootstrap_fraction: f64,
    pub level: f64,
}

impl SweepConfig {
    pub fn new(strategy: Strategy, seed: RngSeed) -> Self {
        SweepConfig {
            fractions: default_fraction_grid(),
            strategy,
            trials: 100,
            seed,
            bootstrap_iterations: 1000,
            bootstrap_fraction: 0.5,
            level: 0.95,
        }
    }
}

/// The default grid 0.0, 0.1, ..., 1.0.
pub fn default_fraction_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Number of samples selected at fraction `f` out of `n` (ceil, with a guard
/// against grid values like 0.1 * 400 landing epsilon above an integer).
fn selection_count(fraction: f64, n: usize) -> usize {
    (((fraction * n as f64) - 1e-9).ceil().max(0.0) as usize).min(n)
}

/// Simulate replacing one human rating per selected sample with the model's
/// answer, over a grid of delegation fractions.
///
/// Per fraction, `trials` modified datasets are scored: the selected samples
/// (top-confidence or uniformly random) each get one uniformly chosen
/// existing human rating overwritten with the model label, and alpha is
/// recomputed. The per-trial replacement positions are seeded independently
/// of the selection draws, so both strategies see identical replacements at
/// fraction 1. The fraction-0 point is the unmodified dataset's alpha and
/// consumes no randomness.
pub fn replacement_sweep(
    human_ds: &AnnotationDataset,
    model: &ModelRatings,
    cfg: &SweepConfig,
) -> Result<SweepCurve> {
    replacement_sweep_with(human_ds, model, cfg, AlphaOptions::default())
}

pub fn replacement_sweep_with(
    human_ds: &AnnotationDataset,
    model: &ModelRatings,
    cfg: &SweepConfig,
    opts: AlphaOptions,
) -> Result<SweepCurve> {
    validate_fraction_grid(&cfg.fractions)?;
    if cfg.trials < 1 {
        return Err(Error::InvalidParameter {
            name: "trials".into(),
            message: "must be at least 1".into(),
        });
    }
    let (scope, scoped_samples) = human_scope(human_ds)?;
    let n = scoped_samples.len();
    for sid in &scoped_samples {
        if model.label(sid).is_none() {
            return Err(Error::MissingModelAnswer(sid.to_string()));
        }
        if cfg.strategy == Strategy::ByConfidence && model.confidence(sid).is_none() {
            return Err(Error::MissingConfidence(sid.to_string()));
        }
    }

    let baseline = bootstrap_alpha_ci_with(
        &scope,
        cfg.bootstrap_fraction,
        cfg.bootstrap_iterations,
        cfg.level,
        cfg.seed,
        opts,
    )?;

    // Pre-index every unit's labels once; trials only swap one entry per
    // selected sample.
    let base_units: Vec<Vec<&str>> = scoped_samples
        .iter()
        .map(|sid| {
            scope
                .ratings_for_sample(sid)
                .iter()
                .map(|a| a.label.as_str())
                .collect()
        })
        .collect();
    let model_labels: Vec<&str> = scoped_samples
        .iter()
        .map(|sid| model.label(sid).expect("checked above"))
        .collect();

    // Confidence ranking is fixed across trials and fractions; descending
    // confidence with ascending-id tie-break makes selections nested.
    let confidence_order: Vec<usize> = if cfg.strategy == Strategy::ByConfidence {
        confidence_ranking(model, &scoped_samples)?
    } else {
        Vec::new()
    };

    let mut points = Vec::with_capacity(cfg.fractions.len());
    for (point_idx, &fraction) in cfg.fractions.iter().enumerate() {
        if fraction == 0.0 {
            points.push(SweepPoint {
                fraction,
                mean_alpha: baseline.point,
                ci: ConfidenceInterval::degenerate(baseline.point, cfg.level),
                strategy: cfg.strategy,
            });
            continue;
        }
        let count = selection_count(fraction, n);
        let alphas: Vec<f64> = (0..cfg.trials)
            .into_par_iter()
            .filter_map(|trial| {
                let payload = ((point_idx as u64) << 20) | trial as u64;
                let mut selected: Vec<usize> = match cfg.strategy {
                    Strategy::ByConfidence => confidence_order[..count].to_vec(),
                    Strategy::Random => {
                        let mut rng = cfg.seed.stream_rng(StreamDomain::SweepSelect, payload);
                        sample_without_replacement(n, count, &mut rng)
                    }
                };
                // Canonical order so position draws are strategy-independent
                // whenever the selected sets coincide.
                selected.sort_unstable();
                let mut pos_rng = cfg.seed.stream_rng(StreamDomain::SweepPosition, payload);
                let mut units = base_units.clone();
                for &u in &selected {
                    let m = units[u].len();
                    let slot = if m == 1 {
                        0
                    } else {
                        use rand::Rng;
                        pos_rng.random_range(0..m)
                    };
                    units[u][slot] = model_labels[u];
                }
                alpha_from_units(&units, scope.scale(), opts).ok().map(|r| r.alpha)
            })
            .collect();
        if alphas.is_empty() {
            return Err(Error::AllIterationsDegenerate(cfg.trials));
        }
        let mean = alphas.iter().sum::<f64>() / alphas.len() as f64;
        let mut sorted = alphas;
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let tail = (1.0 - cfg.level) / 2.0;
        points.push(SweepPoint {
            fraction,
            mean_alpha: mean,
            ci: ConfidenceInterval {
                lower: percentile_sorted(&sorted, tail),
                upper: percentile_sorted(&sorted, 1.0 - tail),
                level: cfg.level,
                point: mean,
            },
            strategy: cfg.strategy,
        });
    }

    Ok(SweepCurve {
        points,
        baseline,
        trials_per_point: cfg.trials,
    })
}

/// Human-rater restriction plus the in-scope sample ids (those with at least
/// one human rating), ascending.
fn human_scope(human_ds: &AnnotationDataset) -> Result<(AnnotationDataset, Vec<String>)> {
    let scope = human_ds.subset_by_kind(RaterKind::Human)?;
    let mut scoped: Vec<String> = scope
        .samples()
        .iter()
        .filter(|s| !scope.ratings_for_sample(s).is_empty())
        .cloned()
        .collect();
    scoped.sort_unstable();
    if scoped.is_empty() {
        return Err(Error::NoPairableData);
    }
    Ok((scope, scoped))
}

/// Indices of `samples` ordered by descending confidence, ascending id.
fn confidence_ranking(model: &ModelRatings, samples: &[String]) -> Result<Vec<usize>> {
    for sid in samples {
        if model.confidence(sid).is_none() {
            return Err(Error::MissingConfidence(sid.clone()));
        }
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| {
        let ca = model.confidence(&samples[a]).unwrap();
        let cb = model.confidence(&samples[b]).unwrap();
        cb.partial_cmp(&ca)
            .unwrap()
            .then_with(|| samples[a].cmp(&samples[b]))
    });
    Ok(order)
}

/// The samples the by-confidence strategy delegates at `fraction`: the top
/// `ceil(fraction * n)` in-scope samples by descending model confidence,
/// ties broken by ascending sample id. Plans at growing fractions are
/// nested, so a sample delegated at some fraction stays delegated at every
/// larger one.
pub fn delegation_plan(
    human_ds: &AnnotationDataset,
    model: &ModelRatings,
    fraction: f64,
) -> Result<Vec<String>> {
    if !(0.0..=1.0).contains(&fraction) || fraction.is_nan() {
        return Err(Error::InvalidParameter {
            name: "fraction".into(),
            message: format!("must be in [0, 1], got {fraction}"),
        });
    }
    let (_, scoped) = human_scope(human_ds)?;
    for sid in &scoped {
        if model.label(sid).is_none() {
            return Err(Error::MissingModelAnswer(sid.clone()));
        }
    }
    let order = confidence_ranking(model, &scoped)?;
    let count = selection_count(fraction, scoped.len());
    Ok(order[..count].iter().map(|&i| scoped[i].clone()).collect())
}

fn validate_fraction_grid(fractions: &[f64]) -> Result<()> {
    if fractions.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "fractions".into(),
            message: "grid needs at least two fractions".into(),
        });
    }
    for f in fractions {
        if !(0.0..=1.0).contains(f) || f.is_nan() {
            return Err(Error::InvalidParameter {
                name: "fractions".into(),
                message: format!("fraction {f} outside [0, 1]"),
            });
        }
    }
    if !fractions.contains(&0.0) || !fractions.contains(&1.0) {
        return Err(Error::InvalidParameter {
            name: "fractions".into(),
            message: "grid must include 0 and 1".into(),
        });
    }
    Ok(())
}

/// Largest grid fraction whose prefix of sweep intervals all overlap the
/// baseline interval. Returns 0 as soon as a point separates.
pub fn max_safe_fraction(curve: &SweepCurve) -> Result<f64> {
    if curve.points.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "curve".into(),
            message: "needs at least two points".into(),
        });
    }
    let mut points: Vec<&SweepPoint> = curve.points.iter().collect();
    points.sort_by(|a, b| a.fraction.partial_cmp(&b.fraction).unwrap());
    let mut safe = 0.0;
    for p in points {
        if p.ci.overlaps(&curve.baseline) {
            safe = p.fraction;
        } else {
            break;
        }
    }
    Ok(safe)
}

/// Effort accounting for one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffortReport {
    pub ratings_per_sample: usize,
    pub safe_fraction: f64,
    /// Share of one rating's effort saved: `100 * f`.
    pub one_rating_saved_pct: f64,
    /// Share of the whole study's rating effort saved: `100 * f / k`.
    pub overall_saved_pct: f64,
}

impl EffortReport {
    /// Rounded display value for the one-rating column (half-up, 1 decimal).
    pub fn display_one_rating_pct(&self) -> f64 {
        round_half_up(self.one_rating_saved_pct, 1)
    }

    /// Rounded display value for the overall column. The per-rating share
    /// `100/k` is rounded to a whole percent before applying the fraction,
    /// then shown half-up at one decimal.
    pub fn display_overall_pct(&self) -> f64 {
        let per_rating = round_half_up(100.0 / self.ratings_per_sample as f64, 0);
        round_half_up(self.safe_fraction * per_rating, 1)
    }
}

pub(crate) fn round_half_up(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale + 0.5).floor() / scale
}

/// Effort saved when one rating on a `safe_fraction` share of samples is
/// delegated, out of `k` ratings per sample.
pub fn effort_report(ratings_per_sample: usize, safe_fraction: f64) -> Result<EffortReport> {
    if ratings_per_sample < 1 {
        return Err(Error::InvalidParameter {
            name: "ratings_per_sample".into(),
            message: "must be at least 1".into(),
        });
    }
    if !(0.0..=1.0).contains(&safe_fraction) || safe_fraction.is_nan() {
        return Err(Error::InvalidParameter {
            name: "safe_fraction".into(),
            message: format!("must be in [0, 1], got {safe_fraction}"),
        });
    }
    let one_rating_saved_pct = 100.0 * safe_fraction;
    let overall_saved_pct = one_rating_saved_pct / ratings_per_sample as f64;
    Ok(EffortReport {
        ratings_per_sample,
        safe_fraction,
        one_rating_saved_pct,
        overall_saved_pct,
    })
}

/// Confidence value at each percentile of the answers sorted by descending
/// confidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub fraction: f64,
    pub confidence: f64,
}

pub fn confidence_profile(model: &ModelRatings) -> Result<Vec<ProfilePoint>> {
    let mut entries: Vec<(&str, f64)> = Vec::with_capacity(model.len());
    for sid in model.sample_ids() {
        let c = model
            .confidence(sid)
            .ok_or_else(|| Error::MissingConfidence(sid.to_string()))?;
        entries.push((sid, c));
    }
    entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    let total = entries.len() as f64;
    Ok(entries
        .iter()
        .enumerate()
        .map(|(i, (_, c))| ProfilePoint {
            fraction: (i + 1) as f64 / total,
            confidence: *c,
        })
        .collect())
}

/// Cumulative share of samples where the model matches the strict human
/// majority, walking samples in descending model confidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorityPoint {
    pub fraction: f64,
    pub share: f64,
}

/// Strict majority: the model label must match more than half of that
/// sample's human ratings. Ties (for example a 1-1 split across two raters)
/// leave no strict majority, so the model scores as not agreeing.
pub fn majority_agreement_curve(
    human_ds: &AnnotationDataset,
    model: &ModelRatings,
) -> Result<Vec<MajorityPoint>> {
    let scope = human_ds.subset_by_kind(RaterKind::Human)?;
    let mut entries: Vec<(&str, f64, bool)> = Vec::new();
    let mut sample_ids: Vec<&str> = scope.samples().iter().map(|s| s.as_str()).collect();
    sample_ids.sort_unstable();
    for sid in sample_ids {
        let ratings = scope.ratings_for_sample(sid);
        if ratings.len() < 2 {
            continue;
        }
        let label = model
            .label(sid)
            .ok_or_else(|| Error::MissingModelAnswer(sid.to_string()))?;
        let confidence = model
            .confidence(sid)
            .ok_or_else(|| Error::MissingConfidence(sid.to_string()))?;
        let matches = ratings.iter().filter(|a| a.label == label).count();
        let agrees = 2 * matches > ratings.len();
        entries.push((sid, confidence, agrees));
    }
    if entries.is_empty() {
        return Err(Error::NoPairableData);
    }
    entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    let total = entries.len() as f64;
    let mut agree_so_far = 0usize;
    Ok(entries
        .iter()
        .enumerate()
        .map(|(i, (_, _, agrees))| {
            if *agrees {
                agree_so_far += 1;
            }
            MajorityPoint {
                fraction: (i + 1) as f64 / total,
                share: agree_so_far as f64 / (i + 1) as f64,
            }
        })
        .collect())
}
