//! Annotation data model: label scales, raters, and the samples-by-raters
//! matrix of optional labels that every downstream computation consumes.
//!
//! Datasets are sparse by design: a rater may annotate any subset of the
//! samples. Sample ids and rater ids are opaque strings with no ordering
//! semantics.

mod io;

pub use io::{
    dataset_to_csv_string, dataset_to_json_string, load_csv_dataset, load_dataset,
    load_json_dataset, save_csv_dataset, save_json_dataset, DatasetFormat, LoadedDataset,
};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Measurement scale of a dataset's labels.
///
/// Ordinal labels carry a total order given by list position. Interval labels
/// are decimal numbers within a closed range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LabelScale {
    Nominal { labels: Vec<String> },
    Ordinal { labels: Vec<String> },
    Interval { min: f64, max: f64 },
}

/// Scale kind without the label payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleKind {
    Nominal,
    Ordinal,
    Interval,
}

impl LabelScale {
    pub fn kind(&self) -> ScaleKind {
        match self {
            LabelScale::Nominal { .. } => ScaleKind::Nominal,
            LabelScale::Ordinal { .. } => ScaleKind::Ordinal,
            LabelScale::Interval { .. } => ScaleKind::Interval,
        }
    }

    /// Admissible labels for nominal/ordinal scales, in rank order.
    pub fn labels(&self) -> Option<&[String]> {
        match self {
            LabelScale::Nominal { labels } | LabelScale::Ordinal { labels } => Some(labels),
            LabelScale::Interval { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LabelScale::Nominal { labels } | LabelScale::Ordinal { labels } => {
                if labels.is_empty() {
                    return Err(Error::schema("scale", "label list must be non-empty"));
                }
                let distinct: BTreeSet<&String> = labels.iter().collect();
                if distinct.len() != labels.len() {
                    return Err(Error::schema("scale", "labels must be pairwise distinct"));
                }
                Ok(())
            }
            LabelScale::Interval { min, max } => {
                if min.partial_cmp(max) != Some(std::cmp::Ordering::Less) {
                    return Err(Error::schema(
                        "scale",
                        format!("interval range requires min < max, got [{min}, {max}]"),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Load a sidecar scale definition from JSON.
    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let scale: LabelScale = serde_json::from_str(&text)?;
        scale.validate()?;
        Ok(scale)
    }

    /// Check a raw label against the scale and return its canonical form.
    ///
    /// Nominal/ordinal labels must match a declared label exactly. Interval
    /// labels are parsed as decimal numbers, range-checked, and normalized to
    /// the shortest representation of the parsed value (so `1.50` and `1.5`
    /// denote the same value).
    pub fn canonicalize(&self, raw: &str, location: &str) -> Result<String> {
        match self {
            LabelScale::Nominal { labels } | LabelScale::Ordinal { labels } => {
                if labels.iter().any(|l| l == raw) {
                    Ok(raw.to_string())
                } else {
                    Err(Error::schema(
                        location,
                        format!("label '{raw}' is not in the scale {labels:?}"),
                    ))
                }
            }
            LabelScale::Interval { min, max } => {
                let value: f64 = raw.trim().parse().map_err(|_| {
                    Error::schema(location, format!("label '{raw}' is not a decimal number"))
                })?;
                if !value.is_finite() || value < *min || value > *max {
                    return Err(Error::schema(
                        location,
                        format!("label {value} outside the interval range [{min}, {max}]"),
                    ));
                }
                Ok(format!("{value}"))
            }
        }
    }

    /// Rank position of an ordinal/nominal label, if declared.
    pub fn rank_of(&self, label: &str) -> Option<usize> {
        self.labels()?.iter().position(|l| l == label)
    }

    /// Numeric value of an interval label (canonical form parses exactly).
    pub fn numeric_value(&self, label: &str) -> Option<f64> {
        match self {
            LabelScale::Interval { .. } => label.parse().ok(),
            _ => None,
        }
    }
}

/// Who produced an annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RaterKind {
    Human,
    Model,
    Random,
}

impl RaterKind {
    pub fn parse(s: &str) -> Option<RaterKind> {
        match s {
            "human" => Some(RaterKind::Human),
            "model" => Some(RaterKind::Model),
            "random" => Some(RaterKind::Random),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RaterKind::Human => "human",
            RaterKind::Model => "model",
            RaterKind::Random => "random",
        }
    }
}

/// A rater identity. Ids are unique within a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rater {
    pub id: String,
    pub kind: RaterKind,
    pub display_name: String,
}

impl Rater {
    pub fn new(id: impl Into<String>, kind: RaterKind) -> Self {
        let id = id.into();
        Rater {
            display_name: id.clone(),
            id,
            kind,
        }
    }

    pub fn human(id: impl Into<String>) -> Self {
        Rater::new(id, RaterKind::Human)
    }

    pub fn model(id: impl Into<String>) -> Self {
        Rater::new(id, RaterKind::Model)
    }

    pub fn random(id: impl Into<String>) -> Self {
        Rater::new(id, RaterKind::Random)
    }
}

/// One cell of the samples-by-raters matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub sample_id: String,
    pub rater_id: String,
    /// Canonical label (scale-validated).
    pub label: String,
    /// Optional answer probability in [0, 1].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub confidence: Option<f64>,
}

/// A validated, immutable annotation dataset.
///
/// Construction goes through [`DatasetBuilder`] or the loaders in this
/// module; once built, the value is safe to share read-only across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationDataset {
    scale: LabelScale,
    raters: Vec<Rater>,
    samples: Vec<String>,
    rater_index: HashMap<String, usize>,
    sample_index: HashMap<String, usize>,
    /// Keyed by (sample index, rater index); sample-major iteration order.
    annotations: BTreeMap<(usize, usize), Annotation>,
    ratings_per_sample: usize,
}

impl AnnotationDataset {
    pub fn scale(&self) -> &LabelScale {
        &self.scale
    }

    pub fn raters(&self) -> &[Rater] {
        &self.raters
    }

    pub fn samples(&self) -> &[String] {
        &self.samples
    }

    /// Study design parameter k: intended number of ratings per sample.
    pub fn ratings_per_sample(&self) -> usize {
        self.ratings_per_sample
    }

    pub fn set_ratings_per_sample(&mut self, k: usize) {
        self.ratings_per_sample = k.max(1);
    }

    pub fn rater(&self, id: &str) -> Option<&Rater> {
        self.rater_index.get(id).map(|&i| &self.raters[i])
    }

    pub fn rater_position(&self, id: &str) -> Option<usize> {
        self.rater_index.get(id).copied()
    }

    pub fn annotation(&self, sample_id: &str, rater_id: &str) -> Option<&Annotation> {
        let s = *self.sample_index.get(sample_id)?;
        let r = *self.rater_index.get(rater_id)?;
        self.annotations.get(&(s, r))
    }

    /// All annotations in sample-major, rater-minor order.
    pub fn annotations(&self) -> impl Iterator<Item = &Annotation> {
        self.annotations.values()
    }

    pub fn annotation_count(&self) -> usize {
        self.annotations.len()
    }

    /// Annotations on one sample, in rater order.
    pub fn ratings_for_sample(&self, sample_id: &str) -> Vec<&Annotation> {
        match self.sample_index.get(sample_id) {
            Some(&s) => self
                .annotations
                .range((s, 0)..(s + 1, 0))
                .map(|(_, a)| a)
                .collect(),
            None => Vec::new(),
        }
    }

    /// Restrict the dataset to the given raters. Samples are retained even
    /// when they end up with zero annotations.
    pub fn subset_by_raters(&self, rater_ids: &BTreeSet<String>) -> Result<AnnotationDataset> {
        for id in rater_ids {
            if !self.rater_index.contains_key(id) {
                return Err(Error::UnknownRater(id.clone()));
            }
        }
        let kept: Vec<Rater> = self
            .raters
            .iter()
            .filter(|r| rater_ids.contains(&r.id))
            .cloned()
            .collect();
        let mut builder = DatasetBuilder::new(self.scale.clone());
        for r in kept {
            builder.add_rater(r)?;
        }
        for s in &self.samples {
            builder.add_sample(s);
        }
        for a in self.annotations.values() {
            if rater_ids.contains(&a.rater_id) {
                builder.add_annotation(&a.sample_id, &a.rater_id, &a.label, a.confidence)?;
            }
        }
        builder.ratings_per_sample(self.ratings_per_sample);
        builder.build()
    }

    /// Restrict to raters of one kind.
    pub fn subset_by_kind(&self, kind: RaterKind) -> Result<AnnotationDataset> {
        let ids: BTreeSet<String> = self
            .raters
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.id.clone())
            .collect();
        self.subset_by_raters(&ids)
    }

    /// Union of two datasets over the same scale. Rater ids must be disjoint.
    pub fn merge(&self, other: &AnnotationDataset) -> Result<AnnotationDataset> {
        if self.scale != other.scale {
            return Err(Error::schema("merge", "datasets use different scales"));
        }
        let mut builder = DatasetBuilder::new(self.scale.clone());
        for r in &self.raters {
            builder.add_rater(r.clone())?;
        }
        for r in &other.raters {
            if self.rater_index.contains_key(&r.id) {
                return Err(Error::schema(
                    "merge",
                    format!("rater '{}' present in both datasets", r.id),
                ));
            }
            builder.add_rater(r.clone())?;
        }
        for s in self.samples.iter().chain(other.samples.iter()) {
            builder.add_sample(s);
        }
        for a in self.annotations.values().chain(other.annotations.values()) {
            builder.add_annotation(&a.sample_id, &a.rater_id, &a.label, a.confidence)?;
        }
        builder.ratings_per_sample(self.ratings_per_sample);
        builder.build()
    }
}

/// Incremental, validating constructor for [`AnnotationDataset`].
#[derive(Debug)]
pub struct DatasetBuilder {
    scale: LabelScale,
    raters: Vec<Rater>,
    samples: Vec<String>,
    rater_index: HashMap<String, usize>,
    sample_index: HashMap<String, usize>,
    annotations: BTreeMap<(usize, usize), Annotation>,
    ratings_per_sample: Option<usize>,
    warnings: Vec<String>,
    warned_confidence_raters: BTreeSet<String>,
}

impl DatasetBuilder {
    pub fn new(scale: LabelScale) -> Self {
        DatasetBuilder {
            scale,
            raters: Vec::new(),
            samples: Vec::new(),
            rater_index: HashMap::new(),
            sample_index: HashMap::new(),
            annotations: BTreeMap::new(),
            ratings_per_sample: None,
            warnings: Vec::new(),
            warned_confidence_raters: BTreeSet::new(),
        }
    }

    pub fn add_rater(&mut self, rater: Rater) -> Result<&mut Self> {
        if self.rater_index.contains_key(&rater.id) {
            return Err(Error::schema(
                format!("rater '{}'", rater.id),
                "rater ids must be unique within a dataset",
            ));
        }
        self.rater_index.insert(rater.id.clone(), self.raters.len());
        self.raters.push(rater);
        Ok(self)
    }

    /// Register a sample id; idempotent.
    pub fn add_sample(&mut self, sample_id: &str) -> &mut Self {
        if !self.sample_index.contains_key(sample_id) {
            self.sample_index
                .insert(sample_id.to_string(), self.samples.len());
            self.samples.push(sample_id.to_string());
        }
        self
    }

    /// Add one annotation. The rater must have been registered; unknown
    /// samples are registered on the fly.
    pub fn add_annotation(
        &mut self,
        sample_id: &str,
        rater_id: &str,
        label: &str,
        confidence: Option<f64>,
    ) -> Result<&mut Self> {
        let rater_pos = *self
            .rater_index
            .get(rater_id)
            .ok_or_else(|| Error::UnknownRater(rater_id.to_string()))?;
        let location = format!("cell (sample '{sample_id}', rater '{rater_id}')");
        let label = self.scale.canonicalize(label, &location)?;
        if let Some(c) = confidence {
            if !(0.0..=1.0).contains(&c) || c.is_nan() {
                return Err(Error::schema(
                    location,
                    format!("confidence {c} outside [0, 1]"),
                ));
            }
            if self.raters[rater_pos].kind == RaterKind::Human
                && self.warned_confidence_raters.insert(rater_id.to_string())
            {
                self.warnings.push(format!(
                    "human rater '{rater_id}' carries confidence values (first seen on sample '{sample_id}')"
                ));
            }
        }
        self.add_sample(sample_id);
        let sample_pos = self.sample_index[sample_id];
        let key = (sample_pos, rater_pos);
        if self.annotations.contains_key(&key) {
            return Err(Error::DuplicateCell {
                sample_id: sample_id.to_string(),
                rater_id: rater_id.to_string(),
            });
        }
        self.annotations.insert(
            key,
            Annotation {
                sample_id: sample_id.to_string(),
                rater_id: rater_id.to_string(),
                label,
                confidence,
            },
        );
        Ok(self)
    }

    /// Set the study design parameter k explicitly.
    pub fn ratings_per_sample(&mut self, k: usize) -> &mut Self {
        self.ratings_per_sample = Some(k.max(1));
        self
    }

    /// Warnings accumulated so far (e.g. confidence on human raters).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn build(self) -> Result<AnnotationDataset> {
        self.scale.validate()?;
        let ratings_per_sample = self
            .ratings_per_sample
            .unwrap_or_else(|| infer_ratings_per_sample(&self.annotations, &self.raters));
        Ok(AnnotationDataset {
            scale: self.scale,
            raters: self.raters,
            samples: self.samples,
            rater_index: self.rater_index,
            sample_index: self.sample_index,
            annotations: self.annotations,
            ratings_per_sample,
        })
    }
}

/// Modal count of human ratings per sample; falls back to all-rater counts,
/// then to 1. Ties resolve to the larger count.
fn infer_ratings_per_sample(
    annotations: &BTreeMap<(usize, usize), Annotation>,
    raters: &[Rater],
) -> usize {
    let mode_of = |want_human_only: bool| -> Option<usize> {
        let mut per_sample: BTreeMap<usize, usize> = BTreeMap::new();
        for (sample, rater) in annotations.keys() {
            if want_human_only && raters[*rater].kind != RaterKind::Human {
                continue;
            }
            *per_sample.entry(*sample).or_insert(0) += 1;
        }
        let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
        for count in per_sample.values() {
            *freq.entry(*count).or_insert(0) += 1;
        }
        freq.into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .map(|(count, _)| count)
    };
    mode_of(true).or_else(|| mode_of(false)).unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_scale() -> LabelScale {
        LabelScale::Nominal {
            labels: vec!["agree".into(), "disagree".into()],
        }
    }

    fn toy_dataset() -> AnnotationDataset {
        let mut b = DatasetBuilder::new(toy_scale());
        b.add_rater(Rater::human("h1")).unwrap();
        b.add_rater(Rater::human("h2")).unwrap();
        b.add_rater(Rater::model("m1")).unwrap();
        b.add_annotation("s1", "h1", "agree", None).unwrap();
        b.add_annotation("s1", "h2", "disagree", None).unwrap();
        b.add_annotation("s2", "h1", "agree", None).unwrap();
        b.add_annotation("s1", "m1", "agree", Some(0.9)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn rejects_unknown_label() {
        let mut b = DatasetBuilder::new(toy_scale());
        b.add_rater(Rater::human("h1")).unwrap();
        let err = b.add_annotation("s1", "h1", "maybe", None).unwrap_err();
        assert!(matches!(err, Error::Schema { .. }), "{err}");
    }

    #[test]
    fn rejects_duplicate_cell() {
        let mut b = DatasetBuilder::new(toy_scale());
        b.add_rater(Rater::human("h1")).unwrap();
        b.add_annotation("s1", "h1", "agree", None).unwrap();
        let err = b.add_annotation("s1", "h1", "disagree", None).unwrap_err();
        assert!(matches!(err, Error::DuplicateCell { .. }), "{err}");
    }

    #[test]
    fn rejects_duplicate_rater_id() {
        let mut b = DatasetBuilder::new(toy_scale());
        b.add_rater(Rater::human("h1")).unwrap();
        assert!(b.add_rater(Rater::model("h1")).is_err());
    }

    #[test]
    fn confidence_on_human_is_warning_not_error() {
        let mut b = DatasetBuilder::new(toy_scale());
        b.add_rater(Rater::human("h1")).unwrap();
        b.add_annotation("s1", "h1", "agree", Some(0.5)).unwrap();
        b.add_annotation("s2", "h1", "agree", Some(0.6)).unwrap();
        assert_eq!(b.warnings().len(), 1);
    }

    #[test]
    fn confidence_out_of_range_rejected() {
        let mut b = DatasetBuilder::new(toy_scale());
        b.add_rater(Rater::model("m1")).unwrap();
        assert!(b.add_annotation("s1", "m1", "agree", Some(1.5)).is_err());
    }

    #[test]
    fn interval_labels_canonicalized() {
        let scale = LabelScale::Interval { min: 1.0, max: 5.0 };
        assert_eq!(scale.canonicalize("2.50", "t").unwrap(), "2.5");
        assert_eq!(scale.canonicalize("3", "t").unwrap(), "3");
        assert!(scale.canonicalize("7", "t").is_err());
        assert!(scale.canonicalize("abc", "t").is_err());
    }

    #[test]
    fn interval_scale_requires_min_below_max() {
        let scale = LabelScale::Interval { min: 5.0, max: 5.0 };
        assert!(scale.validate().is_err());
    }

    #[test]
    fn subset_identity_on_all_raters() {
        let ds = toy_dataset();
        let all: BTreeSet<String> = ds.raters().iter().map(|r| r.id.clone()).collect();
        let sub = ds.subset_by_raters(&all).unwrap();
        assert_eq!(sub, ds);
    }

    #[test]
    fn subset_single_rater_caps_annotations_per_sample() {
        let ds = toy_dataset();
        let one: BTreeSet<String> = ["h1".to_string()].into();
        let sub = ds.subset_by_raters(&one).unwrap();
        for s in sub.samples() {
            assert!(sub.ratings_for_sample(s).len() <= 1);
        }
        // Samples with zero remaining annotations stay present.
        assert_eq!(sub.samples(), ds.samples());
    }

    #[test]
    fn subset_unknown_rater_rejected() {
        let ds = toy_dataset();
        let ids: BTreeSet<String> = ["ghost".to_string()].into();
        assert!(matches!(
            ds.subset_by_raters(&ids),
            Err(Error::UnknownRater(_))
        ));
    }

    #[test]
    fn subset_union_is_union_of_subsets() {
        let ds = toy_dataset();
        let r1: BTreeSet<String> = ["h1".to_string()].into();
        let r2: BTreeSet<String> = ["h2".to_string(), "m1".to_string()].into();
        let both: BTreeSet<String> = r1.union(&r2).cloned().collect();
        let sub_union = ds.subset_by_raters(&both).unwrap();
        let sub1 = ds.subset_by_raters(&r1).unwrap();
        let sub2 = ds.subset_by_raters(&r2).unwrap();
        let mut collected: Vec<&Annotation> =
            sub1.annotations().chain(sub2.annotations()).collect();
        let mut expected: Vec<&Annotation> = sub_union.annotations().collect();
        let key = |a: &&Annotation| (a.sample_id.clone(), a.rater_id.clone());
        collected.sort_by_key(key);
        expected.sort_by_key(key);
        assert_eq!(collected, expected);
    }

    #[test]
    fn ratings_per_sample_inferred_from_human_mode() {
        let ds = toy_dataset();
        // s1 has 2 human ratings, s2 has 1; tie resolves to the larger count.
        assert_eq!(ds.ratings_per_sample(), 2);
    }

    #[test]
    fn merge_appends_disjoint_raters() {
        let ds = toy_dataset();
        let mut b = DatasetBuilder::new(toy_scale());
        b.add_rater(Rater::model("m2")).unwrap();
        b.add_annotation("s1", "m2", "disagree", Some(0.7)).unwrap();
        let other = b.build().unwrap();
        let merged = ds.merge(&other).unwrap();
        assert_eq!(merged.raters().len(), 4);
        assert_eq!(merged.annotation_count(), 5);
        assert!(ds.merge(&ds).is_err());
    }
}
