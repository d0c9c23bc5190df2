//! Krippendorff's alpha for any number of raters, any scale kind, and
//! missing data, via the coincidence-matrix formulation.
//!
//! Each sample is a unit; units with fewer than two ratings are excluded.
//! Within-unit value pairs are accumulated with weight `1/(m_u - 1)` into a
//! value-by-value coincidence matrix; observed disagreement comes from the
//! matrix cells and expected disagreement from its marginals:
//!
//! ```text
//! D_o = (1/n)        * sum_{c != k} o[c][k] * d2(c, k)
//! D_e = (1/(n(n-1))) * sum_{c != k} n_c * n_k * d2(c, k)
//! alpha = 1 - D_o / D_e
//! ```
//!
//! The difference function `d2` is selected by scale kind: nominal 0/1,
//! interval squared numeric difference, ordinal squared cumulative-marginal
//! distance. Units are accumulated in sorted-sample-id order, so results are
//! bit-identical under any reordering of samples or raters.

use serde::{Deserialize, Serialize};

use crate::dataset::{AnnotationDataset, LabelScale, ScaleKind};
use crate::error::{Error, Result};

/// An agreement coefficient together with its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaResult {
    /// `1 - D_o / D_e`; at most 1, exactly 1 iff `D_o == 0`.
    pub alpha: f64,
    pub observed_disagreement: f64,
    pub expected_disagreement: f64,
    /// Number of pairable values (sum of unit sizes over included units).
    pub pairable_values: usize,
    /// Number of units with at least two ratings.
    pub units_used: usize,
}

/// Tuning knobs for the alpha computation.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlphaOptions {
    /// Treat ordinal labels as equally spaced rank indices instead of using
    /// the cumulative-marginal ordinal metric. The marginal-based metric is
    /// the default; note that it is sensitive to the observed marginal
    /// distribution (unused labels carry zero weight), while rank indices
    /// are sensitive to unused label padding.
    pub ordinal_as_interval_indices: bool,
}

/// Compute alpha over every rater and unit of the dataset.
pub fn compute_alpha(ds: &AnnotationDataset) -> Result<AlphaResult> {
    compute_alpha_with(ds, AlphaOptions::default())
}

pub fn compute_alpha_with(ds: &AnnotationDataset, opts: AlphaOptions) -> Result<AlphaResult> {
    let units = dataset_units(ds)?;
    alpha_from_units(&units, ds.scale(), opts)
}

/// Alpha for one rater pair over the samples both annotated. `None` when the
/// pair shares no samples or the shared data is degenerate.
pub fn pairwise_alpha(
    ds: &AnnotationDataset,
    rater_a: &str,
    rater_b: &str,
) -> Result<Option<AlphaResult>> {
    pairwise_alpha_with(ds, rater_a, rater_b, AlphaOptions::default())
}

pub fn pairwise_alpha_with(
    ds: &AnnotationDataset,
    rater_a: &str,
    rater_b: &str,
    opts: AlphaOptions,
) -> Result<Option<AlphaResult>> {
    for id in [rater_a, rater_b] {
        if ds.rater(id).is_none() {
            return Err(Error::UnknownRater(id.to_string()));
        }
    }
    let mut sample_ids: Vec<&str> = ds.samples().iter().map(|s| s.as_str()).collect();
    sample_ids.sort_unstable();
    let mut units: Vec<Vec<&str>> = Vec::new();
    for sid in sample_ids {
        let (a, b) = (ds.annotation(sid, rater_a), ds.annotation(sid, rater_b));
        if let (Some(a), Some(b)) = (a, b) {
            units.push(vec![a.label.as_str(), b.label.as_str()]);
        }
    }
    if units.is_empty() {
        return Ok(None);
    }
    match alpha_from_units(&units, ds.scale(), opts) {
        Ok(result) => Ok(Some(result)),
        Err(Error::DegenerateData) | Err(Error::NoPairableData) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Collect each sample's labels (any rater), sorted by sample id.
fn dataset_units(ds: &AnnotationDataset) -> Result<Vec<Vec<&str>>> {
    let mut sample_ids: Vec<&str> = ds.samples().iter().map(|s| s.as_str()).collect();
    sample_ids.sort_unstable();
    Ok(sample_ids
        .iter()
        .map(|sid| {
            ds.ratings_for_sample(sid)
                .iter()
                .map(|a| a.label.as_str())
                .collect()
        })
        .collect())
}

/// The value table assigns each admissible label a dense index and, where
/// relevant, a numeric position used by the difference function.
struct ValueTable {
    labels: Vec<String>,
    numeric: Vec<f64>,
    kind: ScaleKind,
}

impl ValueTable {
    fn build(units: &[&Vec<&str>], scale: &LabelScale) -> ValueTable {
        match scale {
            LabelScale::Nominal { labels } | LabelScale::Ordinal { labels } => ValueTable {
                labels: labels.clone(),
                numeric: (0..labels.len()).map(|i| i as f64).collect(),
                kind: scale.kind(),
            },
            LabelScale::Interval { .. } => {
                let mut values: Vec<f64> = Vec::new();
                for unit in units {
                    for label in unit.iter() {
                        let v: f64 = label.parse().unwrap_or(f64::NAN);
                        if !values.iter().any(|x| x == &v) {
                            values.push(v);
                        }
                    }
                }
                values.sort_by(|a, b| a.partial_cmp(b).unwrap());
                ValueTable {
                    labels: values.iter().map(|v| format!("{v}")).collect(),
                    numeric: values,
                    kind: ScaleKind::Interval,
                }
            }
        }
    }

    fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

/// Core computation over pre-extracted units. Units with fewer than two
/// values are dropped before the value table is derived, so values seen only
/// in unpairable units never enter the computation.
pub(crate) fn alpha_from_units(
    units: &[Vec<&str>],
    scale: &LabelScale,
    opts: AlphaOptions,
) -> Result<AlphaResult> {
    let pairable: Vec<&Vec<&str>> = units.iter().filter(|u| u.len() >= 2).collect();
    if pairable.is_empty() {
        return Err(Error::NoPairableData);
    }
    let table = ValueTable::build(&pairable, scale);
    let mut indexed: Vec<Vec<usize>> = Vec::with_capacity(pairable.len());
    for unit in &pairable {
        let ids: Vec<usize> = unit
            .iter()
            .map(|label| {
                table
                    .index_of(label)
                    .ok_or_else(|| Error::schema("alpha", format!("label '{label}' not in scale")))
            })
            .collect::<Result<_>>()?;
        indexed.push(ids);
    }
    alpha_from_indexed_units(&indexed, &table, opts)
}

fn alpha_from_indexed_units(
    units: &[Vec<usize>],
    table: &ValueTable,
    opts: AlphaOptions,
) -> Result<AlphaResult> {
    let v = table.len();
    let mut coincidence = vec![0.0_f64; v * v];
    let mut pairable_values = 0_usize;
    let mut units_used = 0_usize;
    let mut counts = vec![0_u64; v];

    for unit in units {
        let m = unit.len();
        if m < 2 {
            continue;
        }
        units_used += 1;
        pairable_values += m;
        for c in counts.iter_mut() {
            *c = 0;
        }
        for &value in unit {
            counts[value] += 1;
        }
        let weight = 1.0 / (m as f64 - 1.0);
        for c in 0..v {
            if counts[c] == 0 {
                continue;
            }
            for k in 0..v {
                if counts[k] == 0 {
                    continue;
                }
                let pairs = if c == k {
                    counts[c] * (counts[c] - 1)
                } else {
                    counts[c] * counts[k]
                };
                if pairs > 0 {
                    coincidence[c * v + k] += pairs as f64 * weight;
                }
            }
        }
    }

    if units_used == 0 {
        return Err(Error::NoPairableData);
    }

    let marginals: Vec<f64> = (0..v)
        .map(|c| (0..v).map(|k| coincidence[c * v + k]).sum())
        .collect();
    let n: f64 = marginals.iter().sum();

    let d2 = difference_table(table, &marginals, opts);

    let mut observed_sum = 0.0;
    let mut expected_sum = 0.0;
    for c in 0..v {
        for k in 0..v {
            if c == k {
                continue;
            }
            let d = d2[c * v + k];
            observed_sum += coincidence[c * v + k] * d;
            expected_sum += marginals[c] * marginals[k] * d;
        }
    }
    let observed = observed_sum / n;
    let expected = expected_sum / (n * (n - 1.0));
    if expected == 0.0 {
        return Err(Error::DegenerateData);
    }
    // Algebraically 1 - D_o/D_e, written over the raw sums so cases whose
    // sums are exactly representable come out exact.
    let alpha = 1.0 - (observed_sum * (n - 1.0)) / expected_sum;
    Ok(AlphaResult {
        alpha,
        observed_disagreement: observed,
        expected_disagreement: expected,
        pairable_values,
        units_used,
    })
}

/// Squared difference for every value pair, per the scale kind.
fn difference_table(table: &ValueTable, marginals: &[f64], opts: AlphaOptions) -> Vec<f64> {
    let v = table.len();
    let mut d2 = vec![0.0_f64; v * v];
    match table.kind {
        ScaleKind::Nominal => {
            for c in 0..v {
                for k in 0..v {
                    d2[c * v + k] = if c == k { 0.0 } else { 1.0 };
                }
            }
        }
        ScaleKind::Interval => {
            for c in 0..v {
                for k in 0..v {
                    let d = table.numeric[c] - table.numeric[k];
                    d2[c * v + k] = d * d;
                }
            }
        }
        ScaleKind::Ordinal => {
            if opts.ordinal_as_interval_indices {
                for c in 0..v {
                    for k in 0..v {
                        let d = table.numeric[c] - table.numeric[k];
                        d2[c * v + k] = d * d;
                    }
                }
            } else {
                // Cumulative-marginal metric: the distance between ranks c < k
                // is the mass of all ranks from c to k inclusive, minus half
                // the endpoints.
                let mut prefix = vec![0.0_f64; v + 1];
                for c in 0..v {
                    prefix[c + 1] = prefix[c] + marginals[c];
                }
                for c in 0..v {
                    for k in (c + 1)..v {
                        let between = prefix[k + 1] - prefix[c];
                        let d = between - (marginals[c] + marginals[k]) / 2.0;
                        d2[c * v + k] = d * d;
                        d2[k * v + c] = d * d;
                    }
                }
            }
        }
    }
    d2
}
