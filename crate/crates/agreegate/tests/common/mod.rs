//! Shared test support: an independent pair-expansion oracle for alpha,
//! seeded dataset generators, and an independent percentile implementation.
#![allow(dead_code)]

pub mod tasks;

use agreegate::{AnnotationDataset, DatasetBuilder, LabelScale, Rater, RaterKind};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of the oracle, mirroring the engine's error conditions.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Alpha {
        alpha: f64,
        observed: f64,
        expected: f64,
        pairable_values: usize,
        units_used: usize,
    },
    NoPairableData,
    Degenerate,
}

/// Direct computation of alpha from the D_o/D_e definitions, expanding every
/// value pair explicitly. Only the difference-function definitions are shared
/// with the engine; no coincidence matrix is built.
///
/// * `D_o` sums the squared difference over all ordered within-unit pairs,
///   each unit weighted by `1/(m_u - 1)`, divided by the number of pooled
///   values `n`.
/// * `D_e` sums the squared difference over all ordered pairs of pooled
///   values (across all units), divided by `n * (n - 1)`.
pub fn oracle_alpha(ds: &AnnotationDataset) -> OracleOutcome {
    let mut sample_ids: Vec<&str> = ds.samples().iter().map(|s| s.as_str()).collect();
    sample_ids.sort_unstable();
    let units: Vec<Vec<String>> = sample_ids
        .iter()
        .map(|sid| {
            ds.ratings_for_sample(sid)
                .iter()
                .map(|a| a.label.clone())
                .collect()
        })
        .filter(|u: &Vec<String>| u.len() >= 2)
        .collect();
    if units.is_empty() {
        return OracleOutcome::NoPairableData;
    }
    let pooled: Vec<&str> = units
        .iter()
        .flat_map(|u| u.iter().map(|s| s.as_str()))
        .collect();
    let n = pooled.len();
    let diff = OracleDifference::new(ds.scale(), &pooled);

    let mut observed = 0.0;
    for unit in &units {
        let m = unit.len();
        let weight = 1.0 / (m as f64 - 1.0);
        let mut unit_sum = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    unit_sum += diff.d2(&unit[i], &unit[j]);
                }
            }
        }
        observed += unit_sum * weight;
    }
    observed /= n as f64;

    let mut expected = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                expected += diff.d2(pooled[i], pooled[j]);
            }
        }
    }
    expected /= (n * (n - 1)) as f64;

    if expected == 0.0 {
        return OracleOutcome::Degenerate;
    }
    OracleOutcome::Alpha {
        alpha: 1.0 - observed / expected,
        observed,
        expected,
        pairable_values: n,
        units_used: units.len(),
    }
}

/// Scale-specific squared difference, built from pooled value frequencies
/// (for the ordinal metric) without going through a coincidence matrix.
struct OracleDifference {
    scale: LabelScale,
    /// Pooled frequency per ordinal rank.
    rank_counts: Vec<f64>,
}

impl OracleDifference {
    fn new(scale: &LabelScale, pooled: &[&str]) -> Self {
        let rank_counts = match scale {
            LabelScale::Ordinal { labels } => labels
                .iter()
                .map(|l| pooled.iter().filter(|p| *p == l).count() as f64)
                .collect(),
            _ => Vec::new(),
        };
        OracleDifference {
            scale: scale.clone(),
            rank_counts,
        }
    }

    fn d2(&self, a: &str, b: &str) -> f64 {
        match &self.scale {
            LabelScale::Nominal { .. } => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
            LabelScale::Interval { .. } => {
                let x: f64 = a.parse().unwrap();
                let y: f64 = b.parse().unwrap();
                (x - y) * (x - y)
            }
            LabelScale::Ordinal { labels } => {
                let ra = labels.iter().position(|l| l == a).unwrap();
                let rb = labels.iter().position(|l| l == b).unwrap();
                if ra == rb {
                    return 0.0;
                }
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                let between: f64 = (lo..=hi).map(|g| self.rank_counts[g]).sum();
                let d = between - (self.rank_counts[lo] + self.rank_counts[hi]) / 2.0;
                d * d
            }
        }
    }
}

/// Compare engine output with the oracle, within `tol` on every field.
pub fn engine_matches_oracle(ds: &AnnotationDataset, tol: f64) -> Result<(), String> {
    let engine = agreegate::compute_alpha(ds);
    let oracle = oracle_alpha(ds);
    match (engine, oracle) {
        (
            Ok(e),
            OracleOutcome::Alpha {
                alpha,
                observed,
                expected,
                pairable_values,
                units_used,
            },
        ) => {
            if (e.alpha - alpha).abs() > tol {
                return Err(format!("alpha {} vs oracle {alpha}", e.alpha));
            }
            if (e.observed_disagreement - observed).abs() > tol {
                return Err(format!(
                    "observed {} vs oracle {observed}",
                    e.observed_disagreement
                ));
            }
            if (e.expected_disagreement - expected).abs() > tol {
                return Err(format!(
                    "expected {} vs oracle {expected}",
                    e.expected_disagreement
                ));
            }
            if e.pairable_values != pairable_values || e.units_used != units_used {
                return Err("pairable/units counters diverge".into());
            }
            Ok(())
        }
        (Err(agreegate::Error::NoPairableData), OracleOutcome::NoPairableData) => Ok(()),
        (Err(agreegate::Error::DegenerateData), OracleOutcome::Degenerate) => Ok(()),
        (engine, oracle) => Err(format!("outcome mismatch: {engine:?} vs {oracle:?}")),
    }
}

/// Seeded random dataset: up to `max_raters` raters, `max_samples` samples,
/// `max_labels` distinct labels, with roughly `missing` of cells absent.
pub fn random_dataset(seed: u64, max_raters: usize, max_samples: usize, max_labels: usize, missing: f64) -> AnnotationDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_raters = rng.random_range(2..=max_raters);
    let n_samples = rng.random_range(1..=max_samples);
    let n_labels = rng.random_range(2..=max_labels);
    let scale = match rng.random_range(0..3) {
        0 => LabelScale::Nominal {
            labels: (0..n_labels).map(|i| format!("v{i}")).collect(),
        },
        1 => LabelScale::Ordinal {
            labels: (0..n_labels).map(|i| format!("v{i}")).collect(),
        },
        _ => LabelScale::Interval {
            min: 0.0,
            max: 10.0,
        },
    };
    let interval_values: Vec<String> = (0..n_labels)
        .map(|i| format!("{}", (i as f64) * 2.5))
        .collect();
    let mut b = DatasetBuilder::new(scale.clone());
    for r in 0..n_raters {
        b.add_rater(Rater::new(format!("r{r}"), RaterKind::Human))
            .unwrap();
    }
    for s in 0..n_samples {
        for r in 0..n_raters {
            if rng.random_range(0.0..1.0) < missing {
                continue;
            }
            let v = rng.random_range(0..n_labels);
            let label = match &scale {
                LabelScale::Interval { .. } => interval_values[v].clone(),
                _ => format!("v{v}"),
            };
            b.add_annotation(&format!("s{s}"), &format!("r{r}"), &label, None)
                .unwrap();
        }
    }
    b.build().unwrap()
}

/// Independent percentile (linear interpolation between order statistics),
/// written against the definition rather than the library code.
pub fn independent_percentile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = q * (sorted.len() as f64 - 1.0);
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < sorted.len() {
        sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
    } else {
        sorted[lo]
    }
}
