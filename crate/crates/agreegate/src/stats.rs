//! Rank correlation and resampling primitives.
//!
//! All stochastic routines run on ChaCha8 with one derived stream per
//! iteration, so results are identical across runs, platforms, and thread
//! schedules for a given seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alpha::{alpha_from_units, AlphaOptions, compute_alpha};
use crate::dataset::AnnotationDataset;
use crate::error::{Error, Result};

/// A 64-bit seed. The same seed yields identical stochastic outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

/// Independent stream families carved out of one seed, so that routines
/// sharing a seed never consume each other's draws.
#[derive(Debug, Clone, Copy)]
pub(crate) enum StreamDomain {
    Bootstrap = 1,
    SweepSelect = 2,
    SweepPosition = 3,
    Permutation = 4,
}

impl RngSeed {
    /// RNG for stream `payload` of the given domain (payload < 2^60).
    pub(crate) fn stream_rng(self, domain: StreamDomain, payload: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(((domain as u64) << 60) | payload);
        rng
    }
}

/// Spearman rank correlation with a permutation p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpearmanResult {
    pub rho: f64,
    /// Two-sided permutation p-value in (0, 1].
    pub p_value: f64,
    pub n: usize,
}

/// A percentile interval around a point estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub point: f64,
}

impl ConfidenceInterval {
    pub fn degenerate(point: f64, level: f64) -> Self {
        ConfidenceInterval {
            lower: point,
            upper: point,
            level,
            point,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Closed-interval overlap.
    pub fn overlaps(&self, other: &ConfidenceInterval) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}

/// Average ranks (1-based), with ties sharing their mean rank.
pub(crate) fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx * syy).sqrt())
    }
}

/// Spearman rho via average ranks, with a two-sided permutation test.
///
/// Constant inputs are an error rather than rho = 0: a rank correlation over
/// a constant vector is undefined.
pub fn spearman(x: &[f64], y: &[f64], seed: RngSeed, permutations: usize) -> Result<SpearmanResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "n".into(),
            message: format!("need at least 3 observations, got {}", x.len()),
        });
    }
    if permutations == 0 {
        return Err(Error::InvalidParameter {
            name: "permutations".into(),
            message: "must be at least 1".into(),
        });
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter {
            name: "x/y".into(),
            message: "inputs must not contain NaN".into(),
        });
    }
    let rank_x = average_ranks(x);
    let rank_y = average_ranks(y);
    let rho = pearson(&rank_x, &rank_y).ok_or(Error::ConstantVector)?;

    // Permute one rank vector; ranking is permutation-equivariant, so
    // shuffling ranks is the same as shuffling raw values.
    let threshold = rho.abs() - 1e-12;
    let extreme = (0..permutations)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = seed.stream_rng(StreamDomain::Permutation, i as u64);
            let mut permuted = rank_y.clone();
            shuffle(&mut permuted, &mut rng);
            match pearson(&rank_x, &permuted) {
                Some(r) => r.abs() >= threshold,
                None => false,
            }
        })
        .count();
    let p_value = (extreme + 1) as f64 / (permutations + 1) as f64;
    Ok(SpearmanResult {
        rho,
        p_value,
        n: x.len(),
    })
}

/// Fisher-Yates shuffle; kept local so the draw sequence is ours to freeze.
pub(crate) fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// First `count` indices of a Fisher-Yates pass over `0..n`: a uniform
/// sample without replacement.
pub(crate) fn sample_without_replacement(
    n: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    debug_assert!(count <= n);
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = rng.random_range(i..n);
        indices.swap(i, j);
    }
    indices.truncate(count);
    indices
}

/// Linear-interpolation percentile of a sorted slice, `q` in [0, 1].
pub(crate) fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = pos - lo as f64;
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

/// Percentile confidence interval for alpha under repeated subsampling.
///
/// Each iteration draws `ceil(fraction * n_samples)` samples *without
/// replacement*, computes alpha on the restriction, and skips degenerate
/// draws. The interval takes the `(1-level)/2` and `1-(1-level)/2`
/// percentiles of the retained alphas; the point estimate is the full-data
/// alpha.
pub fn bootstrap_alpha_ci(
    ds: &AnnotationDataset,
    resample_fraction: f64,
    iterations: usize,
    level: f64,
    seed: RngSeed,
) -> Result<ConfidenceInterval> {
    bootstrap_alpha_ci_with(ds, resample_fraction, iterations, level, seed, AlphaOptions::default())
}

pub fn bootstrap_alpha_ci_with(
    ds: &AnnotationDataset,
    resample_fraction: f64,
    iterations: usize,
    level: f64,
    seed: RngSeed,
    opts: AlphaOptions,
) -> Result<ConfidenceInterval> {
    if !(resample_fraction > 0.0 && resample_fraction <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "resample_fraction".into(),
            message: format!("must be in (0, 1], got {resample_fraction}"),
        });
    }
    if iterations < 100 {
        return Err(Error::InvalidParameter {
            name: "iterations".into(),
            message: format!("must be at least 100, got {iterations}"),
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter {
            name: "level".into(),
            message: format!("must be in (0, 1), got {level}"),
        });
    }
    let point = compute_alpha(ds)?.alpha;

    let mut sample_ids: Vec<&str> = ds.samples().iter().map(|s| s.as_str()).collect();
    sample_ids.sort_unstable();
    let units: Vec<Vec<&str>> = sample_ids
        .iter()
        .map(|sid| {
            ds.ratings_for_sample(sid)
                .iter()
                .map(|a| a.label.as_str())
                .collect()
        })
        .collect();
    let n = units.len();
    let draw_size = ((resample_fraction * n as f64) - 1e-9).ceil().max(1.0) as usize;
    let draw_size = draw_size.min(n);

    let mut alphas: Vec<f64> = (0..iterations)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = seed.stream_rng(StreamDomain::Bootstrap, i as u64);
            let chosen = sample_without_replacement(n, draw_size, &mut rng);
            let subset: Vec<Vec<&str>> = chosen.iter().map(|&u| units[u].clone()).collect();
            alpha_from_units(&subset, ds.scale(), opts).ok().map(|r| r.alpha)
        })
        .collect();
    if alphas.is_empty() {
        return Err(Error::AllIterationsDegenerate(iterations));
    }
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = (1.0 - level) / 2.0;
    Ok(ConfidenceInterval {
        lower: percentile_sorted(&alphas, tail),
        upper: percentile_sorted(&alphas, 1.0 - tail),
        level,
        point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{DatasetBuilder, LabelScale, Rater};
    use approx::assert_abs_diff_eq;

    #[test]
    fn perfect_monotone_is_one() {
        let r = spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0], RngSeed(1), 200).unwrap();
        assert_eq!(r.rho, 1.0);
    }

    #[test]
    fn perfect_antitone_is_minus_one() {
        let r = spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0], RngSeed(1), 200).unwrap();
        assert_eq!(r.rho, -1.0);
    }

    #[test]
    fn constant_vector_is_error() {
        let e = spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], RngSeed(1), 100);
        assert!(matches!(e, Err(Error::ConstantVector)));
    }

    #[test]
    fn length_mismatch_is_error() {
        let e = spearman(&[1.0, 2.0], &[1.0, 2.0, 3.0], RngSeed(1), 100);
        assert!(matches!(e, Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn self_correlation_is_one() {
        let x = [3.0, 1.0, 4.0, 1.5, 9.0, 2.6];
        let r = spearman(&x, &x, RngSeed(7), 100).unwrap();
        assert_eq!(r.rho, 1.0);
    }

    #[test]
    fn invariant_under_strictly_increasing_transform() {
        let x = [3.0, 1.0, 4.0, 1.5, 9.0, 2.6, 5.3];
        let y = [2.0, 7.0, 1.0, 8.0, 2.8, 1.8, 3.0];
        let y2: Vec<f64> = y.iter().map(|v: &f64| v.exp() + 3.0).collect();
        let a = spearman(&x, &y, RngSeed(3), 100).unwrap();
        let b = spearman(&x, &y2, RngSeed(3), 100).unwrap();
        assert_eq!(a.rho.to_bits(), b.rho.to_bits());
        assert_eq!(a.p_value, b.p_value);
    }

    #[test]
    fn average_ranks_handle_ties() {
        let ranks = average_ranks(&[10.0, 20.0, 20.0, 30.0]);
        assert_eq!(ranks, vec![1.0, 2.5, 2.5, 4.0]);
    }

    #[test]
    fn p_value_in_unit_interval_and_deterministic() {
        let x = [1.0, 5.0, 3.0, 4.0, 2.0, 6.0, 8.0, 7.0];
        let y = [2.0, 6.0, 3.0, 5.0, 1.0, 4.0, 8.0, 7.0];
        let a = spearman(&x, &y, RngSeed(42), 2000).unwrap();
        let b = spearman(&x, &y, RngSeed(42), 2000).unwrap();
        assert!(a.p_value > 0.0 && a.p_value <= 1.0);
        assert_eq!(a.p_value, b.p_value);
    }

    fn nominal_dataset(pairs: &[(&str, &str)]) -> AnnotationDataset {
        let mut b = DatasetBuilder::new(LabelScale::Nominal {
            labels: vec!["a".into(), "b".into(), "c".into()],
        });
        b.add_rater(Rater::human("r1")).unwrap();
        b.add_rater(Rater::human("r2")).unwrap();
        for (i, (l1, l2)) in pairs.iter().enumerate() {
            b.add_annotation(&format!("s{i:04}"), "r1", l1, None).unwrap();
            b.add_annotation(&format!("s{i:04}"), "r2", l2, None).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn perfect_agreement_ci_is_unit() {
        let pairs: Vec<(&str, &str)> = (0..40)
            .map(|i| if i % 2 == 0 { ("a", "a") } else { ("b", "b") })
            .collect();
        let ds = nominal_dataset(&pairs);
        let ci = bootstrap_alpha_ci(&ds, 0.5, 200, 0.95, RngSeed(11)).unwrap();
        assert_eq!(ci.lower, 1.0);
        assert_eq!(ci.upper, 1.0);
        assert_eq!(ci.point, 1.0);
    }

    #[test]
    fn full_fraction_has_zero_width() {
        let pairs: Vec<(&str, &str)> = (0..30)
            .map(|i| match i % 3 {
                0 => ("a", "a"),
                1 => ("b", "a"),
                _ => ("c", "c"),
            })
            .collect();
        let ds = nominal_dataset(&pairs);
        let ci = bootstrap_alpha_ci(&ds, 1.0, 150, 0.95, RngSeed(5)).unwrap();
        assert_eq!(ci.lower, ci.point);
        assert_eq!(ci.upper, ci.point);
    }

    #[test]
    fn deterministic_given_seed() {
        let pairs: Vec<(&str, &str)> = (0..50)
            .map(|i| match i % 4 {
                0 => ("a", "a"),
                1 => ("b", "c"),
                2 => ("c", "c"),
                _ => ("a", "b"),
            })
            .collect();
        let ds = nominal_dataset(&pairs);
        let a = bootstrap_alpha_ci(&ds, 0.5, 300, 0.95, RngSeed(42)).unwrap();
        let b = bootstrap_alpha_ci(&ds, 0.5, 300, 0.95, RngSeed(42)).unwrap();
        assert_eq!(a, b);
        let c = bootstrap_alpha_ci(&ds, 0.5, 300, 0.95, RngSeed(43)).unwrap();
        assert!(a.lower != c.lower || a.upper != c.upper);
    }

    #[test]
    fn iteration_floor_enforced() {
        let ds = nominal_dataset(&[("a", "a"), ("b", "b")]);
        assert!(matches!(
            bootstrap_alpha_ci(&ds, 0.5, 99, 0.95, RngSeed(1)),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn percentile_linear_interpolation() {
        let sorted = [1.0, 2.0, 3.0, 4.0];
        assert_abs_diff_eq!(percentile_sorted(&sorted, 0.0), 1.0);
        assert_abs_diff_eq!(percentile_sorted(&sorted, 1.0), 4.0);
        assert_abs_diff_eq!(percentile_sorted(&sorted, 0.5), 2.5);
        assert_abs_diff_eq!(percentile_sorted(&sorted, 1.0 / 3.0), 2.0);
    }

    #[test]
    fn median_of_resamples_inside_interval() {
        let pairs: Vec<(&str, &str)> = (0..60)
            .map(|i| match i % 5 {
                0 | 1 => ("a", "a"),
                2 => ("b", "b"),
                3 => ("a", "b"),
                _ => ("c", "c"),
            })
            .collect();
        let ds = nominal_dataset(&pairs);
        // A vanishing level pinches both percentile bounds onto the median
        // of the resample distribution.
        let pinched = bootstrap_alpha_ci(&ds, 0.5, 400, 1e-9, RngSeed(9)).unwrap();
        let median = pinched.lower;
        assert_abs_diff_eq!(pinched.upper, median, epsilon = 1e-9);
        for level in [0.5, 0.8, 0.95] {
            let ci = bootstrap_alpha_ci(&ds, 0.5, 400, level, RngSeed(9)).unwrap();
            assert!(ci.lower <= median + 1e-9 && median <= ci.upper + 1e-9);
        }
    }
}
