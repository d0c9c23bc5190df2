//! Pairwise agreement matrices over shared samples, zone partitioning, and
//! zone-level summaries.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alpha::{pairwise_alpha_with, AlphaOptions, AlphaResult};
use crate::dataset::{AnnotationDataset, Rater, RaterKind};
use crate::error::{Error, Result};

/// Partition of rater pairs by the kinds involved. Any pair touching a
/// random rater is quarantined into `WithRandom` and excluded from reported
/// summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    HumanHuman,
    HumanModel,
    ModelModel,
    WithRandom,
}

impl Zone {
    /// The zone is a pure function of the two raters' kinds.
    pub fn of(a: RaterKind, b: RaterKind) -> Zone {
        use RaterKind::*;
        match (a, b) {
            (Random, _) | (_, Random) => Zone::WithRandom,
            (Human, Human) => Zone::HumanHuman,
            (Model, Model) => Zone::ModelModel,
            (Human, Model) | (Model, Human) => Zone::HumanModel,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Zone::HumanHuman => "human_human",
            Zone::HumanModel => "human_model",
            Zone::ModelModel => "model_model",
            Zone::WithRandom => "with_random",
        }
    }
}

/// Symmetric matrix of pairwise alpha results. A cell is absent when the
/// pair shares no computable data; the diagonal is defined as alpha = 1 by
/// convention (for rendering) and never enters summaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgreementMatrix {
    raters: Vec<Rater>,
    cells: Vec<Vec<Option<AlphaResult>>>,
}

impl AgreementMatrix {
    pub fn raters(&self) -> &[Rater] {
        &self.raters
    }

    /// Raw cell; diagonal cells are stored as `None`.
    pub fn cell(&self, i: usize, j: usize) -> Option<&AlphaResult> {
        self.cells[i][j].as_ref()
    }

    /// Alpha value with the diagonal convention applied.
    pub fn alpha_at(&self, i: usize, j: usize) -> Option<f64> {
        if i == j {
            Some(1.0)
        } else {
            self.cells[i][j].as_ref().map(|r| r.alpha)
        }
    }

    pub fn zone_of_pair(&self, i: usize, j: usize) -> Zone {
        Zone::of(self.raters[i].kind, self.raters[j].kind)
    }

    /// Defined off-diagonal cells (upper triangle) with their zones.
    pub fn defined_pairs(&self) -> impl Iterator<Item = (usize, usize, Zone, &AlphaResult)> {
        let n = self.raters.len();
        (0..n).flat_map(move |i| {
            ((i + 1)..n).filter_map(move |j| {
                self.cells[i][j]
                    .as_ref()
                    .map(|r| (i, j, self.zone_of_pair(i, j), r))
            })
        })
    }

    /// Rater-by-rater grid as CSV; empty cell = undefined pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rater");
        for r in &self.raters {
            out.push(',');
            out.push_str(&r.id);
        }
        out.push('\n');
        for (i, r) in self.raters.iter().enumerate() {
            out.push_str(&r.id);
            for j in 0..self.raters.len() {
                out.push(',');
                if let Some(alpha) = self.alpha_at(i, j) {
                    out.push_str(&format!("{alpha}"));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Cell list (upper triangle) with zone tags, for external plotting.
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct CellOut<'a> {
            rater_a: &'a str,
            rater_b: &'a str,
            zone: Zone,
            alpha: f64,
            observed_disagreement: f64,
            expected_disagreement: f64,
            pairable_values: usize,
            units_used: usize,
        }
        #[derive(Serialize)]
        struct MatrixOut<'a> {
            raters: &'a [Rater],
            cells: Vec<CellOut<'a>>,
        }
        let cells = self
            .defined_pairs()
            .map(|(i, j, zone, r)| CellOut {
                rater_a: &self.raters[i].id,
                rater_b: &self.raters[j].id,
                zone,
                alpha: r.alpha,
                observed_disagreement: r.observed_disagreement,
                expected_disagreement: r.expected_disagreement,
                pairable_values: r.pairable_values,
                units_used: r.units_used,
            })
            .collect();
        Ok(serde_json::to_string_pretty(&MatrixOut {
            raters: &self.raters,
            cells,
        })?)
    }
}

/// Mean/median alpha over the defined cells of one zone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneSummary {
    pub zone: Zone,
    pub mean_alpha: f64,
    pub median_alpha: f64,
    pub pair_count: usize,
}

/// Compute every pairwise alpha and label zones.
pub fn agreement_matrix(ds: &AnnotationDataset) -> Result<AgreementMatrix> {
    agreement_matrix_with(ds, AlphaOptions::default())
}

pub fn agreement_matrix_with(
    ds: &AnnotationDataset,
    opts: AlphaOptions,
) -> Result<AgreementMatrix> {
    let raters = ds.raters().to_vec();
    if raters.len() < 2 {
        return Err(Error::FewerThanTwoRaters(raters.len()));
    }
    let n = raters.len();
    let mut cells: Vec<Vec<Option<AlphaResult>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let result = pairwise_alpha_with(ds, &raters[i].id, &raters[j].id, opts)?;
            cells[i][j] = result.clone();
            cells[j][i] = result;
        }
    }
    Ok(AgreementMatrix { raters, cells })
}

/// Summarize defined cells per zone. `model_subset`, when given, restricts
/// model participation: human-model cells keep only the listed models, and
/// model-model cells require both members listed. Pairs involving random
/// raters are never reported. Empty zones yield no summary.
pub fn zone_summaries(
    matrix: &AgreementMatrix,
    model_subset: Option<&BTreeSet<String>>,
) -> Vec<ZoneSummary> {
    let mut per_zone: Vec<(Zone, Vec<f64>)> = vec![
        (Zone::HumanHuman, Vec::new()),
        (Zone::HumanModel, Vec::new()),
        (Zone::ModelModel, Vec::new()),
    ];
    for (i, j, zone, result) in matrix.defined_pairs() {
        if zone == Zone::WithRandom {
            continue;
        }
        if let Some(subset) = model_subset {
            let in_subset = |idx: usize| {
                matrix.raters()[idx].kind != RaterKind::Model
                    || subset.contains(&matrix.raters()[idx].id)
            };
            if !in_subset(i) || !in_subset(j) {
                continue;
            }
        }
        per_zone
            .iter_mut()
            .find(|(z, _)| *z == zone)
            .expect("reported zone")
            .1
            .push(result.alpha);
    }
    per_zone
        .into_iter()
        .filter(|(_, alphas)| !alphas.is_empty())
        .map(|(zone, mut alphas)| {
            alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mean = alphas.iter().sum::<f64>() / alphas.len() as f64;
            let median = median_of_sorted(&alphas);
            ZoneSummary {
                zone,
                mean_alpha: mean,
                median_alpha: median,
                pair_count: alphas.len(),
            }
        })
        .collect()
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{DatasetBuilder, LabelScale};
    use approx::assert_abs_diff_eq;

    fn scale() -> LabelScale {
        LabelScale::Nominal {
            labels: vec!["x".into(), "y".into()],
        }
    }

    fn mixed_dataset(with_random: bool) -> AnnotationDataset {
        let mut b = DatasetBuilder::new(scale());
        b.add_rater(Rater::human("h1")).unwrap();
        b.add_rater(Rater::human("h2")).unwrap();
        b.add_rater(Rater::model("m1")).unwrap();
        if with_random {
            b.add_rater(Rater::random("rnd")).unwrap();
        }
        let labels = [
            ("s1", "x", "x", "y", "x"),
            ("s2", "y", "y", "y", "x"),
            ("s3", "x", "y", "x", "y"),
            ("s4", "y", "y", "y", "x"),
        ];
        for (s, h1, h2, m1, rnd) in labels {
            b.add_annotation(s, "h1", h1, None).unwrap();
            b.add_annotation(s, "h2", h2, None).unwrap();
            b.add_annotation(s, "m1", m1, None).unwrap();
            if with_random {
                b.add_annotation(s, "rnd", rnd, None).unwrap();
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn two_humans_one_model_zones() {
        let m = agreement_matrix(&mixed_dataset(false)).unwrap();
        let pairs: Vec<Zone> = m.defined_pairs().map(|(_, _, z, _)| z).collect();
        assert_eq!(pairs.len(), 3);
        assert_eq!(
            pairs.iter().filter(|z| **z == Zone::HumanHuman).count(),
            1
        );
        assert_eq!(
            pairs.iter().filter(|z| **z == Zone::HumanModel).count(),
            2
        );
    }

    #[test]
    fn random_rater_only_adds_with_random_cells() {
        let without = agreement_matrix(&mixed_dataset(false)).unwrap();
        let with = agreement_matrix(&mixed_dataset(true)).unwrap();
        let count_non_random = |m: &AgreementMatrix| {
            m.defined_pairs()
                .filter(|(_, _, z, _)| *z != Zone::WithRandom)
                .count()
        };
        assert_eq!(count_non_random(&without), count_non_random(&with));
        assert!(with
            .defined_pairs()
            .any(|(_, _, z, _)| z == Zone::WithRandom));
        // Random pairs never show up in summaries.
        let summaries = zone_summaries(&with, None);
        assert!(summaries.iter().all(|s| s.zone != Zone::WithRandom));
    }

    #[test]
    fn fewer_than_two_raters_rejected() {
        let mut b = DatasetBuilder::new(scale());
        b.add_rater(Rater::human("h1")).unwrap();
        b.add_annotation("s1", "h1", "x", None).unwrap();
        let ds = b.build().unwrap();
        assert!(matches!(
            agreement_matrix(&ds),
            Err(Error::FewerThanTwoRaters(1))
        ));
    }

    #[test]
    fn single_cell_zone_mean_equals_median() {
        let mut b = DatasetBuilder::new(scale());
        b.add_rater(Rater::human("h1")).unwrap();
        b.add_rater(Rater::human("h2")).unwrap();
        for (s, a, bl) in [("s1", "x", "x"), ("s2", "y", "x"), ("s3", "x", "x"), ("s4", "y", "y")] {
            b.add_annotation(s, "h1", a, None).unwrap();
            b.add_annotation(s, "h2", bl, None).unwrap();
        }
        let m = agreement_matrix(&b.build().unwrap()).unwrap();
        let summaries = zone_summaries(&m, None);
        assert_eq!(summaries.len(), 1);
        let s = &summaries[0];
        assert_eq!(s.zone, Zone::HumanHuman);
        assert_eq!(s.pair_count, 1);
        assert_abs_diff_eq!(s.mean_alpha, s.median_alpha, epsilon = 1e-12);
    }

    #[test]
    fn empty_model_subset_drops_model_zones() {
        let m = agreement_matrix(&mixed_dataset(false)).unwrap();
        let subset = BTreeSet::new();
        let summaries = zone_summaries(&m, Some(&subset));
        assert!(summaries.iter().all(|s| s.zone == Zone::HumanHuman));
    }

    #[test]
    fn diagonal_is_one_in_exports() {
        let m = agreement_matrix(&mixed_dataset(false)).unwrap();
        assert_eq!(m.alpha_at(0, 0), Some(1.0));
        let csv = m.to_csv();
        assert!(csv.starts_with("rater,h1,h2,m1\n"));
        assert!(csv.lines().nth(1).unwrap().starts_with("h1,1,"));
    }

    #[test]
    fn matrix_is_symmetric() {
        let m = agreement_matrix(&mixed_dataset(true)).unwrap();
        let n = m.raters().len();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(m.cell(i, j), m.cell(j, i));
            }
        }
    }
}
