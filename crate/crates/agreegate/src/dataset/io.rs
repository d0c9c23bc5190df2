//! File ingestion and serialization for annotation datasets.
//!
//! Two formats are supported:
//!
//! * **Long CSV** — one row per annotation, UTF-8, header
//!   `sample_id,rater_id,rater_kind,label,confidence`; the confidence column
//!   is blank when absent. Raters and samples are collected in order of first
//!   appearance. The scale comes from a sidecar JSON definition. A rater or
//!   sample that carries no annotation cannot be expressed in this format.
//! * **JSON** — mirrors [`AnnotationDataset`] exactly, including the scale,
//!   the full rater and sample lists, and `ratings_per_sample`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AnnotationDataset, Annotation, DatasetBuilder, LabelScale, Rater, RaterKind};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["sample_id", "rater_id", "rater_kind", "label", "confidence"];

/// On-disk format of a dataset file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    CsvLong,
    Json,
}

/// A validated dataset plus any non-fatal observations made while loading.
#[derive(Debug)]
pub struct LoadedDataset {
    pub dataset: AnnotationDataset,
    pub warnings: Vec<String>,
}

/// JSON shape of a dataset file; mirrors the in-memory type.
#[derive(Serialize, Deserialize)]
struct DatasetFile {
    scale: LabelScale,
    raters: Vec<Rater>,
    samples: Vec<String>,
    ratings_per_sample: usize,
    annotations: Vec<Annotation>,
}

/// Load a dataset in the given format. CSV requires the sidecar scale.
pub fn load_dataset(
    path: impl AsRef<Path>,
    format: DatasetFormat,
    scale: Option<LabelScale>,
) -> Result<LoadedDataset> {
    match format {
        DatasetFormat::CsvLong => {
            let scale = scale.ok_or_else(|| {
                Error::schema("load", "CSV loading requires a scale definition")
            })?;
            load_csv_dataset(path, scale)
        }
        DatasetFormat::Json => load_json_dataset(path),
    }
}

/// Load the long CSV annotation format against a known scale.
pub fn load_csv_dataset(path: impl AsRef<Path>, scale: LabelScale) -> Result<LoadedDataset> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(display.clone(), e))?;
    load_csv_str(&text, scale, &display)
}

pub(crate) fn load_csv_str(
    text: &str,
    scale: LabelScale,
    source: &str,
) -> Result<LoadedDataset> {
    scale.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    {
        let headers = reader.headers().map_err(|e| Error::Parse {
            path: source.to_string(),
            line: 1,
            message: e.to_string(),
        })?;
        let got: Vec<&str> = headers.iter().collect();
        if got != CSV_HEADER {
            return Err(Error::Parse {
                path: source.to_string(),
                line: 1,
                message: format!("expected header {:?}, got {:?}", CSV_HEADER.join(","), got.join(",")),
            });
        }
    }

    let mut builder = DatasetBuilder::new(scale);
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line())
                .unwrap_or(0);
            Error::Parse {
                path: source.to_string(),
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let (sample_id, rater_id, kind_raw, label, conf_raw) =
            (field(0), field(1), field(2), field(3), field(4));
        if sample_id.is_empty() && rater_id.is_empty() && label.is_empty() {
            continue; // ignore fully blank rows
        }
        if sample_id.is_empty() || rater_id.is_empty() {
            return Err(Error::Parse {
                path: source.to_string(),
                line,
                message: "sample_id and rater_id must be non-empty".into(),
            });
        }
        let kind = RaterKind::parse(&kind_raw).ok_or_else(|| Error::Parse {
            path: source.to_string(),
            line,
            message: format!("unknown rater_kind '{kind_raw}' (expected human|model|random)"),
        })?;
        match builder.rater_index.get(&rater_id) {
            None => {
                builder.add_rater(Rater::new(rater_id.clone(), kind))?;
            }
            Some(&pos) => {
                let existing = builder.raters[pos].kind;
                if existing != kind {
                    return Err(Error::Parse {
                        path: source.to_string(),
                        line,
                        message: format!(
                            "rater '{rater_id}' declared as {} but previously seen as {}",
                            kind.as_str(),
                            existing.as_str()
                        ),
                    });
                }
            }
        }
        let confidence = if conf_raw.is_empty() {
            None
        } else {
            let c: f64 = conf_raw.parse().map_err(|_| Error::Parse {
                path: source.to_string(),
                line,
                message: format!("confidence '{conf_raw}' is not a number"),
            })?;
            Some(c)
        };
        builder.add_annotation(&sample_id, &rater_id, &label, confidence)?;
    }
    let warnings = builder.warnings().to_vec();
    let dataset = builder.build()?;
    Ok(LoadedDataset { dataset, warnings })
}

/// Serialize to the long CSV format (sample-major, rater-minor row order).
pub fn dataset_to_csv_string(ds: &AnnotationDataset) -> String {
    let mut out = String::from("sample_id,rater_id,rater_kind,label,confidence\n");
    for a in ds.annotations() {
        let kind = ds
            .rater(&a.rater_id)
            .map(|r| r.kind.as_str())
            .unwrap_or("human");
        let conf = a.confidence.map(|c| format!("{c}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_escape(&a.sample_id),
            csv_escape(&a.rater_id),
            kind,
            csv_escape(&a.label),
            conf
        ));
    }
    out
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn save_csv_dataset(ds: &AnnotationDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, dataset_to_csv_string(ds))
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Load the JSON dataset format.
pub fn load_json_dataset(path: impl AsRef<Path>) -> Result<LoadedDataset> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(display.clone(), e))?;
    load_json_str(&text)
}

pub(crate) fn load_json_str(text: &str) -> Result<LoadedDataset> {
    let file: DatasetFile = serde_json::from_str(text)?;
    let mut builder = DatasetBuilder::new(file.scale);
    for r in file.raters {
        builder.add_rater(r)?;
    }
    for s in &file.samples {
        builder.add_sample(s);
    }
    for a in &file.annotations {
        builder.add_annotation(&a.sample_id, &a.rater_id, &a.label, a.confidence)?;
    }
    builder.ratings_per_sample(file.ratings_per_sample);
    let warnings = builder.warnings().to_vec();
    let dataset = builder.build()?;
    Ok(LoadedDataset { dataset, warnings })
}

pub fn dataset_to_json_string(ds: &AnnotationDataset) -> Result<String> {
    let file = DatasetFile {
        scale: ds.scale().clone(),
        raters: ds.raters().to_vec(),
        samples: ds.samples().to_vec(),
        ratings_per_sample: ds.ratings_per_sample(),
        annotations: ds.annotations().cloned().collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn save_json_dataset(ds: &AnnotationDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, dataset_to_json_string(ds)?)
        .map_err(|e| Error::io(path.display().to_string(), e))
}
