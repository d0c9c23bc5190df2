//! Machine- and human-readable run reports.
//!
//! A report embeds the tool version, SHA-256 digests of every input file,
//! and all run parameters, so re-executing with the same inputs reproduces
//! every number. Reports deliberately carry no timestamps: two runs with the
//! same seed must serialize byte-identically. The Markdown summary is
//! derived from the JSON content only.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::delegation::{EffortReport, GateDecision, GateOutcome, Strategy, SweepCurve};
use crate::error::{Error, Result};
use crate::matrix::ZoneSummary;

/// The published schema every report validates against.
pub const REPORT_SCHEMA: &str = include_str!("../schemas/run-report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub seed: u64,
    pub threshold: f64,
    pub fractions: Vec<f64>,
    pub trials: usize,
    pub bootstrap_iterations: usize,
    pub bootstrap_fraction: f64,
    pub level: f64,
    #[serde(default)]
    pub sweep_model: Option<String>,
    #[serde(default)]
    pub strategy: Option<Strategy>,
}

/// Everything one pipeline run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub inputs: Vec<InputDigest>,
    pub parameters: RunParameters,
    pub zone_summaries: Vec<ZoneSummary>,
    pub gate: Option<GateDecision>,
    pub sweeps: Vec<SweepCurve>,
    pub safe_fractions: Vec<f64>,
    pub effort: Vec<EffortReport>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn tool_version() -> String {
        env!("CARGO_PKG_VERSION").to_string()
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Render the human-readable summary from the report content.
    pub fn to_markdown(&self) -> String {
        let mut md = String::new();
        md.push_str("# Annotation delegation report\n\n");
        md.push_str(&format!("Tool version: {}\n\n", self.tool_version));

        md.push_str("## Inputs\n\n");
        md.push_str("| path | sha256 |\n|---|---|\n");
        for input in &self.inputs {
            md.push_str(&format!("| {} | {} |\n", input.path, input.sha256));
        }
        md.push('\n');

        let p = &self.parameters;
        md.push_str("## Parameters\n\n");
        md.push_str(&format!(
            "seed {}, threshold {}, trials {}, bootstrap {} iterations at fraction {}, level {}\n\n",
            p.seed, p.threshold, p.trials, p.bootstrap_iterations, p.bootstrap_fraction, p.level
        ));

        if !self.zone_summaries.is_empty() {
            md.push_str("## Inter-rater agreement by zone\n\n");
            md.push_str("| zone | mean | median | pairs |\n|---|---|---|---|\n");
            for z in &self.zone_summaries {
                md.push_str(&format!(
                    "| {} | {:.3} | {:.3} | {} |\n",
                    z.zone.as_str(),
                    z.mean_alpha,
                    z.median_alpha,
                    z.pair_count
                ));
            }
            md.push_str(
                "\nMedians are taken over pair cells. Pairs involving random raters are excluded.\n\n",
            );
        }

        if let Some(gate) = &self.gate {
            md.push_str("## Gate decision\n\n");
            let verdict = match gate.outcome {
                GateOutcome::ReplaceOneRatingAllSamples => {
                    "replace one rating on all samples"
                }
                GateOutcome::SelectiveHighConfidenceOnly => {
                    "delegate only high-confidence samples"
                }
            };
            md.push_str(&format!(
                "Mean model-model alpha {:.3} vs threshold {} (strict): **{}**.\n\n",
                gate.mm_mean_alpha, gate.threshold, verdict
            ));
        }

        for (i, sweep) in self.sweeps.iter().enumerate() {
            let strategy = sweep
                .points
                .first()
                .map(|p| p.strategy.as_str())
                .unwrap_or("?");
            md.push_str(&format!("## Replacement sweep ({strategy})\n\n"));
            md.push_str(&format!(
                "Human-only baseline alpha {:.3}, {:.0}% CI [{:.3}, {:.3}] ({} trials per point).\n\n",
                sweep.baseline.point,
                sweep.baseline.level * 100.0,
                sweep.baseline.lower,
                sweep.baseline.upper,
                sweep.trials_per_point
            ));
            md.push_str("| fraction | mean alpha | ci lower | ci upper |\n|---|---|---|---|\n");
            for point in &sweep.points {
                md.push_str(&format!(
                    "| {:.2} | {:.3} | {:.3} | {:.3} |\n",
                    point.fraction, point.mean_alpha, point.ci.lower, point.ci.upper
                ));
            }
            if let Some(f) = self.safe_fractions.get(i) {
                md.push_str(&format!("\nMaximum safe delegation fraction: **{f}**.\n"));
            }
            md.push('\n');
        }

        if !self.effort.is_empty() {
            md.push_str("## Effort saved\n\n");
            md.push_str(
                "| ratings per sample | safe fraction | one rating | overall |\n|---|---|---|---|\n",
            );
            for e in &self.effort {
                md.push_str(&format!(
                    "| {} | {} | {}% | {}% |\n",
                    e.ratings_per_sample,
                    e.safe_fraction,
                    e.display_one_rating_pct(),
                    e.display_overall_pct()
                ));
            }
            md.push('\n');
        }

        if !self.warnings.is_empty() {
            md.push_str("## Warnings\n\n");
            for w in &self.warnings {
                md.push_str(&format!("- {w}\n"));
            }
        }
        md
    }
}

/// SHA-256 digest of a file, hex-encoded.
pub fn sha256_file(path: impl AsRef<Path>) -> Result<InputDigest> {
    let path = path.as_ref();
    let bytes =
        std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(hasher.finalize()),
    })
}

/// Validate a JSON value against the published report schema.
///
/// Implements the subset of JSON Schema the report schema uses: `type`
/// (including type arrays), `required`, `properties`, `items`, `enum`,
/// `oneOf`, and `$ref` into `#/definitions`.
pub fn validate_report_json(value: &serde_json::Value) -> Result<()> {
    let schema: serde_json::Value =
        serde_json::from_str(REPORT_SCHEMA).expect("embedded schema parses");
    check_schema(value, &schema, &schema, "#")
}

fn check_schema(
    value: &serde_json::Value,
    node: &serde_json::Value,
    root: &serde_json::Value,
    pointer: &str,
) -> Result<()> {
    use serde_json::Value;

    if let Some(reference) = node.get("$ref").and_then(|r| r.as_str()) {
        let target = reference
            .strip_prefix("#/")
            .and_then(|p| root.pointer(&format!("/{p}")))
            .ok_or_else(|| Error::ReportSchema {
                pointer: pointer.to_string(),
                message: format!("unresolvable $ref {reference}"),
            })?;
        return check_schema(value, target, root, pointer);
    }

    if let Some(alternatives) = node.get("oneOf").and_then(|o| o.as_array()) {
        let matched = alternatives
            .iter()
            .filter(|alt| check_schema(value, alt, root, pointer).is_ok())
            .count();
        if matched != 1 {
            return Err(Error::ReportSchema {
                pointer: pointer.to_string(),
                message: format!("matched {matched} of {} oneOf alternatives", alternatives.len()),
            });
        }
        return Ok(());
    }

    if let Some(expected) = node.get("type") {
        let names: Vec<&str> = match expected {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(|v| v.as_str()).collect(),
            _ => vec![],
        };
        let ok = names.iter().any(|name| match *name {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "number" => value.is_number(),
            "integer" => value.is_i64() || value.is_u64(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            _ => false,
        });
        if !ok {
            return Err(Error::ReportSchema {
                pointer: pointer.to_string(),
                message: format!("expected type {names:?}"),
            });
        }
    }

    if let Some(allowed) = node.get("enum").and_then(|e| e.as_array()) {
        if !allowed.contains(value) {
            return Err(Error::ReportSchema {
                pointer: pointer.to_string(),
                message: format!("value {value} not in enum"),
            });
        }
    }

    if let Some(required) = node.get("required").and_then(|r| r.as_array()) {
        for key in required.iter().filter_map(|k| k.as_str()) {
            if value.get(key).is_none() {
                return Err(Error::ReportSchema {
                    pointer: pointer.to_string(),
                    message: format!("missing required field '{key}'"),
                });
            }
        }
    }

    if let (Some(props), Some(object)) = (
        node.get("properties").and_then(|p| p.as_object()),
        value.as_object(),
    ) {
        for (key, sub) in props {
            if let Some(v) = object.get(key) {
                check_schema(v, sub, root, &format!("{pointer}/{key}"))?;
            }
        }
    }

    if let (Some(items), Some(array)) = (node.get("items"), value.as_array()) {
        for (i, v) in array.iter().enumerate() {
            check_schema(v, items, root, &format!("{pointer}/{i}"))?;
        }
    }

    Ok(())
}
