//! Command-line front end. All logic lives in the library; this binary
//! parses arguments, wires files to library calls, and maps errors to exit
//! codes (0 success, 2 input validation, 3 pipeline precondition, 4 provider
//! failure).

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use agreegate::dataset::{dataset_to_csv_string, DatasetBuilder};
use agreegate::delegation::{
    confidence_profile, effort_report, gate, majority_agreement_curve, max_safe_fraction,
    replacement_sweep, GateOutcome, ModelRatings, Strategy, SweepConfig,
};
use agreegate::llm::{
    annotate, AnnotateBackend, Cassette, HttpTransport, LiveOptions, PromptTemplate, SampleText,
};
use agreegate::matrix::{agreement_matrix, zone_summaries};
use agreegate::report::{sha256_file, validate_report_json, RunParameters, RunReport};
use agreegate::{
    default_fraction_grid, load_csv_dataset, load_dataset, load_json_dataset, AnnotationDataset,
    DatasetFormat, Error, LabelScale, LoadedDataset, RaterKind, RngSeed,
};

#[derive(Parser)]
#[command(name = "agreegate", version, about = "Inter-rater agreement analytics and delegation of annotation effort to model raters")]
struct Cli {
    #[command(flatten)]
    globals: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trials per sweep point.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Bootstrap iterations for the human-only baseline.
    #[arg(long = "bootstrap-iters", global = true, default_value_t = 1000)]
    bootstrap_iters: usize,
    /// Fraction of samples drawn (without replacement) per bootstrap iteration.
    #[arg(long = "bootstrap-fraction", global = true, default_value_t = 0.5)]
    bootstrap_fraction: f64,
    /// Gate threshold on mean model-model alpha (strict).
    #[arg(long, global = true, default_value_t = 0.5)]
    threshold: f64,
    /// Comma-separated delegation fraction grid (must include 0 and 1).
    #[arg(long, global = true, value_delimiter = ',')]
    fractions: Option<Vec<f64>>,
    /// Confidence level for intervals.
    #[arg(long, global = true, default_value_t = 0.95)]
    level: f64,
}

impl GlobalOpts {
    fn fraction_grid(&self) -> Vec<f64> {
        self.fractions.clone().unwrap_or_else(default_fraction_grid)
    }

    fn sweep_config(&self, strategy: Strategy) -> SweepConfig {
        SweepConfig {
            fractions: self.fraction_grid(),
            strategy,
            trials: self.trials,
            seed: RngSeed(self.seed),
            bootstrap_iterations: self.bootstrap_iters,
            bootstrap_fraction: self.bootstrap_fraction,
            level: self.level,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the pairwise agreement matrix and zone summaries.
    Agree {
        /// Dataset (long CSV, or JSON with embedded scale).
        #[arg(long)]
        data: PathBuf,
        /// Scale definition JSON (required for CSV data).
        #[arg(long)]
        scale: Option<PathBuf>,
        /// Restrict model participation in zone summaries to these rater ids.
        #[arg(long, value_delimiter = ',')]
        models: Option<Vec<String>>,
        /// Write the rater-by-rater grid as CSV.
        #[arg(long)]
        matrix_csv: Option<PathBuf>,
        /// Write the cell list with zone tags as JSON.
        #[arg(long)]
        matrix_json: Option<PathBuf>,
    },
    /// Decide whether one rating per sample can be delegated, from
    /// model-model agreement.
    Gate {
        /// Optional human dataset merged in for context.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        scale: Option<PathBuf>,
        /// Model answer files (long CSV; at least two model raters in total).
        #[arg(long = "model-answers", required = true)]
        model_answers: Vec<PathBuf>,
    },
    /// Replacement sweep for one model over the fraction grid.
    Sweep {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        scale: Option<PathBuf>,
        #[arg(long = "model-answers")]
        model_answers: PathBuf,
        /// Rater id inside the answers file (default: its first model rater).
        #[arg(long)]
        rater: Option<String>,
        #[arg(long, value_enum, default_value_t = StrategyArg::ByConfidence)]
        strategy: StrategyArg,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full gate -> sweep -> safe-fraction -> effort pipeline with a report.
    Pipeline {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        scale: Option<PathBuf>,
        #[arg(long = "model-answers", required = true)]
        model_answers: Vec<PathBuf>,
        /// Model whose answers drive the sweep (default: first model rater).
        #[arg(long)]
        sweep_model: Option<String>,
        /// Override the dataset's inferred ratings-per-sample k.
        #[arg(long)]
        ratings_per_sample: Option<usize>,
        /// Report JSON path.
        #[arg(long)]
        report: PathBuf,
        /// Optional Markdown summary path.
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
    /// Effort arithmetic for a given k and safe fraction.
    Effort {
        #[arg(long)]
        ratings_per_sample: usize,
        #[arg(long)]
        safe_fraction: f64,
        /// Also print the report as JSON.
        #[arg(long, default_value_t = false)]
        json: bool,
    },
    /// Query a model rater over a sample list and write long-CSV answers.
    Annotate {
        /// JSON-lines file of {"sample_id": ..., "text": ...} records.
        #[arg(long)]
        samples: PathBuf,
        /// Plain-text template with [[guidelines]] and [[question]] sections.
        #[arg(long)]
        template: PathBuf,
        /// Sidecar JSON with few-shot pairs.
        #[arg(long)]
        shots: Option<PathBuf>,
        /// Scale definition JSON (options come from its labels).
        #[arg(long)]
        scale: PathBuf,
        /// Provider config (TOML or JSON).
        #[arg(long)]
        provider: PathBuf,
        #[arg(long)]
        cassette: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = AnnotateMode::Live)]
        mode: AnnotateMode,
        /// Rater id to write into the answers file (default: model name).
        #[arg(long)]
        rater_id: Option<String>,
        /// Output answers CSV.
        #[arg(long)]
        out: PathBuf,
        /// Failure manifest JSON (default: <out>.failures.json).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Confidence-at-percentile profile of one model's answers.
    Profile {
        #[arg(long = "model-answers")]
        model_answers: PathBuf,
        #[arg(long)]
        scale: Option<PathBuf>,
        #[arg(long)]
        rater: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cumulative share of samples where the model matches the strict human
    /// majority, by descending confidence.
    Majority {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        scale: Option<PathBuf>,
        #[arg(long = "model-answers")]
        model_answers: PathBuf,
        #[arg(long)]
        rater: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    ByConfidence,
    Random,
}

impl From<StrategyArg> for Strategy {
    fn from(v: StrategyArg) -> Strategy {
        match v {
            StrategyArg::ByConfidence => Strategy::ByConfidence,
            StrategyArg::Random => Strategy::Random,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AnnotateMode {
    /// Query the provider and persist every exchange to the cassette.
    Record,
    /// Serve answers from the cassette; no network.
    Replay,
    /// Query the provider without recording.
    Live,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::MissingConfidence(_) = e {
                eprintln!(
                    "hint: the selective path needs per-sample confidences; re-run annotation \
                     against a provider that exposes token probabilities, or pass model answers \
                     whose confidence column is filled"
                );
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::Schema { .. }
        | Error::DuplicateCell { .. }
        | Error::UnknownRater(_)
        | Error::NoPairableData
        | Error::DegenerateData
        | Error::FewerThanTwoRaters(_)
        | Error::Json(_)
        | Error::Template { .. }
        | Error::ShotLabelNotInOptions(_)
        | Error::InvalidParameter { .. } => 2,
        Error::FewerThanTwoModels(_)
        | Error::AllModelPairsUndefined
        | Error::LengthMismatch { .. }
        | Error::ConstantVector
        | Error::AllIterationsDegenerate(_)
        | Error::MissingModelAnswer(_)
        | Error::MissingConfidence(_)
        | Error::ReportSchema { .. } => 3,
        Error::Provider { .. } | Error::CassetteMiss { .. } | Error::Cassette { .. } => 4,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Agree { data, scale, models, matrix_csv, matrix_json } => {
            cmd_agree(&cli.globals, &data, scale.as_deref(), models, matrix_csv, matrix_json)
        }
        Command::Gate { data, scale, model_answers } => {
            cmd_gate(&cli.globals, data.as_deref(), scale.as_deref(), &model_answers)
        }
        Command::Sweep { data, scale, model_answers, rater, strategy, out } => cmd_sweep(
            &cli.globals,
            &data,
            scale.as_deref(),
            &model_answers,
            rater,
            strategy.into(),
            out,
        ),
        Command::Pipeline {
            data,
            scale,
            model_answers,
            sweep_model,
            ratings_per_sample,
            report,
            markdown,
        } => cmd_pipeline(
            &cli.globals,
            &data,
            scale.as_deref(),
            &model_answers,
            sweep_model,
            ratings_per_sample,
            &report,
            markdown,
        ),
        Command::Effort { ratings_per_sample, safe_fraction, json } => {
            let r = effort_report(ratings_per_sample, safe_fraction)?;
            println!(
                "ratings per sample: {}\nsafe fraction: {}\none rating saved: {}%\noverall saved: {}%",
                r.ratings_per_sample,
                r.safe_fraction,
                r.display_one_rating_pct(),
                r.display_overall_pct()
            );
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            }
            Ok(())
        }
        Command::Annotate {
            samples,
            template,
            shots,
            scale,
            provider,
            cassette,
            mode,
            rater_id,
            out,
            manifest,
        } => cmd_annotate(
            &samples, &template, shots.as_deref(), &scale, &provider, cassette.as_deref(), mode,
            rater_id, &out, manifest,
        ),
        Command::Profile { model_answers, scale, rater, out } => {
            let ds = load_any(&model_answers, scale.as_deref())?.dataset;
            let rater = resolve_model_rater(&ds, rater)?;
            let ratings = ModelRatings::from_dataset(&ds, &rater)?;
            let profile = confidence_profile(&ratings)?;
            let mut csv = String::from("fraction,confidence\n");
            for p in &profile {
                csv.push_str(&format!("{},{}\n", p.fraction, p.confidence));
            }
            write_or_print(out.as_deref(), &csv)
        }
        Command::Majority { data, scale, model_answers, rater, out } => {
            let scale_value = load_scale(&data, scale.as_deref())?;
            let human = load_any_with(&data, scale_value.clone())?.dataset;
            let answers = load_any_with(&model_answers, scale_value)?.dataset;
            let rater = resolve_model_rater(&answers, rater)?;
            let ratings = ModelRatings::from_dataset(&answers, &rater)?;
            let curve = majority_agreement_curve(&human, &ratings)?;
            let mut csv = String::from("fraction,share\n");
            for p in &curve {
                csv.push_str(&format!("{},{}\n", p.fraction, p.share));
            }
            write_or_print(out.as_deref(), &csv)
        }
    }
}

/// Load a dataset whose format is chosen by extension (.json vs CSV).
fn load_any(path: &Path, scale: Option<&Path>) -> Result<LoadedDataset, Error> {
    let format = if path.extension().is_some_and(|e| e == "json") {
        DatasetFormat::Json
    } else {
        DatasetFormat::CsvLong
    };
    let scale_value = match (format, scale) {
        (DatasetFormat::Json, _) => None,
        (DatasetFormat::CsvLong, Some(p)) => Some(LabelScale::from_json_file(p)?),
        (DatasetFormat::CsvLong, None) => {
            return Err(Error::Schema {
                location: path.display().to_string(),
                message: "CSV data needs --scale".into(),
            })
        }
    };
    load_dataset(path, format, scale_value)
}

fn load_scale(data: &Path, scale: Option<&Path>) -> Result<LabelScale, Error> {
    match scale {
        Some(p) => LabelScale::from_json_file(p),
        None => Ok(load_any(data, None)?.dataset.scale().clone()),
    }
}

fn load_any_with(path: &Path, scale: LabelScale) -> Result<LoadedDataset, Error> {
    if path.extension().is_some_and(|e| e == "json") {
        load_json_dataset(path)
    } else {
        load_csv_dataset(path, scale)
    }
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn resolve_model_rater(ds: &AnnotationDataset, requested: Option<String>) -> Result<String, Error> {
    match requested {
        Some(id) => {
            if ds.rater(&id).is_none() {
                return Err(Error::UnknownRater(id));
            }
            Ok(id)
        }
        None => ds
            .raters()
            .iter()
            .find(|r| r.kind == RaterKind::Model)
            .map(|r| r.id.clone())
            .ok_or(Error::FewerThanTwoModels(0)),
    }
}

fn merge_model_answer_files(
    base: AnnotationDataset,
    scale: &LabelScale,
    files: &[PathBuf],
) -> Result<AnnotationDataset, Error> {
    let mut merged = base;
    for path in files {
        let answers = load_any_with(path, scale.clone())?.dataset;
        merged = merged.merge(&answers)?;
    }
    Ok(merged)
}

fn cmd_agree(
    _globals: &GlobalOpts,
    data: &Path,
    scale: Option<&Path>,
    models: Option<Vec<String>>,
    matrix_csv: Option<PathBuf>,
    matrix_json: Option<PathBuf>,
) -> Result<(), Error> {
    let loaded = load_any(data, scale)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    let matrix = agreement_matrix(&loaded.dataset)?;
    if matrix.defined_pairs().next().is_none() {
        return Err(Error::NoPairableData);
    }
    let subset: Option<BTreeSet<String>> = models.map(|m| m.into_iter().collect());
    let summaries = zone_summaries(&matrix, subset.as_ref());
    println!("zone,mean_alpha,median_alpha,pair_count");
    for s in &summaries {
        println!(
            "{},{:.6},{:.6},{}",
            s.zone.as_str(),
            s.mean_alpha,
            s.median_alpha,
            s.pair_count
        );
    }
    if let Some(p) = matrix_csv {
        std::fs::write(&p, matrix.to_csv()).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        })?;
    }
    if let Some(p) = matrix_json {
        std::fs::write(&p, matrix.to_json()?).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        })?;
    }
    Ok(())
}

fn cmd_gate(
    globals: &GlobalOpts,
    data: Option<&Path>,
    scale: Option<&Path>,
    model_answers: &[PathBuf],
) -> Result<(), Error> {
    let scale_value = match (data, scale) {
        (Some(d), s) => load_scale(d, s)?,
        (None, Some(s)) => LabelScale::from_json_file(s)?,
        (None, None) => {
            return Err(Error::Schema {
                location: "gate".into(),
                message: "need --scale (or --data with an embedded scale)".into(),
            })
        }
    };
    let base = match data {
        Some(d) => load_any_with(d, scale_value.clone())?.dataset,
        None => DatasetBuilder::new(scale_value.clone()).build()?,
    };
    let merged = merge_model_answer_files(base, &scale_value, model_answers)?;
    let decision = gate(&merged, globals.threshold)?;
    println!("{}", serde_json::to_string_pretty(&decision)?);
    Ok(())
}

fn cmd_sweep(
    globals: &GlobalOpts,
    data: &Path,
    scale: Option<&Path>,
    model_answers: &Path,
    rater: Option<String>,
    strategy: Strategy,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let scale_value = load_scale(data, scale)?;
    let human = load_any_with(data, scale_value.clone())?.dataset;
    let answers = load_any_with(model_answers, scale_value)?.dataset;
    let rater = resolve_model_rater(&answers, rater)?;
    let ratings = ModelRatings::from_dataset(&answers, &rater)?;
    let curve = replacement_sweep(&human, &ratings, &globals.sweep_config(strategy))?;
    write_or_print(out.as_deref(), &curve.to_csv())?;
    eprintln!("max safe fraction: {}", max_safe_fraction(&curve)?);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_pipeline(
    globals: &GlobalOpts,
    data: &Path,
    scale: Option<&Path>,
    model_answers: &[PathBuf],
    sweep_model: Option<String>,
    ratings_per_sample: Option<usize>,
    report_path: &Path,
    markdown: Option<PathBuf>,
) -> Result<(), Error> {
    let scale_value = load_scale(data, scale)?;
    let loaded = load_any_with(data, scale_value.clone())?;
    let mut warnings = loaded.warnings;
    let mut human = loaded.dataset;
    if let Some(k) = ratings_per_sample {
        human.set_ratings_per_sample(k);
    }
    let merged = merge_model_answer_files(human.clone(), &scale_value, model_answers)?;

    let matrix = agreement_matrix(&merged)?;
    let summaries = zone_summaries(&matrix, None);
    let decision = gate(&merged, globals.threshold)?;
    let strategy = match decision.outcome {
        GateOutcome::ReplaceOneRatingAllSamples => Strategy::Random,
        GateOutcome::SelectiveHighConfidenceOnly => Strategy::ByConfidence,
    };
    let sweep_rater = resolve_model_rater(&merged, sweep_model)?;
    let ratings = ModelRatings::from_dataset(&merged, &sweep_rater)?;
    let curve = replacement_sweep(&human, &ratings, &globals.sweep_config(strategy))?;
    let safe = max_safe_fraction(&curve)?;
    let effort = effort_report(human.ratings_per_sample(), safe)?;

    let mut inputs = vec![sha256_file(data)?];
    if let Some(s) = scale {
        inputs.push(sha256_file(s)?);
    }
    for p in model_answers {
        inputs.push(sha256_file(p)?);
    }

    let report = RunReport {
        tool_version: RunReport::tool_version(),
        inputs,
        parameters: RunParameters {
            seed: globals.seed,
            threshold: globals.threshold,
            fractions: globals.fraction_grid(),
            trials: globals.trials,
            bootstrap_iterations: globals.bootstrap_iters,
            bootstrap_fraction: globals.bootstrap_fraction,
            level: globals.level,
            sweep_model: Some(sweep_rater),
            strategy: Some(strategy),
        },
        zone_summaries: summaries,
        gate: Some(decision),
        sweeps: vec![curve],
        safe_fractions: vec![safe],
        effort: vec![effort],
        warnings: std::mem::take(&mut warnings),
    };
    let json = report.to_json_pretty()?;
    validate_report_json(&serde_json::from_str(&json)?)?;
    std::fs::write(report_path, &json).map_err(|e| Error::Io {
        path: report_path.display().to_string(),
        source: e,
    })?;
    if let Some(md_path) = markdown {
        std::fs::write(&md_path, report.to_markdown()).map_err(|e| Error::Io {
            path: md_path.display().to_string(),
            source: e,
        })?;
    }
    println!(
        "gate: {} (mm mean alpha {:.3}); safe fraction {}; overall effort saved {}%",
        match report.gate.as_ref().unwrap().outcome {
            GateOutcome::ReplaceOneRatingAllSamples => "replace one rating on all samples",
            GateOutcome::SelectiveHighConfidenceOnly => "selective high-confidence delegation",
        },
        report.gate.as_ref().unwrap().mm_mean_alpha,
        safe,
        report.effort[0].display_overall_pct()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_annotate(
    samples_path: &Path,
    template_path: &Path,
    shots: Option<&Path>,
    scale_path: &Path,
    provider_path: &Path,
    cassette_path: Option<&Path>,
    mode: AnnotateMode,
    rater_id: Option<String>,
    out: &Path,
    manifest: Option<PathBuf>,
) -> Result<(), Error> {
    let scale = LabelScale::from_json_file(scale_path)?;
    let options = scale
        .labels()
        .map(|l| l.to_vec())
        .ok_or_else(|| Error::Schema {
            location: scale_path.display().to_string(),
            message: "annotation needs a nominal or ordinal scale with labels".into(),
        })?;
    let template = PromptTemplate::from_files(template_path, shots, options)?;
    for w in template.lint() {
        eprintln!("template warning: {w}");
    }
    let cfg = agreegate::llm::ProviderConfig::from_file(provider_path)?;
    let samples = load_samples_jsonl(samples_path)?;

    fn need_cassette(p: Option<&Path>) -> Result<&Path, Error> {
        p.ok_or_else(|| Error::Schema {
            location: "annotate".into(),
            message: "this mode needs --cassette".into(),
        })
    }
    let answers = match mode {
        AnnotateMode::Replay => {
            let cassette = Cassette::load(need_cassette(cassette_path)?)?;
            annotate(&samples, &template, &cfg, &AnnotateBackend::Replay(&cassette))?
        }
        AnnotateMode::Record => {
            let cassette = Cassette::open_for_recording(need_cassette(cassette_path)?)?;
            let transport = HttpTransport::new()?;
            annotate(
                &samples,
                &template,
                &cfg,
                &AnnotateBackend::Live(LiveOptions {
                    transport: &transport,
                    record_to: Some(&cassette),
                    clock: None,
                }),
            )?
        }
        AnnotateMode::Live => {
            let transport = HttpTransport::new()?;
            annotate(
                &samples,
                &template,
                &cfg,
                &AnnotateBackend::Live(LiveOptions {
                    transport: &transport,
                    record_to: None,
                    clock: None,
                }),
            )?
        }
    };

    // Answers as a long-CSV dataset with one model rater.
    let rater = rater_id.unwrap_or_else(|| cfg.model.clone());
    let mut builder = DatasetBuilder::new(scale);
    builder.add_rater(agreegate::Rater::model(rater.clone()))?;
    let mut failures = Vec::new();
    for a in &answers {
        match &a.label {
            Some(label) => {
                builder.add_annotation(&a.sample_id, &rater, label, a.confidence)?;
            }
            None => failures.push(serde_json::json!({
                "sample_id": a.sample_id,
                "error": a.error.clone().unwrap_or_else(|| "failed".into()),
            })),
        }
    }
    let ds = builder.build()?;
    std::fs::write(out, dataset_to_csv_string(&ds)).map_err(|e| Error::Io {
        path: out.display().to_string(),
        source: e,
    })?;
    eprintln!(
        "{} samples annotated, {} failed, written to {}",
        answers.len() - failures.len(),
        failures.len(),
        out.display()
    );
    if !failures.is_empty() {
        let manifest_path = manifest.unwrap_or_else(|| {
            PathBuf::from(format!("{}.failures.json", out.display()))
        });
        std::fs::write(
            &manifest_path,
            serde_json::to_string_pretty(&failures)?,
        )
        .map_err(|e| Error::Io {
            path: manifest_path.display().to_string(),
            source: e,
        })?;
        return Err(Error::Provider {
            provider: cfg.provider,
            message: format!(
                "{} of {} samples failed; manifest at {}",
                failures.len(),
                answers.len(),
                manifest_path.display()
            ),
        });
    }
    Ok(())
}

fn load_samples_jsonl(path: &Path) -> Result<Vec<SampleText>, Error> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: display.clone(),
        source: e,
    })?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let sample: SampleText = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: display.clone(),
            line: (i + 1) as u64,
            message: e.to_string(),
        })?;
        samples.push(sample);
    }
    Ok(samples)
}
