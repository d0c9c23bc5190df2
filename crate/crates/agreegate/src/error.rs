//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by dataset ingestion, agreement computation, simulation,
/// and model querying.
#[derive(Debug, Error)]
pub enum Error {
    /// A file could not be read or written.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A CSV row failed to parse.
    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    /// A value violated the dataset schema (unknown label, bad kind, ...).
    #[error("schema violation at {location}: {message}")]
    Schema { location: String, message: String },

    /// Two annotations target the same (sample, rater) cell.
    #[error("duplicate annotation for sample '{sample_id}' by rater '{rater_id}'")]
    DuplicateCell { sample_id: String, rater_id: String },

    /// A rater id was referenced but is not part of the dataset.
    #[error("unknown rater id '{0}'")]
    UnknownRater(String),

    /// No unit carries two or more ratings, so no agreement is computable.
    #[error("no pairable data: no unit has two or more ratings")]
    NoPairableData,

    /// Expected disagreement is zero (all pairable values identical), so
    /// alpha is undefined. Reported distinctly from alpha = 1.
    #[error("degenerate data: all pairable values identical, alpha undefined")]
    DegenerateData,

    /// An agreement matrix needs at least two raters.
    #[error("fewer than two raters: {0} present")]
    FewerThanTwoRaters(usize),

    /// The gate needs at least two model raters.
    #[error("fewer than two model raters: {0} present")]
    FewerThanTwoModels(usize),

    /// Every model pair was degenerate or shared no samples.
    #[error("all model pairs are degenerate or empty; model-model agreement undefined")]
    AllModelPairsUndefined,

    /// Input vectors have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// A rank correlation over a constant vector is undefined.
    #[error("constant vector: rank correlation undefined")]
    ConstantVector,

    /// A parameter was outside its admissible range.
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: String, message: String },

    /// Every resample draw was degenerate.
    #[error("all {0} bootstrap iterations were degenerate")]
    AllIterationsDegenerate(usize),

    /// A model answer is missing for a sample that may be replaced.
    #[error("missing model answer for sample '{0}'")]
    MissingModelAnswer(String),

    /// A model confidence is missing where a strategy requires one.
    #[error("missing model confidence for sample '{0}'")]
    MissingConfidence(String),

    /// A few-shot label is not one of the prompt options.
    #[error("shot label '{0}' is not in the option set")]
    ShotLabelNotInOptions(String),

    /// Prompt template file is malformed.
    #[error("template error in {path}: {message}")]
    Template { path: String, message: String },

    /// The provider failed after all retries.
    #[error("provider '{provider}' failed: {message}")]
    Provider { provider: String, message: String },

    /// Replay was requested but the cassette holds no record for a prompt.
    #[error("cassette miss for key {key} (sample '{sample_id}'): prompt not recorded")]
    CassetteMiss { key: String, sample_id: String },

    /// A cassette line could not be decoded.
    #[error("cassette error in {path}: {message}")]
    Cassette { path: String, message: String },

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A run report failed schema validation.
    #[error("report schema violation at {pointer}: {message}")]
    ReportSchema { pointer: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            message: message.into(),
        }
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
