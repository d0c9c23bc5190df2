//! Few-shot prompting of model raters: prompt construction, provider
//! transport with rate limiting and retries, answer parsing into the label
//! space, answer-probability confidence, and cassette record/replay for
//! offline determinism.

mod annotate;
mod cassette;
mod parse;
mod prompt;
mod provider;

pub use annotate::{annotate, AnnotateBackend, LiveOptions, ModelAnswer, SampleText};
pub use cassette::{Cassette, CassetteRecord};
pub use parse::{extract_confidence, normalize_answer, parse_label};
pub use prompt::{PromptTemplate, Shot};
pub use provider::{
    Clock, HttpTransport, ProviderConfig, ProviderRequest, ProviderResponse, RateLimiter,
    SystemClock, TokenProb, Transport,
};
