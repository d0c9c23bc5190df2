//! Normalization and parsing of model output into the label space, and
//! answer-probability extraction.

use super::provider::{ProviderResponse, TokenProb};

/// Lowercase, collapse whitespace runs, and strip terminal punctuation.
pub fn normalize_answer(raw: &str) -> String {
    let lowered = raw.to_lowercase();
    let collapsed = lowered.split_whitespace().collect::<Vec<_>>().join(" ");
    collapsed
        .trim_end_matches(['.', ',', '!', '?', ';', ':'])
        .trim()
        .to_string()
}

/// Map raw model text onto one of the options, or `None`.
///
/// Matching is case-insensitive on normalized text and requires the full
/// option string on word boundaries; options are tried longest first, so
/// "strongly agree" never resolves to "Agree". Parsing is total over the
/// option set: `parse_label(o, options)` returns `o` for every option.
pub fn parse_label(raw: &str, options: &[String]) -> Option<String> {
    let text = normalize_answer(raw);
    if text.is_empty() {
        return None;
    }
    let mut by_length: Vec<&String> = options.iter().collect();
    by_length.sort_by_key(|o| std::cmp::Reverse(normalize_answer(o).len()));
    for option in by_length {
        let needle = normalize_answer(option);
        if needle.is_empty() {
            continue;
        }
        if text == needle || contains_on_boundaries(&text, &needle) {
            return Some(option.clone());
        }
    }
    None
}

fn contains_on_boundaries(haystack: &str, needle: &str) -> bool {
    let mut start = 0;
    while let Some(pos) = haystack[start..].find(needle) {
        let begin = start + pos;
        let end = begin + needle.len();
        let before_ok = begin == 0
            || !haystack[..begin]
                .chars()
                .next_back()
                .is_some_and(|c| c.is_alphanumeric());
        let after_ok = end == haystack.len()
            || !haystack[end..]
                .chars()
                .next()
                .is_some_and(|c| c.is_alphanumeric());
        if before_ok && after_ok {
            return true;
        }
        start = begin + needle.len().max(1);
        if start >= haystack.len() {
            break;
        }
    }
    false
}

/// Geometric mean of the probabilities of the tokens composing the parsed
/// label. Absent (not zero) when the provider exposes no probabilities or
/// the label cannot be located in the output.
pub fn extract_confidence(response: &ProviderResponse, label: &str) -> Option<f64> {
    let probs = response.token_probs.as_ref()?;
    let span = locate_label(&response.raw_text, probs, label)?;
    geometric_mean(&span)
}

/// Tokens overlapping the first case-insensitive occurrence of the label in
/// the concatenated token stream.
fn locate_label(raw_text: &str, probs: &[TokenProb], label: &str) -> Option<Vec<f64>> {
    let joined: String = probs.iter().map(|t| t.token.as_str()).collect();
    // Prefer the token stream; fall back to the reported text when the
    // provider omits token strings.
    let haystack = if joined.is_empty() { raw_text } else { &joined };
    let start = haystack.to_lowercase().find(&label.to_lowercase())?;
    let end = start + label.len();
    if joined.is_empty() {
        // No per-token offsets available; treat all tokens as the answer.
        return Some(probs.iter().map(|t| t.probability).collect());
    }
    let mut offset = 0;
    let mut selected = Vec::new();
    for t in probs {
        let token_start = offset;
        let token_end = offset + t.token.len();
        if token_end > start && token_start < end {
            selected.push(t.probability);
        }
        offset = token_end;
    }
    Some(selected)
}

fn geometric_mean(probs: &[f64]) -> Option<f64> {
    if probs.is_empty() {
        return None;
    }
    if probs.iter().any(|p| *p <= 0.0) {
        return Some(0.0);
    }
    let log_sum: f64 = probs.iter().map(|p| p.ln()).sum();
    Some((log_sum / probs.len() as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn likert() -> Vec<String> {
        vec![
            "Strongly agree".into(),
            "Agree".into(),
            "Disagree".into(),
            "Strongly disagree".into(),
        ]
    }

    #[test]
    fn normalization_strips_case_space_and_punctuation() {
        assert_eq!(normalize_answer("  Strongly   Agree.  "), "strongly agree");
        assert_eq!(normalize_answer("agree!!"), "agree");
        assert_eq!(normalize_answer("OPEN"), "open");
    }

    #[test]
    fn parse_is_total_over_option_sets() {
        let option_sets: Vec<Vec<String>> = vec![
            likert(),
            (1..=5).map(|i| i.to_string()).collect(),
            vec!["0".into(), "1".into()],
            vec!["open".into(), "closed".into(), "unknown".into()],
        ];
        for options in option_sets {
            for option in &options {
                assert_eq!(
                    parse_label(&normalize_answer(option), &options).as_ref(),
                    Some(option),
                    "option {option}"
                );
                assert_eq!(parse_label(option, &options).as_ref(), Some(option));
            }
        }
    }

    #[test]
    fn longest_match_wins() {
        assert_eq!(
            parse_label("strongly agree.", &likert()).unwrap(),
            "Strongly agree"
        );
        assert_eq!(
            parse_label("I would say Strongly disagree", &likert()).unwrap(),
            "Strongly disagree"
        );
    }

    #[test]
    fn boundary_checks_prevent_partial_hits() {
        let binary = vec!["1".to_string(), "5".to_string()];
        assert_eq!(parse_label("15", &binary), None);
        assert_eq!(parse_label("rating: 5", &binary).unwrap(), "5");
        let oc = vec!["open".to_string(), "closed".to_string()];
        assert_eq!(parse_label("reopened", &oc), None);
        assert_eq!(parse_label("it is open.", &oc).unwrap(), "open");
    }

    #[test]
    fn prose_without_option_fails() {
        assert_eq!(parse_label("I cannot decide on this one", &likert()), None);
        assert_eq!(parse_label("", &likert()), None);
    }

    fn response(tokens: &[(&str, f64)], text: &str) -> ProviderResponse {
        ProviderResponse {
            raw_text: text.to_string(),
            token_probs: Some(
                tokens
                    .iter()
                    .map(|(t, p)| TokenProb {
                        token: t.to_string(),
                        probability: *p,
                    })
                    .collect(),
            ),
            meta: serde_json::Value::Null,
        }
    }

    #[test]
    fn single_token_confidence_is_its_probability() {
        let r = response(&[("Agree", 0.8)], "Agree");
        assert_abs_diff_eq!(extract_confidence(&r, "Agree").unwrap(), 0.8, epsilon = 1e-12);
    }

    #[test]
    fn multi_token_confidence_is_geometric_mean() {
        let r = response(&[("Strongly", 0.9), (" agree", 0.4)], "Strongly agree");
        assert_abs_diff_eq!(
            extract_confidence(&r, "Strongly agree").unwrap(),
            0.6,
            epsilon = 1e-12
        );
    }

    #[test]
    fn trailing_punctuation_tokens_excluded() {
        let r = response(&[("Agree", 0.8), (".", 0.99)], "Agree.");
        assert_abs_diff_eq!(extract_confidence(&r, "Agree").unwrap(), 0.8, epsilon = 1e-12);
    }

    #[test]
    fn absent_probabilities_propagate_as_none() {
        let r = ProviderResponse {
            raw_text: "Agree".into(),
            token_probs: None,
            meta: serde_json::Value::Null,
        };
        assert_eq!(extract_confidence(&r, "Agree"), None);
    }

    #[test]
    fn zero_probability_clamps_to_zero() {
        let r = response(&[("Agree", 0.0)], "Agree");
        assert_eq!(extract_confidence(&r, "Agree"), Some(0.0));
    }
}
