//! Prompt templates: guidelines plus question, an option list taken from the
//! dataset scale, and a small set of illustrative query-response pairs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One worked example shown to the model before the query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shot {
    pub artifact: String,
    pub label: String,
}

/// A reusable prompt recipe for one annotation task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub guidelines: String,
    pub question: String,
    /// Must equal the dataset scale's labels, in order.
    pub options: Vec<String>,
    pub shots: Vec<Shot>,
}

impl PromptTemplate {
    pub fn new(
        guidelines: impl Into<String>,
        question: impl Into<String>,
        options: Vec<String>,
    ) -> Self {
        PromptTemplate {
            guidelines: guidelines.into(),
            question: question.into(),
            options,
            shots: Vec::new(),
        }
    }

    pub fn with_shots(mut self, shots: Vec<Shot>) -> Self {
        self.shots = shots;
        self
    }

    /// Parse a plain-text template file with `[[guidelines]]` and
    /// `[[question]]` sections, plus an optional sidecar JSON list of shots.
    pub fn from_files(
        template_path: impl AsRef<Path>,
        shots_path: Option<&Path>,
        options: Vec<String>,
    ) -> Result<Self> {
        let template_path = template_path.as_ref();
        let display = template_path.display().to_string();
        let text = std::fs::read_to_string(template_path)
            .map_err(|e| Error::io(display.clone(), e))?;
        let mut guidelines = String::new();
        let mut question = String::new();
        let mut current: Option<&mut String> = None;
        for line in text.lines() {
            match line.trim() {
                "[[guidelines]]" => current = Some(&mut guidelines),
                "[[question]]" => current = Some(&mut question),
                _ => match current.as_deref_mut() {
                    Some(section) => {
                        if !section.is_empty() {
                            section.push('\n');
                        }
                        section.push_str(line);
                    }
                    None if line.trim().is_empty() => {}
                    None => {
                        return Err(Error::Template {
                            path: display,
                            message: "content before the first [[section]] header".into(),
                        })
                    }
                },
            }
        }
        let guidelines = guidelines.trim().to_string();
        let question = question.trim().to_string();
        if guidelines.is_empty() || question.is_empty() {
            return Err(Error::Template {
                path: display,
                message: "both [[guidelines]] and [[question]] sections are required".into(),
            });
        }
        let shots = match shots_path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::io(p.display().to_string(), e))?;
                serde_json::from_str(&text)?
            }
            None => Vec::new(),
        };
        Ok(PromptTemplate {
            guidelines,
            question,
            options,
            shots,
        })
    }

    /// Render the prompt for one artifact: guidelines, then each shot as a
    /// query-answer pair, then the artifact, question, and option list. The
    /// output is a deterministic function of the inputs.
    pub fn build_prompt(&self, artifact: &str) -> Result<String> {
        if artifact.is_empty() {
            return Err(Error::InvalidParameter {
                name: "artifact".into(),
                message: "must be non-empty".into(),
            });
        }
        for shot in &self.shots {
            if !self.options.iter().any(|o| o == &shot.label) {
                return Err(Error::ShotLabelNotInOptions(shot.label.clone()));
            }
        }
        let options = self.options.join(", ");
        let mut prompt = String::new();
        prompt.push_str(&self.guidelines);
        prompt.push_str("\n\n");
        for shot in &self.shots {
            prompt.push_str(&shot.artifact);
            prompt.push('\n');
            prompt.push_str(&self.question);
            prompt.push('\n');
            prompt.push_str(&format!("Options: {options}\n"));
            prompt.push_str(&format!("Answer: {}\n\n", shot.label));
        }
        prompt.push_str(artifact);
        prompt.push('\n');
        prompt.push_str(&self.question);
        prompt.push('\n');
        prompt.push_str(&format!("Options: {options}\n"));
        prompt.push_str("Answer:");
        Ok(prompt)
    }

    /// Flag negation words in the instructions. Models handle negation
    /// poorly, so templates should phrase criteria positively.
    pub fn lint(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        for (section, text) in [("guidelines", &self.guidelines), ("question", &self.question)] {
            for word in ["not", "never", "only"] {
                if contains_word(text, word) {
                    warnings.push(format!(
                        "{section} contain the negation-prone word '{word}'"
                    ));
                }
            }
        }
        warnings
    }
}

fn contains_word(text: &str, word: &str) -> bool {
    let lower = text.to_lowercase();
    lower
        .split(|c: char| !c.is_alphanumeric())
        .any(|token| token == word)
}
