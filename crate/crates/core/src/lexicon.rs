//! Keyword lexicons, phrase counting, news salience and the lexicon-based
//! sentiment classifier.
//!
//! Matching is case-insensitive exact phrase matching on word boundaries: a
//! phrase matches only where the characters on either side are not
//! alphanumeric, and runs of whitespace compare equal to a single space. Each
//! phrase counts its own non-overlapping occurrences left to right.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::Coefficients;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("lexicon list `{0}` is empty")]
    EmptyList(&'static str),
}

/// How overlapping matches from different phrases are counted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// Every listed phrase is counted independently ("welcome refugees"
    /// scores for both "welcome" and "welcome refugees").
    #[default]
    Independent,
    /// Matches from all phrases compete; only the longest at each position
    /// survives and overlapping shorter matches are dropped.
    LongestMatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lexicon {
    pub threat_terms: Vec<String>,
    pub humanitarian_terms: Vec<String>,
    pub pro_terms: Vec<String>,
    pub anti_terms: Vec<String>,
    /// Only consulted when the extended belief channels are switched on.
    #[serde(default = "default_economic_terms")]
    pub economic_terms: Vec<String>,
    #[serde(default = "default_cultural_terms")]
    pub cultural_terms: Vec<String>,
    #[serde(skip)]
    pub match_mode: MatchMode,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn default_economic_terms() -> Vec<String> {
    strings(&["jobs", "wages", "rent", "housing", "welfare", "public services"])
}

fn default_cultural_terms() -> Vec<String> {
    strings(&["culture", "identity", "tradition", "way of life", "integration"])
}

impl Default for Lexicon {
    fn default() -> Self {
        Self {
            threat_terms: strings(&[
                "arson",
                "attack",
                "violence",
                "crime",
                "danger",
                "get them out",
                "deportation",
                "deport",
            ]),
            humanitarian_terms: strings(&[
                "refugee",
                "asylum",
                "rights",
                "children",
                "family",
                "compassion",
                "solidarity",
                "waiting",
            ]),
            pro_terms: strings(&[
                "welcome",
                "solidarity",
                "refugee rights",
                "compassion",
                "diversity",
                "welcome refugees",
            ]),
            anti_terms: strings(&[
                "ireland is full",
                "get them out",
                "deport",
                "invasion",
                "illegal",
                "send them back",
            ]),
            economic_terms: default_economic_terms(),
            cultural_terms: default_cultural_terms(),
            match_mode: MatchMode::Independent,
        }
    }
}

impl Lexicon {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let lex: Lexicon = serde_json::from_str(text).map_err(|source| LexiconError::Parse {
            path: origin.to_string(),
            source,
        })?;
        lex.validate()?;
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<(), LexiconError> {
        for (name, list) in [
            ("threat_terms", &self.threat_terms),
            ("humanitarian_terms", &self.humanitarian_terms),
            ("pro_terms", &self.pro_terms),
            ("anti_terms", &self.anti_terms),
        ] {
            if list.iter().all(|p| p.trim().is_empty()) {
                return Err(LexiconError::EmptyList(name));
            }
        }
        Ok(())
    }

    pub fn with_match_mode(mut self, mode: MatchMode) -> Self {
        self.match_mode = mode;
        self
    }

    pub fn count(&self, text: &str, phrases: &[String]) -> usize {
        count_keywords(text, phrases, self.match_mode)
    }

    pub fn threat_count(&self, text: &str) -> usize {
        self.count(text, &self.threat_terms)
    }

    pub fn humanitarian_count(&self, text: &str) -> usize {
        self.count(text, &self.humanitarian_terms)
    }

    /// `count × salience coefficient × emotional_reactivity`.
    pub fn threat_salience(&self, text: &str, emotional_reactivity: f64, c: &Coefficients) -> f64 {
        threat_salience(self.threat_count(text), emotional_reactivity, c)
    }

    /// As [`Lexicon::threat_salience`], further scaled by openness.
    pub fn humanitarian_salience(
        &self,
        text: &str,
        emotional_reactivity: f64,
        openness: f64,
        c: &Coefficients,
    ) -> f64 {
        humanitarian_salience(self.humanitarian_count(text), emotional_reactivity, openness, c)
    }

    pub fn classify_sentiment(&self, text: &str) -> Sentiment {
        let pro = self.count(text, &self.pro_terms);
        let anti = self.count(text, &self.anti_terms);
        let label = match pro.cmp(&anti) {
            std::cmp::Ordering::Greater => SentimentLabel::ProImmigration,
            std::cmp::Ordering::Less => SentimentLabel::AntiImmigration,
            std::cmp::Ordering::Equal => SentimentLabel::Neutral,
        };
        let confidence = if pro + anti > 0 {
            pro.abs_diff(anti) as f64 / (pro + anti) as f64
        } else {
            0.0
        };
        Sentiment {
            label,
            confidence,
            pro,
            anti,
        }
    }
}

pub fn threat_salience(count: usize, emotional_reactivity: f64, c: &Coefficients) -> f64 {
    count as f64 * c.salience_per_keyword * emotional_reactivity
}

pub fn humanitarian_salience(
    count: usize,
    emotional_reactivity: f64,
    openness: f64,
    c: &Coefficients,
) -> f64 {
    count as f64 * c.salience_per_keyword * emotional_reactivity * openness
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentimentLabel {
    ProImmigration,
    AntiImmigration,
    Neutral,
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SentimentLabel::ProImmigration => "pro_immigration",
            SentimentLabel::AntiImmigration => "anti_immigration",
            SentimentLabel::Neutral => "neutral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sentiment {
    pub label: SentimentLabel,
    pub confidence: f64,
    pub pro: usize,
    pub anti: usize,
}

fn normalize(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn at_boundary(text: &str, start: usize, end: usize) -> bool {
    let before = text[..start].chars().next_back();
    let after = text[end..].chars().next();
    !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
}

/// Non-overlapping boundary-respecting occurrences of one normalized phrase.
fn phrase_matches(text: &str, phrase: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if phrase.is_empty() {
        return out;
    }
    let mut pos = 0;
    while let Some(off) = text[pos..].find(phrase) {
        let start = pos + off;
        let end = start + phrase.len();
        if at_boundary(text, start, end) {
            out.push((start, end));
            pos = end;
        } else {
            pos = start + text[start..].chars().next().map_or(1, char::len_utf8);
        }
    }
    out
}

/// Total occurrences of `phrases` in `text` under the given match mode.
pub fn count_keywords(text: &str, phrases: &[String], mode: MatchMode) -> usize {
    let text = normalize(text);
    if text.is_empty() {
        return 0;
    }
    let phrases: Vec<String> = phrases.iter().map(|p| normalize(p)).collect();
    match mode {
        MatchMode::Independent => phrases.iter().map(|p| phrase_matches(&text, p).len()).sum(),
        MatchMode::LongestMatch => {
            let mut spans: Vec<(usize, usize)> = phrases
                .iter()
                .flat_map(|p| phrase_matches(&text, p))
                .collect();
            spans.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            spans.dedup();
            let mut taken = 0;
            let mut last_end = 0;
            for (start, end) in spans {
                if start >= last_end {
                    taken += 1;
                    last_end = end;
                }
            }
            taken
        }
    }
}
