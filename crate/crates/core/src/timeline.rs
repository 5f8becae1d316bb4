//! Critical event and the dated post-event timeline.

use std::fmt;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bundled Dublin, April 2025 fixture. Event wording and daily entries are
/// illustrative fixture data, not a record of actual coverage.
pub const BUNDLED_TIMELINE: &str = include_str!("../fixtures/dublin_2025_timeline.json");

#[derive(Debug, Error)]
pub enum TimelineError {
    #[error("timeline {origin}: {source}")]
    Read {
        origin: String,
        #[source]
        source: std::io::Error,
    },
    #[error("timeline {origin}: {source}")]
    Parse {
        origin: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("timeline {origin}: critical_event is empty")]
    EmptyEvent { origin: String },
    #[error("timeline {origin}, line {line}: duplicate day {day}")]
    DuplicateDay { origin: String, day: usize, line: usize },
    #[error("timeline {origin}, line {line}: entry {position} has day {day}, expected {position}")]
    OutOfOrder {
        origin: String,
        position: usize,
        day: usize,
        line: usize,
    },
    #[error("timeline {origin}: missing day {day} ({found} entries for {expected} simulated days)")]
    MissingDay {
        origin: String,
        day: usize,
        found: usize,
        expected: usize,
    },
    #[error("timeline {origin}, line {line}: date {date} of day {day} is not after the previous entry")]
    DateNotIncreasing {
        origin: String,
        day: usize,
        date: NaiveDate,
        line: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceLevel {
    Verified,
    ContextuallySupported,
    Inferred,
}

impl EvidenceLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            EvidenceLevel::Verified => "verified",
            EvidenceLevel::ContextuallySupported => "contextually_supported",
            EvidenceLevel::Inferred => "inferred",
        }
    }
}

impl fmt::Display for EvidenceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DayEntry {
    #[serde(rename = "day")]
    pub day_index: usize,
    pub date: NaiveDate,
    pub text: String,
    pub evidence: EvidenceLevel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timeline {
    pub critical_event: String,
    pub entries: Vec<DayEntry>,
}

impl Timeline {
    /// Parse and validate a timeline for a run of `n_days`. Entries must be
    /// numbered 0, 1, 2, ... in file order with strictly increasing dates.
    /// Entries beyond `n_days` are dropped; fewer than `n_days` is an error.
    pub fn from_json(text: &str, origin: &str, n_days: usize) -> Result<Self, TimelineError> {
        let origin = origin.to_string();
        let mut tl: Timeline = serde_json::from_str(text).map_err(|source| TimelineError::Parse {
            origin: origin.clone(),
            source,
        })?;
        if tl.critical_event.trim().is_empty() {
            return Err(TimelineError::EmptyEvent { origin });
        }
        let lines = entry_lines(text);
        let line_of = |pos: usize| lines.get(pos).copied().unwrap_or(0);
        let mut seen = std::collections::HashSet::new();
        for (pos, e) in tl.entries.iter().enumerate() {
            if !seen.insert(e.day_index) {
                return Err(TimelineError::DuplicateDay {
                    origin,
                    day: e.day_index,
                    line: line_of(pos),
                });
            }
        }
        if let Some(missing) = (0..n_days.max(tl.entries.len())).find(|d| !seen.contains(d)) {
            return Err(TimelineError::MissingDay {
                origin,
                day: missing,
                found: tl.entries.len(),
                expected: n_days,
            });
        }
        for (pos, e) in tl.entries.iter().enumerate() {
            if e.day_index != pos {
                return Err(TimelineError::OutOfOrder {
                    origin,
                    position: pos,
                    day: e.day_index,
                    line: line_of(pos),
                });
            }
            if pos > 0 && e.date <= tl.entries[pos - 1].date {
                return Err(TimelineError::DateNotIncreasing {
                    origin,
                    day: e.day_index,
                    date: e.date,
                    line: line_of(pos),
                });
            }
        }
        tl.entries.truncate(n_days);
        Ok(tl)
    }

    pub fn load(path: &Path, n_days: usize) -> Result<Self, TimelineError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| TimelineError::Read {
            origin: origin.clone(),
            source,
        })?;
        Self::from_json(&text, &origin, n_days)
    }

    pub fn bundled(n_days: usize) -> Result<Self, TimelineError> {
        Self::from_json(BUNDLED_TIMELINE, "<bundled>", n_days)
    }

    /// The configured file, or the bundled fixture when no path is given.
    pub fn load_or_bundled(path: Option<&Path>, n_days: usize) -> Result<Self, TimelineError> {
        match path {
            Some(p) => Self::load(p, n_days),
            None => Self::bundled(n_days),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn day(&self, index: usize) -> Option<&DayEntry> {
        self.entries.get(index)
    }
}

// 1-based line of each entry's `"day"` key, in order. Inside JSON strings a
// quote is always escaped, so a bare `"day"` followed by `:` is a key.
fn entry_lines(text: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut search = 0;
    while let Some(off) = text[search..].find("\"day\"") {
        let at = search + off;
        search = at + 5;
        if text[search..].trim_start().starts_with(':') {
            out.push(text[..at].matches('\n').count() + 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(entries: &[(usize, &str, &str)]) -> String {
        let items: Vec<String> = entries
            .iter()
            .map(|(d, date, ev)| {
                format!("    {{\"day\": {d}, \"date\": \"{date}\", \"text\": \"news {d}\", \"evidence\": \"{ev}\"}}")
            })
            .collect();
        format!(
            "{{\n  \"critical_event\": \"event\",\n  \"entries\": [\n{}\n  ]\n}}",
            items.join(",\n")
        )
    }

    fn days(n: usize) -> Vec<(usize, String)> {
        (0..n)
            .map(|d| (d, format!("2025-04-{:02}", 10 + d)))
            .collect()
    }

    fn doc_n(n: usize) -> String {
        let d = days(n);
        let e: Vec<(usize, &str, &str)> = d.iter().map(|(i, s)| (*i, s.as_str(), "verified")).collect();
        doc(&e)
    }

    #[test]
    fn bundled_fixture() {
        let tl = Timeline::bundled(15).unwrap();
        assert_eq!(tl.len(), 15);
        assert_eq!(tl.entries[0].date, NaiveDate::from_ymd_opt(2025, 4, 26).unwrap());
        assert_eq!(tl.entries[14].date, NaiveDate::from_ymd_opt(2025, 5, 10).unwrap());
        assert!(tl.critical_event.contains("Dublin"));
        assert_eq!(Timeline::bundled(3).unwrap().len(), 3);
        assert!(matches!(Timeline::bundled(16), Err(TimelineError::MissingDay { day: 15, .. })));
    }

    #[test]
    fn too_few_entries_rejected() {
        let err = Timeline::from_json(&doc_n(14), "t.json", 15).unwrap_err();
        assert!(matches!(err, TimelineError::MissingDay { day: 14, found: 14, expected: 15, .. }));
        assert!(Timeline::from_json(&doc_n(15), "t.json", 15).is_ok());
    }

    #[test]
    fn evidence_levels_parse() {
        let tl = Timeline::from_json(
            &doc(&[(0, "2025-01-01", "verified"), (1, "2025-01-02", "contextually_supported"), (2, "2025-01-03", "inferred")]),
            "t",
            3,
        )
        .unwrap();
        assert_eq!(tl.entries[0].evidence, EvidenceLevel::Verified);
        assert_eq!(tl.entries[1].evidence, EvidenceLevel::ContextuallySupported);
        assert_eq!(tl.entries[2].evidence.to_string(), "inferred");
    }

    #[test]
    fn unknown_evidence_reports_line() {
        let text = doc(&[(0, "2025-01-01", "verified"), (1, "2025-01-02", "rumour")]);
        let err = Timeline::from_json(&text, "t", 2).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("rumour") && msg.contains("line 5"), "{msg}");
    }

    #[test]
    fn duplicate_day_reports_line() {
        let text = doc(&[(0, "2025-01-01", "verified"), (0, "2025-01-02", "verified")]);
        let err = Timeline::from_json(&text, "t", 1).unwrap_err();
        assert!(matches!(err, TimelineError::DuplicateDay { day: 0, line: 5, .. }), "{err}");
    }

    #[test]
    fn gap_and_order_errors() {
        let gap = doc(&[(0, "2025-01-01", "verified"), (2, "2025-01-03", "verified")]);
        assert!(matches!(
            Timeline::from_json(&gap, "t", 2),
            Err(TimelineError::MissingDay { day: 1, .. })
        ));
        let swapped = doc(&[(1, "2025-01-02", "verified"), (0, "2025-01-01", "verified")]);
        assert!(matches!(
            Timeline::from_json(&swapped, "t", 2),
            Err(TimelineError::OutOfOrder { position: 0, day: 1, line: 4, .. })
        ));
        let dates = doc(&[(0, "2025-01-02", "verified"), (1, "2025-01-02", "verified")]);
        assert!(matches!(
            Timeline::from_json(&dates, "t", 2),
            Err(TimelineError::DateNotIncreasing { day: 1, .. })
        ));
    }

    #[test]
    fn zero_days_and_empty_event() {
        assert!(Timeline::from_json(&doc(&[]), "t", 0).unwrap().is_empty());
        let text = r#"{"critical_event": "  ", "entries": []}"#;
        assert!(matches!(Timeline::from_json(text, "t", 0), Err(TimelineError::EmptyEvent { .. })));
    }
}
