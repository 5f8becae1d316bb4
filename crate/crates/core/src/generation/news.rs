//! News search used by the observe phase.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::LazyLock;
use std::time::Duration;

use regex::Regex;
use thiserror::Error;

use super::NEWS_CHAR_BUDGET;

pub const BUNDLED_NEWS: &str = include_str!("../../fixtures/dublin_2025_news.json");

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("no fixture snippet for day {0}")]
    MissingDay(usize),
    #[error("search request failed: {0}")]
    Transport(String),
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("news fixture {origin}: {source}")]
    Read {
        origin: String,
        #[source]
        source: std::io::Error,
    },
    #[error("news fixture {origin}: {detail}")]
    Parse { origin: String, detail: String },
}

pub trait NewsSource: Send + Sync {
    fn search(&self, query: &str, day_index: usize) -> Result<String, SearchError>;
}

/// Offline search: snippets keyed by day index, e.g. `{"0": "...", "1": "..."}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OfflineNews {
    snippets: BTreeMap<usize, String>,
}

impl OfflineNews {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, FixtureError> {
        let raw: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| FixtureError::Parse {
                origin: origin.to_string(),
                detail: e.to_string(),
            })?;
        let mut snippets = BTreeMap::new();
        for (key, value) in raw {
            let day = key.trim().parse::<usize>().map_err(|_| FixtureError::Parse {
                origin: origin.to_string(),
                detail: format!("key `{key}` is not a day index"),
            })?;
            snippets.insert(day, value);
        }
        Ok(Self { snippets })
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| FixtureError::Read {
            origin: origin.clone(),
            source,
        })?;
        Self::from_json(&text, &origin)
    }

    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_NEWS, "<bundled>").expect("bundled news fixture is valid")
    }

    pub fn len(&self) -> usize {
        self.snippets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snippets.is_empty()
    }
}

impl NewsSource for OfflineNews {
    fn search(&self, _query: &str, day_index: usize) -> Result<String, SearchError> {
        self.snippets
            .get(&day_index)
            .cloned()
            .ok_or(SearchError::MissingDay(day_index))
    }
}

/// Live search: `GET {endpoint}?q={query}`, markup stripped from the body.
pub struct HttpNewsSearch {
    endpoint: String,
    agent: ureq::Agent,
}

impl HttpNewsSearch {
    pub fn new(endpoint: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .into();
        Self {
            endpoint: endpoint.into(),
            agent,
        }
    }
}

impl NewsSource for HttpNewsSearch {
    fn search(&self, query: &str, _day_index: usize) -> Result<String, SearchError> {
        let body = self
            .agent
            .get(&self.endpoint)
            .query("q", query)
            .call()
            .map_err(|e| SearchError::Transport(e.to_string()))?
            .body_mut()
            .read_to_string()
            .map_err(|e| SearchError::Transport(e.to_string()))?;
        Ok(super::truncate_chars(&strip_markup(&body), NEWS_CHAR_BUDGET))
    }
}

static SCRIPT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?is)<(script|style)\b.*?</(script|style)\s*>").unwrap());
static TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?s)<[^>]*>").unwrap());

/// Drop tags, scripts and styles, decode the common entities and collapse
/// whitespace.
pub fn strip_markup(html: &str) -> String {
    let no_scripts = SCRIPT.replace_all(html, " ");
    let text = TAG.replace_all(&no_scripts, " ");
    let decoded = text
        .replace("&nbsp;", " ")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&#39;", "'")
        .replace("&#x27;", "'")
        .replace("&amp;", "&");
    decoded.split_whitespace().collect::<Vec<_>>().join(" ")
}
