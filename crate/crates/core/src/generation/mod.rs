//! Per-agent observe / think / act loop.
//!
//! The orchestrator, not the model, calls the tools: [`observe`] runs the
//! news search and memory recall and logs both calls on the agent. The
//! observations are folded into one prompt by [`build_prompt`], a backend
//! writes the post ([`generate_post`]) and a second call turns the post into
//! an attitude score ([`score_post`]). Remote failures are retried once and
//! then served by the stub for that agent-day, with the fallback flagged.

pub mod backend;
pub mod news;

use std::fmt::Write as _;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::lexicon::{Lexicon, Sentiment};
use crate::model::{Agent, AgentKind, Quirk, ToolCallRecord};
use crate::timeline::DayEntry;

pub use backend::{BackendError, GenerationBackend, RemoteBackend, RemoteSettings, StubBackend};
pub use news::{HttpNewsSearch, NewsSource, OfflineNews, SearchError};

pub const NEWS_CHAR_BUDGET: usize = 1_200;
pub const MAX_POST_WORDS: usize = 40;
pub const MEMORY_WINDOW: usize = 5;
pub const MEMORY_EXCERPT_CHARS: usize = 100;
pub const SEARCH_ANCHOR: &str = "Dublin immigration march April 2025 Ireland ";
pub const SEARCH_UNAVAILABLE: &str = "[search unavailable]";
pub const NO_HISTORY: &str = "no posting history yet";

pub const TOOL_SEARCH: &str = "search_immigration_news";
pub const TOOL_RECALL: &str = "recall_agent_memory";
pub const TOOL_SENTIMENT: &str = "get_sentiment_of_text";

/// Which path produced an agent-day's post and score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendUsed {
    Remote,
    StubFallback,
    Stub,
}

impl BackendUsed {
    pub fn as_str(self) -> &'static str {
        match self {
            BackendUsed::Remote => "remote",
            BackendUsed::StubFallback => "stub_fallback",
            BackendUsed::Stub => "stub",
        }
    }

    /// The worse of two outcomes: any fallback taints the agent-day.
    pub fn combine(self, other: BackendUsed) -> BackendUsed {
        use BackendUsed::*;
        match (self, other) {
            (StubFallback, _) | (_, StubFallback) => StubFallback,
            (Stub, Stub) => Stub,
            _ => Remote,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub news_snippet: String,
    pub memory_summary: String,
    pub day_entry_text: String,
    pub critical_event: String,
    /// False when the search tool failed and the snippet is the
    /// [`SEARCH_UNAVAILABLE`] marker.
    pub search_ok: bool,
}

pub fn truncate_chars(s: &str, max: usize) -> String {
    match s.char_indices().nth(max) {
        Some((cut, _)) => s[..cut].to_string(),
        None => s.to_string(),
    }
}

pub fn truncate_words(s: &str, max: usize) -> String {
    if s.split_whitespace().count() <= max {
        s.trim().to_string()
    } else {
        s.split_whitespace().take(max).collect::<Vec<_>>().join(" ")
    }
}

pub fn kind_search_terms(kind: AgentKind) -> &'static str {
    match kind {
        AgentKind::FarRight => "protest housing crisis",
        AgentKind::ProImm => "refugee rights solidarity",
        AgentKind::Centrist => "government response",
        AgentKind::Media => "news coverage",
    }
}

pub fn search_query(kind: AgentKind) -> String {
    format!("{SEARCH_ANCHOR}{}", kind_search_terms(kind))
}

/// Summary of the last five posts, oldest first. Every post is excerpted to
/// its first 100 characters.
pub fn recall_memory(messages: &[String]) -> String {
    let Some(latest) = messages.last() else {
        return NO_HISTORY.to_string();
    };
    let window = &messages[messages.len().saturating_sub(MEMORY_WINDOW)..];
    let mut out = format!(
        "You have posted {} time(s) so far. Your last {} post(s), oldest first:\n",
        messages.len(),
        window.len()
    );
    for (i, post) in window.iter().enumerate() {
        let _ = writeln!(out, "{}. \"{}\"", i + 1, truncate_chars(post, MEMORY_EXCERPT_CHARS));
    }
    let _ = write!(
        out,
        "Most recent post: \"{}\"",
        truncate_chars(latest, MEMORY_EXCERPT_CHARS)
    );
    out
}

/// Run the two observe-phase tools for `agent` on `day`, logging each call.
/// A failed search never aborts the day; the snippet becomes a marker.
pub fn observe(
    agent: &mut Agent,
    day: &DayEntry,
    critical_event: &str,
    news: &dyn NewsSource,
) -> Observation {
    let query = search_query(agent.kind);
    agent.reasoning_log.push(ToolCallRecord {
        tool_name: TOOL_SEARCH.to_string(),
        tool_input: query.clone(),
    });
    let (news_snippet, search_ok) = match news.search(&query, day.day_index) {
        Ok(text) => (truncate_chars(&text, NEWS_CHAR_BUDGET), true),
        Err(err) => {
            log::warn!("{}: {err}", agent.id);
            (SEARCH_UNAVAILABLE.to_string(), false)
        }
    };

    let window = &agent.messages[agent.messages.len().saturating_sub(MEMORY_WINDOW)..];
    agent.reasoning_log.push(ToolCallRecord {
        tool_name: TOOL_RECALL.to_string(),
        tool_input: serde_json::to_string(window).expect("string list serializes"),
    });
    let memory_summary = recall_memory(&agent.messages);

    Observation {
        news_snippet,
        memory_summary,
        day_entry_text: day.text.clone(),
        critical_event: critical_event.to_string(),
        search_ok,
    }
}

/// Optional analysis tool: lexicon sentiment of `text`, logged on the agent
/// like the other tools. The observe phase does not call it on its own.
pub fn sentiment_tool(agent: &mut Agent, lexicon: &Lexicon, text: &str) -> Sentiment {
    agent.reasoning_log.push(ToolCallRecord {
        tool_name: TOOL_SENTIMENT.to_string(),
        tool_input: text.to_string(),
    });
    lexicon.classify_sentiment(text)
}

/// Prompt in fixed order: critical event, profile, memory, search results,
/// today's news, then the instructions.
pub fn build_prompt(agent: &Agent, obs: &Observation) -> String {
    let (quirk, hint) = agent
        .quirk
        .map_or(("none", "plain wording"), |q| (q.as_str(), q.style_hint()));
    let p = &agent.psych;
    let b = &agent.beliefs;
    let mut s = String::new();
    let _ = writeln!(s, "CRITICAL EVENT:\n{}\n", obs.critical_event);
    let _ = writeln!(s, "YOUR PROFILE:");
    let _ = writeln!(s, "id: {}", agent.id);
    let _ = writeln!(s, "kind: {}", agent.kind);
    let _ = writeln!(
        s,
        "attitude: {:+.3} (-1 strongly pro-immigration, +1 strongly anti-immigration)",
        agent.attitude
    );
    let _ = writeln!(s, "exposure to threat-framed news: {:.3}", agent.exposure);
    let _ = writeln!(s, "mood: {:+.3}", agent.mood);
    let _ = writeln!(s, "writing quirk: {quirk}");
    let _ = writeln!(
        s,
        "psychology: openness {:.2}, conformity {:.2}, emotional reactivity {:.2}, trust in peers {:.2}",
        p.openness, p.conformity, p.emotional_reactivity, p.trust_peers
    );
    let _ = writeln!(
        s,
        "beliefs: economic threat {:+.2}, cultural threat {:+.2}, security threat {:+.2}, humanitarian {:+.2}\n",
        b.economic_threat, b.cultural_threat, b.security_threat, b.humanitarian
    );
    let _ = writeln!(s, "YOUR MEMORY:\n{}\n", obs.memory_summary);
    let _ = writeln!(s, "SEARCH RESULTS:\n{}\n", obs.news_snippet);
    let _ = writeln!(s, "TODAY'S NEWS:\n{}\n", obs.day_entry_text);
    let _ = writeln!(s, "INSTRUCTIONS:");
    let _ = writeln!(s, "Write one social media post reacting to today's news as this person.");
    let _ = writeln!(
        s,
        "Let your stance evolve gradually from your earlier posts, without overnight flips."
    );
    let _ = writeln!(s, "Write in your quirk style: {hint}.");
    let _ = write!(
        s,
        "Maximum {MAX_POST_WORDS} words. Reply with the post text only."
    );
    s
}

pub fn scoring_prompt(post: &str) -> String {
    format!(
        "Rate how anti-immigration the following social media post is.\n\
         Scale:\n\
         -1.0 = strongly pro-immigration (e.g. solidarity messaging, refugee rights advocacy)\n\
         0.0 = neutral or ambivalent (e.g. reporting facts without stance)\n\
         +1.0 = strongly anti-immigration (e.g. 'Ireland is Full', deportation demands)\n\
         Reply with a single number between -1.0 and +1.0.\n\n\
         Post: \"{post}\"\n\
         Score:"
    )
}

static FLOAT_TOKEN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)").unwrap());

/// First float-like token of a model reply, clipped to [-1, 1]; 0.0 when
/// there is none.
pub fn parse_score(reply: &str) -> f64 {
    FLOAT_TOKEN
        .find(reply)
        .and_then(|m| m.as_str().parse::<f64>().ok())
        .filter(|v| !v.is_nan())
        .map_or(0.0, |v| v.clamp(-1.0, 1.0))
}

/// Short topic for stub posts: the first six words of the day entry.
pub fn day_topic(text: &str) -> String {
    let words: Vec<&str> = text.split_whitespace().take(6).collect();
    words
        .join(" ")
        .trim_end_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase()
}

/// Inputs for one post. Remote backends read the prompt; the stub reads the
/// structured fields.
#[derive(Debug, Clone, PartialEq)]
pub struct PostRequest<'a> {
    pub prompt: &'a str,
    pub attitude: f64,
    pub quirk: Quirk,
    pub topic: &'a str,
    pub stub_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedPost {
    pub text: String,
    pub used: BackendUsed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredPost {
    pub score: f64,
    pub used: BackendUsed,
}

/// Attempts per remote call: the first try plus one retry.
pub const REMOTE_ATTEMPTS: usize = 2;

fn with_retry<T>(mut call: impl FnMut() -> Result<T, BackendError>) -> Result<T, BackendError> {
    let mut last = None;
    for _ in 0..REMOTE_ATTEMPTS {
        match call() {
            Ok(v) => return Ok(v),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Generate one post and cap it at 40 words.
pub fn generate_post(
    remote: Option<&dyn GenerationBackend>,
    stub: &StubBackend,
    request: &PostRequest<'_>,
) -> GeneratedPost {
    let (text, used) = match remote {
        None => (stub.post(request), BackendUsed::Stub),
        Some(backend) => match with_retry(|| backend.generate(request)) {
            Ok(text) => (text, BackendUsed::Remote),
            Err(err) => {
                log::warn!("generation failed after retry, using stub: {err}");
                (stub.post(request), BackendUsed::StubFallback)
            }
        },
    };
    GeneratedPost {
        text: truncate_words(&text, MAX_POST_WORDS),
        used,
    }
}

/// Score a post; remote replies that carry no number score 0.0 without retry.
pub fn score_post(
    remote: Option<&dyn GenerationBackend>,
    stub: &StubBackend,
    post: &str,
) -> ScoredPost {
    let (score, used) = match remote {
        None => (stub.lexicon_score(post), BackendUsed::Stub),
        Some(backend) => match with_retry(|| backend.score(post)) {
            Ok(score) => (score, BackendUsed::Remote),
            Err(err) => {
                log::warn!("scoring failed after retry, using stub: {err}");
                (stub.lexicon_score(post), BackendUsed::StubFallback)
            }
        },
    };
    ScoredPost {
        score: score.clamp(-1.0, 1.0),
        used,
    }
}
