//! Text-generation backends: an Ollama-compatible HTTP client and the
//! deterministic offline stub.

use std::sync::{Arc, Condvar, Mutex};
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_score, scoring_prompt, PostRequest};
use crate::lexicon::Lexicon;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error("backend returned HTTP {0}")]
    Status(u16),
    #[error("backend transport error: {0}")]
    Transport(String),
    #[error("backend response could not be decoded: {0}")]
    Decode(String),
}

pub trait GenerationBackend: Send + Sync {
    /// Produce a post for the request.
    fn generate(&self, request: &PostRequest<'_>) -> Result<String, BackendError>;

    /// Attitude score of `post` in [-1, 1].
    fn score(&self, post: &str) -> Result<f64, BackendError>;
}

/// Neutral stance phrases for agents near the middle of the scale. None of
/// them contains a pro or anti lexicon phrase.
pub const NEUTRAL_PHRASES: [&str; 5] = [
    "still making up my mind",
    "waiting to see the full picture",
    "mixed feelings",
    "hard to call",
    "more questions than answers",
];

/// Offline backend. Generation fills `"{stance} about {topic} - {marker}"`,
/// where the stance phrase comes from the anti lexicon above +0.2 attitude,
/// the pro lexicon below -0.2 and the neutral list otherwise. Scoring is the
/// lexicon balance `(anti − pro) / max(1, anti + pro)`.
#[derive(Debug, Clone)]
pub struct StubBackend {
    lexicon: Arc<Lexicon>,
}

impl StubBackend {
    pub fn new(lexicon: Arc<Lexicon>) -> Self {
        Self { lexicon }
    }

    pub fn post(&self, request: &PostRequest<'_>) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(request.stub_seed);
        let pick = |list: &[String], rng: &mut ChaCha8Rng| list[rng.random_range(0..list.len())].clone();
        let stance = if request.attitude > 0.2 {
            pick(&self.lexicon.anti_terms, &mut rng)
        } else if request.attitude < -0.2 {
            pick(&self.lexicon.pro_terms, &mut rng)
        } else {
            NEUTRAL_PHRASES[rng.random_range(0..NEUTRAL_PHRASES.len())].to_string()
        };
        let marker = quirk_marker(request.quirk);
        let text = format!("{stance} about {} - {marker}", request.topic);
        if request.quirk == crate::model::Quirk::AllLowercase {
            text.to_lowercase()
        } else {
            text
        }
    }

    pub fn lexicon_score(&self, post: &str) -> f64 {
        let s = self.lexicon.classify_sentiment(post);
        (s.anti as f64 - s.pro as f64) / (s.anti + s.pro).max(1) as f64
    }
}

fn quirk_marker(q: crate::model::Quirk) -> &'static str {
    use crate::model::Quirk::*;
    match q {
        Sarcasm => "great job, everyone",
        Emojis => "😤🇮🇪",
        Hashtags => "#Dublin #Ireland",
        FormalTone => "I would urge careful consideration",
        RhetoricalQuestions => "who is actually listening?",
        AllLowercase => "just saying",
        StatisticsCiting => "nine in ten people I asked agree",
        PersonalAnecdote => "my neighbour said the same thing",
    }
}

impl GenerationBackend for StubBackend {
    fn generate(&self, request: &PostRequest<'_>) -> Result<String, BackendError> {
        Ok(self.post(request))
    }

    fn score(&self, post: &str) -> Result<f64, BackendError> {
        Ok(self.lexicon_score(post))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemoteSettings {
    pub base_url: String,
    pub model: String,
    pub gen_temperature: f64,
    pub score_temperature: f64,
    pub timeout: Duration,
    pub max_in_flight: usize,
}

#[derive(Serialize)]
struct GenerateOptions {
    temperature: f64,
}

#[derive(Serialize)]
struct GenerateBody<'a> {
    model: &'a str,
    prompt: &'a str,
    stream: bool,
    options: GenerateOptions,
}

#[derive(Deserialize)]
struct GenerateReply {
    response: String,
}

/// Counting semaphore bounding concurrent requests.
struct InFlight {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a InFlight);

impl InFlight {
    fn new(n: usize) -> Self {
        Self {
            free: Mutex::new(n.max(1)),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

/// Client for an Ollama-compatible `POST {base_url}/api/generate`.
pub struct RemoteBackend {
    settings: RemoteSettings,
    endpoint: String,
    agent: ureq::Agent,
    in_flight: InFlight,
}

impl RemoteBackend {
    pub fn new(settings: RemoteSettings) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(settings.timeout))
            .build()
            .into();
        let endpoint = format!("{}/api/generate", settings.base_url.trim_end_matches('/'));
        let in_flight = InFlight::new(settings.max_in_flight);
        Self {
            settings,
            endpoint,
            agent,
            in_flight,
        }
    }

    pub fn settings(&self) -> &RemoteSettings {
        &self.settings
    }

    /// One completion request at the given temperature.
    pub fn complete(&self, prompt: &str, temperature: f64) -> Result<String, BackendError> {
        let _permit = self.in_flight.acquire();
        let body = GenerateBody {
            model: &self.settings.model,
            prompt,
            stream: false,
            options: GenerateOptions { temperature },
        };
        let mut resp = self.agent.post(&self.endpoint).send_json(&body).map_err(|e| match e {
            ureq::Error::StatusCode(code) => BackendError::Status(code),
            other => BackendError::Transport(other.to_string()),
        })?;
        let reply: GenerateReply = resp
            .body_mut()
            .read_json()
            .map_err(|e| BackendError::Decode(e.to_string()))?;
        Ok(reply.response)
    }
}

impl GenerationBackend for RemoteBackend {
    fn generate(&self, request: &PostRequest<'_>) -> Result<String, BackendError> {
        self.complete(request.prompt, self.settings.gen_temperature)
    }

    fn score(&self, post: &str) -> Result<f64, BackendError> {
        let reply = self.complete(&scoring_prompt(post), self.settings.score_temperature)?;
        Ok(parse_score(&reply))
    }
}
