//! Run configuration. Loaded from JSON; unknown keys are rejected and every
//! field has a default, so a config file only needs the values it changes.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::Coefficients;
use crate::lexicon::MatchMode;
use crate::model::{ModelError, PriorConfig};

pub const DEFAULT_MODEL: &str = "mistral:7b-instruct-q4_0";
pub const DEFAULT_BASE_URL: &str = "http://localhost:11434";
pub const DEFAULT_SEARCH_URL: &str = "https://html.duckduckgo.com/html/";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Priors(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendChoice {
    Remote,
    Stub,
}

impl fmt::Display for BackendChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendChoice::Remote => "remote",
            BackendChoice::Stub => "stub",
        })
    }
}

impl FromStr for BackendChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "remote" => Ok(BackendChoice::Remote),
            "stub" => Ok(BackendChoice::Stub),
            other => Err(format!("unknown backend `{other}` (expected remote or stub)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub k: usize,
    pub p: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self { k: 6, p: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n_agents: usize,
    pub n_days: usize,
    pub seed: u64,
    pub network: NetworkConfig,
    pub backend: BackendChoice,
    pub model_name: String,
    pub base_url: String,
    pub request_timeout_secs: u64,
    /// Upper bound on concurrent requests to the remote model server.
    pub max_in_flight: usize,
    pub gen_temperature: f64,
    pub score_temperature: f64,
    /// Read news snippets from the fixture instead of the search endpoint.
    pub offline: bool,
    pub search_url: String,
    pub timeline_path: Option<PathBuf>,
    pub lexicon_path: Option<PathBuf>,
    pub news_fixture_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub keyword_matching: MatchMode,
    /// Adds a bimodality coefficient column to the daily metrics.
    pub bimodality: bool,
    /// Worker threads for the per-day phases.
    pub workers: usize,
    pub coefficients: Option<Coefficients>,
    pub priors: Option<PriorConfig>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_agents: 100,
            n_days: 15,
            seed: 42,
            network: NetworkConfig::default(),
            backend: BackendChoice::Remote,
            model_name: DEFAULT_MODEL.to_string(),
            base_url: DEFAULT_BASE_URL.to_string(),
            request_timeout_secs: 60,
            max_in_flight: 4,
            gen_temperature: 0.75,
            score_temperature: 0.0,
            offline: false,
            search_url: DEFAULT_SEARCH_URL.to_string(),
            timeline_path: None,
            lexicon_path: None,
            news_fixture_path: None,
            out_dir: PathBuf::from("out"),
            keyword_matching: MatchMode::Independent,
            bimodality: false,
            workers: 4,
            coefficients: None,
            priors: None,
        }
    }
}

impl SimConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients.clone().unwrap_or_default()
    }

    pub fn priors(&self) -> PriorConfig {
        self.priors.clone().unwrap_or_default()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        let k = self.network.k;
        if k < 2 || !k.is_multiple_of(2) {
            return bad(format!("network.k = {k} must be even and at least 2"));
        }
        if self.n_agents <= k {
            return bad(format!("n_agents = {} must exceed network.k = {k}", self.n_agents));
        }
        if !(0.0..=1.0).contains(&self.network.p) {
            return bad(format!("network.p = {} outside [0, 1]", self.network.p));
        }
        for (name, t) in [
            ("gen_temperature", self.gen_temperature),
            ("score_temperature", self.score_temperature),
        ] {
            if !(0.0..=2.0).contains(&t) {
                return bad(format!("{name} = {t} outside [0, 2]"));
            }
        }
        if self.max_in_flight == 0 {
            return bad("max_in_flight must be at least 1".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.request_timeout_secs == 0 {
            return bad("request_timeout_secs must be at least 1".into());
        }
        if let Some(c) = &self.coefficients {
            let all = [
                c.salience_per_keyword,
                c.exposure_increment,
                c.mood_decay,
                c.threat_shock,
                c.calm_shock,
                c.inertia_openness_scale,
                c.weight_economic,
                c.weight_cultural,
                c.weight_security,
                c.weight_humanitarian,
                c.mix_own_score,
                c.mix_peer_pull,
                c.mix_belief,
            ];
            if all.iter().any(|v| !v.is_finite()) {
                return bad("coefficients must be finite".into());
            }
            if c.exposure_increment < 0.0 || c.salience_per_keyword < 0.0 {
                return bad("salience and exposure increments must be non-negative".into());
            }
            if !(0.0..=1.0).contains(&c.inertia_openness_scale) {
                return bad("inertia_openness_scale must lie in [0, 1]".into());
            }
        }
        if let Some(p) = &self.priors {
            p.validate()?;
        }
        Ok(())
    }
}
