//! Day loop orchestration and daily aggregates.
//!
//! Each day runs in two phases separated by a barrier. Phase one lets every
//! agent observe, post and be scored; phase two steps every agent's state
//! using the complete set of same-day scores. Per-agent randomness comes from
//! seed streams keyed by agent and day, so results do not depend on how work
//! is scheduled across the worker pool.

use std::path::Path;
use std::sync::Arc;
use std::time::Duration;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{BackendChoice, SimConfig};
use crate::dynamics::{apply_step, Coefficients, DayContext, UpdateInputs};
use crate::error::{Error, Result};
use crate::generation::{
    self, build_prompt, day_topic, observe, BackendUsed, GenerationBackend, HttpNewsSearch,
    NewsSource, OfflineNews, PostRequest, RemoteBackend, RemoteSettings, StubBackend,
};
use crate::lexicon::Lexicon;
use crate::model::{assign_quirk, sample_population, Agent, AgentKind};
use crate::network::SocialGraph;
use crate::rng::SeedStreams;
use crate::timeline::{EvidenceLevel, Timeline};

/// One agent on one day, after that day's update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelRow {
    pub day: usize,
    pub date: NaiveDate,
    pub agent_id: String,
    pub kind: AgentKind,
    pub post: String,
    pub own_score: f64,
    pub attitude: f64,
    pub mood: f64,
    pub exposure: f64,
    pub economic_threat: f64,
    pub cultural_threat: f64,
    pub security_threat: f64,
    pub humanitarian: f64,
    pub backend_used: BackendUsed,
    pub evidence_level: EvidenceLevel,
}

pub const PANEL_HEADER: [&str; 15] = [
    "day",
    "date",
    "agent_id",
    "kind",
    "post",
    "own_score",
    "attitude",
    "mood",
    "exposure",
    "economic_threat",
    "cultural_threat",
    "security_threat",
    "humanitarian",
    "backend_used",
    "evidence_level",
];

/// Mean attitude per kind; `None` when a kind has no agents.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KindMeans {
    pub centrist: Option<f64>,
    pub pro_imm: Option<f64>,
    pub far_right: Option<f64>,
    pub media: Option<f64>,
}

impl KindMeans {
    pub fn get(&self, kind: AgentKind) -> Option<f64> {
        match kind {
            AgentKind::Centrist => self.centrist,
            AgentKind::ProImm => self.pro_imm,
            AgentKind::FarRight => self.far_right,
            AgentKind::Media => self.media,
        }
    }

    fn set(&mut self, kind: AgentKind, v: Option<f64>) {
        match kind {
            AgentKind::Centrist => self.centrist = v,
            AgentKind::ProImm => self.pro_imm = v,
            AgentKind::FarRight => self.far_right = v,
            AgentKind::Media => self.media = v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyMetrics {
    pub day: usize,
    pub mean_attitude: f64,
    /// Population standard deviation of attitudes.
    pub polarization: f64,
    pub mean_mood: f64,
    pub mean_exposure: f64,
    pub kind_mean_attitude: KindMeans,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodality: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    kind: AgentKind,
    attitude: f64,
    mood: f64,
    exposure: f64,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Bimodality coefficient from bias-corrected sample skewness and excess
/// kurtosis. Undefined below four observations or with zero variance.
pub fn bimodality_coefficient(xs: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 4 || xs.iter().all(|&x| x == xs[0]) {
        return None;
    }
    let nf = n as f64;
    let mu = xs.iter().sum::<f64>() / nf;
    let moment = |p: i32| xs.iter().map(|x| (x - mu).powi(p)).sum::<f64>() / nf;
    let (m2, m3, m4) = (moment(2), moment(3), moment(4));
    if m2 <= 0.0 {
        return None;
    }
    let skew = m3 / m2.powf(1.5) * (nf * (nf - 1.0)).sqrt() / (nf - 2.0);
    let excess = ((nf + 1.0) * (m4 / (m2 * m2) - 3.0) + 6.0) * (nf - 1.0) / ((nf - 2.0) * (nf - 3.0));
    let correction = 3.0 * (nf - 1.0).powi(2) / ((nf - 2.0) * (nf - 3.0));
    Some((skew * skew + 1.0) / (excess + correction))
}

fn aggregate(day: usize, samples: &[Sample], with_bimodality: bool) -> DailyMetrics {
    let mean_attitude = mean(samples.iter().map(|s| s.attitude)).unwrap_or(0.0);
    let variance = mean(samples.iter().map(|s| (s.attitude - mean_attitude).powi(2))).unwrap_or(0.0);
    let mut kind_mean_attitude = KindMeans::default();
    for kind in AgentKind::ALL {
        kind_mean_attitude.set(
            kind,
            mean(samples.iter().filter(|s| s.kind == kind).map(|s| s.attitude)),
        );
    }
    let bimodality = if with_bimodality {
        let xs: Vec<f64> = samples.iter().map(|s| s.attitude).collect();
        bimodality_coefficient(&xs)
    } else {
        None
    };
    DailyMetrics {
        day,
        mean_attitude,
        polarization: variance.sqrt(),
        mean_mood: mean(samples.iter().map(|s| s.mood)).unwrap_or(0.0),
        mean_exposure: mean(samples.iter().map(|s| s.exposure)).unwrap_or(0.0),
        kind_mean_attitude,
        bimodality,
    }
}

/// Daily aggregates over the current agent states.
pub fn compute_metrics(agents: &[Agent], day: usize, with_bimodality: bool) -> DailyMetrics {
    let samples: Vec<Sample> = agents
        .iter()
        .map(|a| Sample {
            kind: a.kind,
            attitude: a.attitude,
            mood: a.mood,
            exposure: a.exposure,
        })
        .collect();
    aggregate(day, &samples, with_bimodality)
}

/// The same aggregates recomputed from one day's panel rows.
pub fn metrics_from_panel(rows: &[PanelRow], day: usize, with_bimodality: bool) -> DailyMetrics {
    let samples: Vec<Sample> = rows
        .iter()
        .filter(|r| r.day == day)
        .map(|r| Sample {
            kind: r.kind,
            attitude: r.attitude,
            mood: r.mood,
            exposure: r.exposure,
        })
        .collect();
    aggregate(day, &samples, with_bimodality)
}

/// Shared inputs of a run. Built from the config by [`Resources::from_config`]
/// or assembled directly, e.g. to inject a custom backend.
pub struct Resources {
    pub timeline: Timeline,
    pub lexicon: Arc<Lexicon>,
    pub news: Box<dyn NewsSource>,
    pub remote: Option<Box<dyn GenerationBackend>>,
}

impl Resources {
    pub fn from_config(config: &SimConfig) -> Result<Self> {
        let timeline = Timeline::load_or_bundled(config.timeline_path.as_deref(), config.n_days)?;
        let lexicon = match &config.lexicon_path {
            Some(p) => Lexicon::load(p)?,
            None => Lexicon::default(),
        }
        .with_match_mode(config.keyword_matching);
        let timeout = Duration::from_secs(config.request_timeout_secs);
        let news: Box<dyn NewsSource> = if config.offline {
            Box::new(load_news_fixture(config.news_fixture_path.as_deref())?)
        } else {
            Box::new(HttpNewsSearch::new(config.search_url.clone(), timeout))
        };
        let remote: Option<Box<dyn GenerationBackend>> = match config.backend {
            BackendChoice::Stub => None,
            BackendChoice::Remote => Some(Box::new(RemoteBackend::new(RemoteSettings {
                base_url: config.base_url.clone(),
                model: config.model_name.clone(),
                gen_temperature: config.gen_temperature,
                score_temperature: config.score_temperature,
                timeout,
                max_in_flight: config.max_in_flight,
            }))),
        };
        Ok(Self {
            timeline,
            lexicon: Arc::new(lexicon),
            news,
            remote,
        })
    }
}

pub fn load_news_fixture(path: Option<&Path>) -> Result<OfflineNews> {
    match path {
        Some(p) => Ok(OfflineNews::load(p)?),
        None => Ok(OfflineNews::bundled()),
    }
}

pub struct SimOutput {
    pub config: SimConfig,
    /// Population as sampled, before day 0.
    pub initial_population: Vec<Agent>,
    pub agents: Vec<Agent>,
    pub graph: SocialGraph,
    pub timeline: Timeline,
    pub panel: Vec<PanelRow>,
    pub metrics: Vec<DailyMetrics>,
}

/// Population and graph for a config, exactly as a run would start.
pub fn initialize(config: &SimConfig) -> Result<(Vec<Agent>, SocialGraph)> {
    config.validate()?;
    let streams = SeedStreams::new(config.seed);
    let population = sample_population(config.n_agents, &config.priors(), &streams);
    let graph = SocialGraph::watts_strogatz(
        config.n_agents,
        config.network.k,
        config.network.p,
        &mut streams.graph(),
    )?;
    Ok((population, graph))
}

pub fn run_simulation(config: &SimConfig) -> Result<SimOutput> {
    config.validate()?;
    let resources = Resources::from_config(config)?;
    run_with(config, resources)
}

struct DayPost {
    text: String,
    score: f64,
    used: BackendUsed,
}

pub fn run_with(config: &SimConfig, resources: Resources) -> Result<SimOutput> {
    let (initial_population, graph) = initialize(config)?;
    if resources.timeline.len() < config.n_days {
        return Err(Error::Runtime(format!(
            "timeline has {} entries for {} days",
            resources.timeline.len(),
            config.n_days
        )));
    }
    let coefficients: Coefficients = config.coefficients();
    let streams = SeedStreams::new(config.seed);
    let stub = StubBackend::new(resources.lexicon.clone());
    let remote = resources.remote.as_deref();
    let news = resources.news.as_ref();
    let timeline = &resources.timeline;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Runtime(format!("worker pool: {e}")))?;

    let mut agents = initial_population.clone();
    let mut panel = Vec::with_capacity(config.n_agents * config.n_days);
    let mut metrics = Vec::with_capacity(config.n_days);

    for day_index in 0..config.n_days {
        let entry = &timeline.entries[day_index];
        let context = DayContext::scan(&entry.text, &resources.lexicon);
        let topic = day_topic(&entry.text);

        let posts: Vec<DayPost> = pool.install(|| {
            agents
                .par_iter_mut()
                .enumerate()
                .map(|(i, agent)| {
                    assign_quirk(agent, &mut streams.quirk(i));
                    let obs = observe(agent, entry, &timeline.critical_event, news);
                    let prompt = build_prompt(agent, &obs);
                    let request = PostRequest {
                        prompt: &prompt,
                        attitude: agent.attitude,
                        quirk: agent.quirk.expect("quirk assigned above"),
                        topic: &topic,
                        stub_seed: streams.stub_post_seed(i, day_index),
                    };
                    let post = generation::generate_post(remote, &stub, &request);
                    let scored = generation::score_post(remote, &stub, &post.text);
                    agent.messages.push(post.text.clone());
                    DayPost {
                        text: post.text,
                        score: scored.score,
                        used: post.used.combine(scored.used),
                    }
                })
                .collect()
        });

        let scores: Vec<f64> = posts.iter().map(|p| p.score).collect();
        pool.install(|| {
            agents.par_iter_mut().enumerate().for_each(|(i, agent)| {
                let inputs = UpdateInputs {
                    own_score: scores[i],
                    neighbor_scores: graph.neighbor_set(i).iter().map(|&j| scores[j]).collect(),
                    day: context,
                };
                apply_step(agent, &inputs, &coefficients);
            })
        });

        for (agent, post) in agents.iter().zip(posts) {
            panel.push(PanelRow {
                day: day_index,
                date: entry.date,
                agent_id: agent.id.clone(),
                kind: agent.kind,
                post: post.text,
                own_score: post.score,
                attitude: agent.attitude,
                mood: agent.mood,
                exposure: agent.exposure,
                economic_threat: agent.beliefs.economic_threat,
                cultural_threat: agent.beliefs.cultural_threat,
                security_threat: agent.beliefs.security_threat,
                humanitarian: agent.beliefs.humanitarian,
                backend_used: post.used,
                evidence_level: entry.evidence,
            });
        }
        let m = compute_metrics(&agents, day_index, config.bimodality);
        log::info!(
            "day {day_index}: mean attitude {:+.4}, polarization {:.4}",
            m.mean_attitude,
            m.polarization
        );
        metrics.push(m);
    }

    Ok(SimOutput {
        config: config.clone(),
        initial_population,
        agents,
        graph,
        timeline: resources.timeline,
        panel,
        metrics,
    })
}
