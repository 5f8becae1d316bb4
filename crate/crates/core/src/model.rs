//! Agent data model and initial population sampling.
//!
//! Agents come in four kinds whose shares of the population and prior
//! distributions are fixed by [`kind_distribution`] and [`PriorConfig`].
//! All draws are uniform over closed intervals.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SeedStreams;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("unknown agent kind `{0}` (expected far_right, pro_imm, centrist or media)")]
    UnknownKind(String),
    #[error("unknown quirk `{0}`")]
    UnknownQuirk(String),
    #[error("prior `{name}` = [{lo}, {hi}] is not a sub-interval of [{min}, {max}]")]
    PriorOutOfRange {
        name: String,
        lo: f64,
        hi: f64,
        min: f64,
        max: f64,
    },
}

/// Ideological type. Declaration order is the order of the kinds table
/// (centrist, pro_imm, far_right, media) and is used for tie-breaking.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Centrist,
    ProImm,
    FarRight,
    Media,
}

impl AgentKind {
    pub const ALL: [AgentKind; 4] = [
        AgentKind::Centrist,
        AgentKind::ProImm,
        AgentKind::FarRight,
        AgentKind::Media,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AgentKind::Centrist => "centrist",
            AgentKind::ProImm => "pro_imm",
            AgentKind::FarRight => "far_right",
            AgentKind::Media => "media",
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgentKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ModelError::UnknownKind(s.to_string()))
    }
}

/// Population shares per kind, in table order. Sums to 1.
pub fn kind_distribution() -> [(AgentKind, f64); 4] {
    [
        (AgentKind::Centrist, 0.45),
        (AgentKind::ProImm, 0.25),
        (AgentKind::FarRight, 0.20),
        (AgentKind::Media, 0.10),
    ]
}

/// Writing style, fixed at an agent's first post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quirk {
    Sarcasm,
    Emojis,
    Hashtags,
    FormalTone,
    RhetoricalQuestions,
    AllLowercase,
    StatisticsCiting,
    PersonalAnecdote,
}

impl Quirk {
    pub const ALL: [Quirk; 8] = [
        Quirk::Sarcasm,
        Quirk::Emojis,
        Quirk::Hashtags,
        Quirk::FormalTone,
        Quirk::RhetoricalQuestions,
        Quirk::AllLowercase,
        Quirk::StatisticsCiting,
        Quirk::PersonalAnecdote,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Quirk::Sarcasm => "sarcasm",
            Quirk::Emojis => "emojis",
            Quirk::Hashtags => "hashtags",
            Quirk::FormalTone => "formal_tone",
            Quirk::RhetoricalQuestions => "rhetorical_questions",
            Quirk::AllLowercase => "all_lowercase",
            Quirk::StatisticsCiting => "statistics_citing",
            Quirk::PersonalAnecdote => "personal_anecdote",
        }
    }

    /// Style instruction rendered into generation prompts.
    pub fn style_hint(self) -> &'static str {
        match self {
            Quirk::Sarcasm => "dry, sarcastic remarks",
            Quirk::Emojis => "sprinkle a few emojis",
            Quirk::Hashtags => "end with one or two hashtags",
            Quirk::FormalTone => "formal, measured wording",
            Quirk::RhetoricalQuestions => "pose a rhetorical question",
            Quirk::AllLowercase => "write entirely in lowercase",
            Quirk::StatisticsCiting => "mention a number or statistic",
            Quirk::PersonalAnecdote => "refer to something from your own life",
        }
    }
}

impl fmt::Display for Quirk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quirk {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quirk::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| ModelError::UnknownQuirk(s.to_string()))
    }
}

/// Closed interval `[lo, hi]`, serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval(pub f64, pub f64);

impl Interval {
    pub fn lo(&self) -> f64 {
        self.0
    }

    pub fn hi(&self) -> f64 {
        self.1
    }

    pub fn contains(&self, x: f64) -> bool {
        self.0 <= x && x <= self.1
    }

    pub fn is_within(&self, outer: Interval) -> bool {
        self.0 <= self.1 && outer.0 <= self.0 && self.1 <= outer.1
    }

    /// Shrink toward the midpoint, keeping `factor` of the width.
    pub fn narrowed(&self, factor: f64) -> Interval {
        let mid = (self.0 + self.1) / 2.0;
        let half = (self.1 - self.0) / 2.0 * factor;
        Interval(mid - half, mid + half)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random_range(self.0..=self.1)
    }
}

pub const ATTITUDE_RANGE: Interval = Interval(-1.0, 1.0);
pub const OPENNESS_RANGE: Interval = Interval(0.1, 1.0);
pub const CONFORMITY_RANGE: Interval = Interval(0.3, 0.8);
pub const REACTIVITY_RANGE: Interval = Interval(0.2, 1.0);
pub const TRUST_RANGE: Interval = Interval(0.4, 0.9);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsychProfile {
    pub openness: f64,
    pub conformity: f64,
    pub emotional_reactivity: f64,
    pub trust_peers: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BeliefState {
    pub economic_threat: f64,
    pub cultural_threat: f64,
    pub security_threat: f64,
    pub humanitarian: f64,
}

impl BeliefState {
    pub fn clipped(self) -> Self {
        Self {
            economic_threat: self.economic_threat.clamp(-1.0, 1.0),
            cultural_threat: self.cultural_threat.clamp(-1.0, 1.0),
            security_threat: self.security_threat.clamp(-1.0, 1.0),
            humanitarian: self.humanitarian.clamp(-1.0, 1.0),
        }
    }
}

/// One orchestrator-invoked tool call, kept for auditing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolCallRecord {
    pub tool_name: String,
    pub tool_input: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: String,
    pub kind: AgentKind,
    /// -1 strongly pro-immigration, +1 strongly anti-immigration.
    pub attitude: f64,
    /// Cumulative exposure to threat-framed news; never decreases.
    pub exposure: f64,
    pub quirk: Option<Quirk>,
    pub beliefs: BeliefState,
    pub psych: PsychProfile,
    pub mood: f64,
    pub messages: Vec<String>,
    pub attitude_history: Vec<f64>,
    pub reasoning_log: Vec<ToolCallRecord>,
}

/// Prior ranges for the kind-dependent attributes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KindPriors {
    pub attitude: Interval,
    pub economic_threat: Interval,
    pub cultural_threat: Interval,
    pub humanitarian: Interval,
    pub openness: Interval,
    pub emotional_reactivity: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorConfig {
    pub centrist: KindPriors,
    pub pro_imm: KindPriors,
    pub far_right: KindPriors,
    pub media: KindPriors,
    pub conformity: Interval,
    pub trust_peers: Interval,
}

impl Default for PriorConfig {
    fn default() -> Self {
        let centrist = KindPriors {
            attitude: Interval(-0.4, 0.4),
            economic_threat: Interval(-0.2, 0.4),
            cultural_threat: Interval(-0.2, 0.3),
            humanitarian: Interval(0.0, 0.5),
            openness: Interval(0.3, 0.7),
            emotional_reactivity: Interval(0.3, 0.7),
        };
        Self {
            centrist,
            pro_imm: KindPriors {
                attitude: Interval(-1.0, -0.3),
                economic_threat: Interval(-0.5, 0.1),
                cultural_threat: Interval(-0.5, 0.0),
                humanitarian: Interval(0.4, 1.0),
                openness: Interval(0.4, 0.8),
                emotional_reactivity: Interval(0.4, 0.8),
            },
            far_right: KindPriors {
                attitude: Interval(0.5, 1.0),
                economic_threat: Interval(0.4, 0.9),
                cultural_threat: Interval(0.4, 0.9),
                humanitarian: Interval(-0.5, 0.1),
                openness: Interval(0.1, 0.4),
                emotional_reactivity: Interval(0.6, 1.0),
            },
            // Media has no belief row of its own: centrist ranges at half width.
            media: KindPriors {
                attitude: Interval(-0.3, 0.3),
                economic_threat: centrist.economic_threat.narrowed(0.5),
                cultural_threat: centrist.cultural_threat.narrowed(0.5),
                humanitarian: centrist.humanitarian.narrowed(0.5),
                openness: Interval(0.6, 1.0),
                emotional_reactivity: Interval(0.2, 0.5),
            },
            conformity: CONFORMITY_RANGE,
            trust_peers: TRUST_RANGE,
        }
    }
}

impl PriorConfig {
    pub fn for_kind(&self, kind: AgentKind) -> &KindPriors {
        match kind {
            AgentKind::Centrist => &self.centrist,
            AgentKind::ProImm => &self.pro_imm,
            AgentKind::FarRight => &self.far_right,
            AgentKind::Media => &self.media,
        }
    }

    /// Every configured range must sit inside the attribute's declared domain.
    pub fn validate(&self) -> Result<(), ModelError> {
        let check = |name: String, iv: Interval, outer: Interval| {
            if iv.is_within(outer) {
                Ok(())
            } else {
                Err(ModelError::PriorOutOfRange {
                    name,
                    lo: iv.0,
                    hi: iv.1,
                    min: outer.0,
                    max: outer.1,
                })
            }
        };
        for kind in AgentKind::ALL {
            let p = self.for_kind(kind);
            check(format!("{kind}.attitude"), p.attitude, ATTITUDE_RANGE)?;
            check(format!("{kind}.economic_threat"), p.economic_threat, ATTITUDE_RANGE)?;
            check(format!("{kind}.cultural_threat"), p.cultural_threat, ATTITUDE_RANGE)?;
            check(format!("{kind}.humanitarian"), p.humanitarian, ATTITUDE_RANGE)?;
            check(format!("{kind}.openness"), p.openness, OPENNESS_RANGE)?;
            check(
                format!("{kind}.emotional_reactivity"),
                p.emotional_reactivity,
                REACTIVITY_RANGE,
            )?;
        }
        check("conformity".into(), self.conformity, CONFORMITY_RANGE)?;
        check("trust_peers".into(), self.trust_peers, TRUST_RANGE)
    }
}

/// Draw one agent from its kind's priors. Exposure, security threat and mood
/// start at zero; histories start empty and the quirk is assigned later.
pub fn sample_agent<R: Rng + ?Sized>(
    id: impl Into<String>,
    kind: AgentKind,
    priors: &PriorConfig,
    rng: &mut R,
) -> Agent {
    let p = priors.for_kind(kind);
    let attitude = p.attitude.sample(rng);
    let economic_threat = p.economic_threat.sample(rng);
    let cultural_threat = p.cultural_threat.sample(rng);
    let humanitarian = p.humanitarian.sample(rng);
    let openness = p.openness.sample(rng);
    let conformity = priors.conformity.sample(rng);
    let emotional_reactivity = p.emotional_reactivity.sample(rng);
    let trust_peers = priors.trust_peers.sample(rng);
    let exposure = 0.0;
    Agent {
        id: id.into(),
        kind,
        attitude,
        exposure,
        quirk: None,
        beliefs: BeliefState {
            economic_threat,
            cultural_threat,
            security_threat: exposure,
            humanitarian,
        },
        psych: PsychProfile {
            openness,
            conformity,
            emotional_reactivity,
            trust_peers,
        },
        mood: 0.0,
        messages: Vec::new(),
        attitude_history: Vec::new(),
        reasoning_log: Vec::new(),
    }
}

/// Largest-remainder apportionment of `n` seats over `shares` (which sum to
/// 1). Ties on the fractional part go to the earlier entry.
pub fn apportion(n: usize, shares: &[f64]) -> Vec<usize> {
    // Quotas in fixed point (nine decimals) so remainders such as 28 × 0.45
    // and 28 × 0.2 compare exactly.
    const SCALE: u128 = 1_000_000_000;
    let quotas: Vec<u128> = shares
        .iter()
        .map(|s| n as u128 * (s.max(0.0) * SCALE as f64).round() as u128)
        .collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| (q / SCALE) as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| (quotas[b] % SCALE).cmp(&(quotas[a] % SCALE)).then(a.cmp(&b)));
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Per-kind head counts for a population of `n`, in table order.
pub fn kind_counts(n: usize) -> Vec<(AgentKind, usize)> {
    let dist = kind_distribution();
    let shares: Vec<f64> = dist.iter().map(|(_, s)| *s).collect();
    dist.iter()
        .map(|(k, _)| *k)
        .zip(apportion(n, &shares))
        .collect()
}

/// Sample the initial population. Kinds are apportioned exactly, shuffled
/// across ids with the population stream, then each agent draws from its own
/// stream so the result is a pure function of `(n, priors, seed)`.
pub fn sample_population(n: usize, priors: &PriorConfig, streams: &SeedStreams) -> Vec<Agent> {
    let mut kinds: Vec<AgentKind> = kind_counts(n)
        .into_iter()
        .flat_map(|(k, c)| std::iter::repeat_n(k, c))
        .collect();
    kinds.shuffle(&mut streams.population());
    kinds
        .into_iter()
        .enumerate()
        .map(|(i, kind)| sample_agent(format!("agent_{i}"), kind, priors, &mut streams.agent_init(i)))
        .collect()
}

/// Give the agent a writing quirk if it has none yet.
pub fn assign_quirk<R: Rng + ?Sized>(agent: &mut Agent, rng: &mut R) {
    if agent.quirk.is_none() {
        agent.quirk = Some(Quirk::ALL[rng.random_range(0..Quirk::ALL.len())]);
    }
}
