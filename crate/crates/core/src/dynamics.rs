//! End-of-day belief update.
//!
//! Each agent is updated in a fixed order once every same-day post score is
//! known: news salience moves the security and humanitarian beliefs, the
//! attitude blends yesterday's value with own score, peer pull and the
//! post-update composite belief, then mood and exposure advance.

use serde::{Deserialize, Serialize};

use crate::lexicon::{self, Lexicon};
use crate::model::{Agent, BeliefState, PsychProfile};

/// Every numeric constant of the update model. Defaults are the reference
/// values; a run only departs from them through an explicit config block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Coefficients {
    /// Salience added per keyword occurrence (before reactivity scaling).
    pub salience_per_keyword: f64,
    pub exposure_increment: f64,
    pub mood_decay: f64,
    pub threat_shock: f64,
    pub calm_shock: f64,
    /// `inertia = 1 - openness * inertia_openness_scale`.
    pub inertia_openness_scale: f64,
    pub weight_economic: f64,
    pub weight_cultural: f64,
    pub weight_security: f64,
    /// Subtracted in the composite.
    pub weight_humanitarian: f64,
    pub mix_own_score: f64,
    pub mix_peer_pull: f64,
    pub mix_belief: f64,
    /// Opt-in: also move economic and cultural threat beliefs with their own
    /// keyword lists, using the same salience rule as security threat.
    pub extended_belief_channels: bool,
}

impl Coefficients {
    pub const REFERENCE: Coefficients = Coefficients {
        salience_per_keyword: 0.06,
        exposure_increment: 0.07,
        mood_decay: 0.8,
        threat_shock: -0.1,
        calm_shock: 0.04,
        inertia_openness_scale: 0.5,
        weight_economic: 0.3,
        weight_cultural: 0.3,
        weight_security: 0.2,
        weight_humanitarian: 0.2,
        mix_own_score: 0.4,
        mix_peer_pull: 0.3,
        mix_belief: 0.3,
        extended_belief_channels: false,
    };
}

impl Default for Coefficients {
    fn default() -> Self {
        Self::REFERENCE
    }
}

/// Keyword counts for one day's news entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DayContext {
    pub threat_count: usize,
    pub humanitarian_count: usize,
    pub economic_count: usize,
    pub cultural_count: usize,
}

impl DayContext {
    pub fn from_counts(threat_count: usize, humanitarian_count: usize) -> Self {
        Self {
            threat_count,
            humanitarian_count,
            ..Self::default()
        }
    }

    pub fn scan(text: &str, lexicon: &Lexicon) -> Self {
        Self {
            threat_count: lexicon.threat_count(text),
            humanitarian_count: lexicon.humanitarian_count(text),
            economic_count: lexicon.count(text, &lexicon.economic_terms),
            cultural_count: lexicon.count(text, &lexicon.cultural_terms),
        }
    }

    pub fn threat_present(&self) -> bool {
        self.threat_count > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpdateInputs {
    /// Score of the agent's own post today.
    pub own_score: f64,
    /// Today's post scores of the agent's graph neighbours.
    pub neighbor_scores: Vec<f64>,
    pub day: DayContext,
}

pub fn inertia(openness: f64, c: &Coefficients) -> f64 {
    1.0 - openness * c.inertia_openness_scale
}

pub fn peer_mean(scores: &[f64]) -> Option<f64> {
    if scores.is_empty() {
        None
    } else {
        Some(scores.iter().sum::<f64>() / scores.len() as f64)
    }
}

/// `conformity × trust_peers × (peer_mean − attitude)`, or 0 with no peers.
pub fn peer_pull(conformity: f64, trust_peers: f64, peer_mean: Option<f64>, attitude: f64) -> f64 {
    match peer_mean {
        Some(m) => conformity * trust_peers * (m - attitude),
        None => 0.0,
    }
}

pub fn decay_mood(prev: f64, c: &Coefficients) -> f64 {
    c.mood_decay * prev
}

pub fn update_mood(prev: f64, threat_present: bool, c: &Coefficients) -> f64 {
    let shock = if threat_present { c.threat_shock } else { c.calm_shock };
    (decay_mood(prev, c) + shock).clamp(-1.0, 1.0)
}

/// Weighted belief sum; deliberately left unclipped.
pub fn composite_belief(b: &BeliefState, c: &Coefficients) -> f64 {
    c.weight_economic * b.economic_threat + c.weight_cultural * b.cultural_threat
        + c.weight_security * b.security_threat
        - c.weight_humanitarian * b.humanitarian
}

pub fn update_beliefs(
    beliefs: &BeliefState,
    psych: &PsychProfile,
    day: &DayContext,
    c: &Coefficients,
) -> BeliefState {
    let r = psych.emotional_reactivity;
    let mut next = *beliefs;
    next.security_threat += lexicon::threat_salience(day.threat_count, r, c);
    next.humanitarian += lexicon::humanitarian_salience(day.humanitarian_count, r, psych.openness, c);
    if c.extended_belief_channels {
        next.economic_threat += lexicon::threat_salience(day.economic_count, r, c);
        next.cultural_threat += lexicon::threat_salience(day.cultural_count, r, c);
    }
    next.clipped()
}

/// `clip(inertia × prev + (1 − inertia) × flexible)` with the flexible term
/// `mix_own × own + mix_peer × pull + mix_belief × composite`.
pub fn blend_attitude(
    prev: f64,
    inertia: f64,
    own_score: f64,
    pull: f64,
    composite: f64,
    c: &Coefficients,
) -> f64 {
    let flexible = c.mix_own_score * own_score + c.mix_peer_pull * pull + c.mix_belief * composite;
    (inertia * prev + (1.0 - inertia) * flexible).clamp(-1.0, 1.0)
}

/// New attitude given the agent's already-updated beliefs.
pub fn update_attitude(
    prev: f64,
    psych: &PsychProfile,
    beliefs: &BeliefState,
    inputs: &UpdateInputs,
    c: &Coefficients,
) -> f64 {
    let pull = peer_pull(
        psych.conformity,
        psych.trust_peers,
        peer_mean(&inputs.neighbor_scores),
        prev,
    );
    blend_attitude(
        prev,
        inertia(psych.openness, c),
        inputs.own_score,
        pull,
        composite_belief(beliefs, c),
        c,
    )
}

pub fn update_exposure(prev: f64, emotional_reactivity: f64, threat_present: bool, c: &Coefficients) -> f64 {
    if threat_present {
        (prev + c.exposure_increment * emotional_reactivity).min(1.0)
    } else {
        prev
    }
}

/// Beliefs, then attitude, then mood, then exposure; records the new attitude.
pub fn apply_step(agent: &mut Agent, inputs: &UpdateInputs, c: &Coefficients) {
    let threat = inputs.day.threat_present();
    agent.beliefs = update_beliefs(&agent.beliefs, &agent.psych, &inputs.day, c);
    agent.attitude = update_attitude(agent.attitude, &agent.psych, &agent.beliefs, inputs, c);
    agent.mood = update_mood(agent.mood, threat, c);
    agent.exposure = update_exposure(agent.exposure, agent.psych.emotional_reactivity, threat, c);
    agent.attitude_history.push(agent.attitude);
}

pub fn step_agent(agent: &Agent, inputs: &UpdateInputs, c: &Coefficients) -> Agent {
    let mut next = agent.clone();
    apply_step(&mut next, inputs, c);
    next
}
