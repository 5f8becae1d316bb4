//! Reproducible generative agent-based simulation of attitude diffusion.
//!
//! A population of heterogeneous agents lives on a fixed Watts-Strogatz
//! small-world graph. Every simulated day each agent observes the news,
//! writes a short post through a text-generation backend, has that post
//! scored on a -1..+1 attitude scale, and then updates its belief state with
//! a deterministic five-component model (news salience, peer pull, inertia,
//! mood and exposure).
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: agent data model and kind-stratified population sampling
//! * [`network`]: small-world social graph
//! * [`timeline`] and [`lexicon`]: event timeline, keyword scanning, sentiment
//! * [`generation`]: observe / prompt / generate / score pipeline and backends
//! * [`dynamics`]: belief, attitude, mood and exposure updates
//! * [`engine`], [`output`], [`cli`]: orchestration, persistence and the CLI

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod engine;
pub mod error;
pub mod generation;
pub mod lexicon;
pub mod model;
pub mod network;
pub mod output;
pub mod rng;
pub mod timeline;

pub use config::SimConfig;
pub use dynamics::Coefficients;
pub use engine::{run_simulation, DailyMetrics, PanelRow, SimOutput};
pub use error::{Error, Result};
pub use model::{Agent, AgentKind};
pub use network::SocialGraph;
