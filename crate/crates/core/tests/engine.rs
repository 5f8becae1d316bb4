use std::collections::BTreeSet;

use discourse_sim::config::BackendChoice;
use discourse_sim::engine::{compute_metrics, metrics_from_panel, run_with, Resources};
use discourse_sim::generation::{BackendUsed, TOOL_RECALL, TOOL_SEARCH};
use discourse_sim::{run_simulation, SimConfig};

fn config(n_agents: usize, n_days: usize) -> SimConfig {
    SimConfig {
        n_agents,
        n_days,
        backend: BackendChoice::Stub,
        offline: true,
        ..SimConfig::default()
    }
}

#[test]
fn panel_covers_every_agent_day_once() {
    let out = run_simulation(&config(30, 6)).unwrap();
    assert_eq!(out.panel.len(), 180);
    let keys: BTreeSet<(usize, &str)> = out.panel.iter().map(|r| (r.day, r.agent_id.as_str())).collect();
    assert_eq!(keys.len(), 180);
    for (i, row) in out.panel.iter().enumerate() {
        assert_eq!(row.day, i / 30);
        assert_eq!(row.agent_id, format!("agent_{}", i % 30));
        assert_eq!(row.backend_used, BackendUsed::Stub);
        assert_eq!(row.date, out.timeline.entries[row.day].date);
    }
    assert_eq!(out.metrics.len(), 6);
}

#[test]
fn attitude_history_matches_panel() {
    let out = run_simulation(&config(20, 5)).unwrap();
    for (i, agent) in out.agents.iter().enumerate() {
        let trajectory: Vec<f64> = out.panel.iter().filter(|r| r.agent_id == agent.id).map(|r| r.attitude).collect();
        assert_eq!(agent.attitude_history, trajectory);
        assert_eq!(agent.messages.len(), 5);
        assert_eq!(agent.reasoning_log.len(), 10);
        assert!(agent.reasoning_log.chunks(2).all(|c| c[0].tool_name == TOOL_SEARCH && c[1].tool_name == TOOL_RECALL));
        assert_eq!(agent.kind, out.initial_population[i].kind);
        assert!(agent.quirk.is_some());
        assert!(out.initial_population[i].quirk.is_none());
    }
}

#[test]
fn metrics_agree_with_panel() {
    let mut c = config(40, 4);
    c.bimodality = true;
    let out = run_simulation(&c).unwrap();
    for m in &out.metrics {
        assert_eq!(&metrics_from_panel(&out.panel, m.day, true), m);
        assert!(m.bimodality.is_some());
    }
    assert_eq!(compute_metrics(&out.agents, 3, true), out.metrics[3]);
}

#[test]
fn runs_are_reproducible_and_seed_sensitive() {
    let a = run_simulation(&config(25, 4)).unwrap();
    let b = run_simulation(&config(25, 4)).unwrap();
    assert_eq!(a.panel, b.panel);
    assert_eq!(a.metrics, b.metrics);
    let mut other = config(25, 4);
    other.seed = 43;
    let c = run_simulation(&other).unwrap();
    assert_ne!(a.panel, c.panel);
}

#[test]
fn worker_count_does_not_change_results() {
    let mut single = config(50, 5);
    single.workers = 1;
    let mut many = config(50, 5);
    many.workers = 8;
    let a = run_simulation(&single).unwrap();
    let b = run_simulation(&many).unwrap();
    assert_eq!(a.panel, b.panel);
    assert_eq!(a.metrics, b.metrics);
}

#[test]
fn quirks_persist_across_days() {
    let out = run_simulation(&config(15, 3)).unwrap();
    let first = run_simulation(&config(15, 1)).unwrap();
    for (a, b) in out.agents.iter().zip(&first.agents) {
        assert_eq!(a.quirk, b.quirk);
    }
}

#[test]
fn short_timeline_is_rejected() {
    let c = config(10, 3);
    let mut res = Resources::from_config(&c).unwrap();
    res.timeline.entries.truncate(2);
    assert!(run_with(&c, res).is_err());
}

#[test]
fn zero_days_yields_empty_panel() {
    let out = run_simulation(&config(10, 0)).unwrap();
    assert!(out.panel.is_empty() && out.metrics.is_empty());
    assert_eq!(out.agents, out.initial_population);
}
