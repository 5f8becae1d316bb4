use chrono::NaiveDate;

use discourse_sim::config::BackendChoice;
use discourse_sim::engine::{metrics_from_panel, PanelRow};
use discourse_sim::generation::BackendUsed;
use discourse_sim::output::{read_panel, write_outputs, write_panel, RunSummary, METRICS_FILE};
use discourse_sim::timeline::EvidenceLevel;
use discourse_sim::{run_simulation, AgentKind, SimConfig};

fn small_run(bimodality: bool) -> discourse_sim::SimOutput {
    run_simulation(&SimConfig {
        n_agents: 12,
        n_days: 3,
        backend: BackendChoice::Stub,
        offline: true,
        bimodality,
        ..SimConfig::default()
    })
    .unwrap()
}

#[test]
fn awkward_posts_round_trip_through_csv() {
    let row = PanelRow {
        day: 0,
        date: NaiveDate::from_ymd_opt(2025, 4, 26).unwrap(),
        agent_id: "agent_0".into(),
        kind: AgentKind::Media,
        post: "He said \"enough\", then left,\nquietly".into(),
        own_score: -0.1,
        attitude: 0.30000000000000004,
        mood: -1.0,
        exposure: 1e-17,
        economic_threat: 0.0,
        cultural_threat: -0.0,
        security_threat: 0.123456789012345,
        humanitarian: 1.0,
        backend_used: BackendUsed::StubFallback,
        evidence_level: EvidenceLevel::ContextuallySupported,
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    write_panel(std::slice::from_ref(&row), std::fs::File::create(&path).unwrap()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"He said \"\"enough\"\", then left,\nquietly\""));
    assert!(text.contains("stub_fallback,contextually_supported"));
    assert_eq!(read_panel(&path).unwrap(), vec![row]);
}

#[test]
fn written_panel_reproduces_metrics() {
    let out = small_run(false);
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&out, dir.path()).unwrap();
    let panel = read_panel(&files.panel).unwrap();
    assert_eq!(panel, out.panel);
    for m in &out.metrics {
        assert_eq!(&metrics_from_panel(&panel, m.day, false), m);
    }
    let header = std::fs::read_to_string(&files.panel).unwrap();
    assert!(header.starts_with(
        "day,date,agent_id,kind,post,own_score,attitude,mood,exposure,economic_threat,\
         cultural_threat,security_threat,humanitarian,backend_used,evidence_level\n"
    ));
}

#[test]
fn summary_config_round_trips() {
    let out = small_run(false);
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&out, dir.path()).unwrap();
    let summary: RunSummary = serde_json::from_str(&std::fs::read_to_string(&files.summary).unwrap()).unwrap();
    assert_eq!(summary.config, out.config);
    assert_eq!(summary.seed, 42);
    assert_eq!(summary.panel_rows, 36);
    assert_eq!(summary.backend_counts.get("stub"), Some(&36));
    assert_eq!(summary.metrics, out.metrics);
    let reparsed = SimConfig::from_json(&serde_json::to_string(&summary.config).unwrap(), "summary").unwrap();
    assert_eq!(reparsed, out.config);
}

#[test]
fn metrics_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&small_run(true), dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join(METRICS_FILE)).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "day,mean_attitude,polarization,mean_mood,mean_exposure,mean_attitude_centrist,\
         mean_attitude_pro_imm,mean_attitude_far_right,mean_attitude_media,bimodality"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn edgelist_and_population_written() {
    let out = small_run(false);
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&out, dir.path()).unwrap();
    let edges = std::fs::read_to_string(&files.edgelist).unwrap();
    assert_eq!(edges.lines().count(), 36);
    let population: Vec<discourse_sim::Agent> =
        serde_json::from_str(&std::fs::read_to_string(&files.population).unwrap()).unwrap();
    assert_eq!(population, out.initial_population);
}

#[test]
fn metrics_csv_recomputed_from_panel_csv_is_identical() {
    let out = small_run(true);
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&out, dir.path()).unwrap();
    let panel = read_panel(&files.panel).unwrap();
    let recomputed: Vec<_> = (0..out.config.n_days).map(|d| metrics_from_panel(&panel, d, true)).collect();
    let mut buf = Vec::new();
    discourse_sim::output::write_metrics(&recomputed, true, &mut buf).unwrap();
    assert_eq!(buf, std::fs::read(&files.metrics).unwrap());
}
