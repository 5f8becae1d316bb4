use std::path::Path;

use clap::Parser;
use discourse_sim::cli::{cli_main, Cli, Command};
use discourse_sim::config::BackendChoice;

fn run(args: &[&str]) -> i32 {
    cli_main(std::iter::once("discourse-sim").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]), 0);
    assert_eq!(run(&["--version"]), 0);
    assert_eq!(run(&["run", "--help"]), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]), 1);
    assert_eq!(run(&["run", "--no-such-flag"]), 1);
    assert_eq!(run(&["run", "--backend", "gpt"]), 1);
    assert_eq!(run(&["validate", "--agents", "4"]), 1);
    assert_eq!(run(&["validate", "--config", "/nonexistent/config.json"]), 1);
}

#[test]
fn validate_accepts_defaults_and_rejects_short_timeline() {
    assert_eq!(run(&["validate", "--offline"]), 0);

    let dir = tempfile::tempdir().unwrap();
    let full: serde_json::Value =
        serde_json::from_str(include_str!("../fixtures/dublin_2025_timeline.json")).unwrap();
    let mut short = full.clone();
    short["entries"].as_array_mut().unwrap().truncate(14);
    let path = dir.path().join("short.json");
    std::fs::write(&path, short.to_string()).unwrap();
    assert_eq!(run(&["validate", "--timeline", path_str(&path), "--days", "15"]), 1);
    assert_eq!(run(&["validate", "--timeline", path_str(&path), "--days", "14"]), 0);
}

#[test]
fn stub_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let code = run(&[
        "run", "--backend", "stub", "--offline", "--agents", "20", "--days", "3", "--out", path_str(&out),
    ]);
    assert_eq!(code, 0);
    for f in ["panel.csv", "metrics.csv", "run_summary.json", "graph.edgelist", "population.json"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    assert_eq!(std::fs::read_to_string(out.join("panel.csv")).unwrap().lines().count(), 61);
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let code = run(&[
        "run", "--backend", "stub", "--offline", "--agents", "10", "--days", "1", "--out", path_str(&blocker),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"n_agents": 30, "seed": 7, "backend": "stub", "workers": 2}"#).unwrap();
    let cli = Cli::try_parse_from(["discourse-sim", "run", "--config", path_str(&cfg), "--seed", "9"]).unwrap();
    let Command::Run(args) = cli.command else { panic!("expected run") };
    let c = args.overrides.resolve().unwrap();
    assert_eq!((c.n_agents, c.seed, c.workers, c.backend), (30, 9, 2, BackendChoice::Stub));
    assert_eq!(c.n_days, 15);
}

#[test]
fn environment_sits_between_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"base_url": "http://from-file:1"}"#).unwrap();
    std::env::set_var("DISCOURSE_BASE_URL", "http://from-env:2");
    let resolve = |extra: &[&str]| {
        let mut argv = vec!["discourse-sim", "validate", "--config", path_str(&cfg)];
        argv.extend_from_slice(extra);
        let Command::Validate(o) = Cli::try_parse_from(argv).unwrap().command else { panic!() };
        o.resolve().unwrap().base_url
    };
    assert_eq!(resolve(&[]), "http://from-env:2");
    assert_eq!(resolve(&["--base-url", "http://from-flag:3"]), "http://from-flag:3");
    std::env::remove_var("DISCOURSE_BASE_URL");
    assert_eq!(resolve(&[]), "http://from-file:1");
}

#[test]
fn dump_population_writes_population_and_graph() {
    let dir = tempfile::tempdir().unwrap();
    let pop = dir.path().join("pop.json");
    let graph = dir.path().join("g.txt");
    assert_eq!(run(&["dump-population", "--out", path_str(&pop), "--graph", path_str(&graph)]), 0);
    let agents: Vec<discourse_sim::Agent> = serde_json::from_str(&std::fs::read_to_string(&pop).unwrap()).unwrap();
    assert_eq!(agents.len(), 100);
    assert_eq!(std::fs::read_to_string(&graph).unwrap().lines().count(), 300);
}

#[test]
fn repeated_seeded_runs_produce_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<_> = ["a", "b"].iter().map(|n| dir.path().join(n)).collect();
    for out in &outs {
        let code = run(&["run", "--backend", "stub", "--offline", "--seed", "42", "--days", "4", "--out", path_str(out)]);
        assert_eq!(code, 0);
    }
    for f in ["panel.csv", "metrics.csv", "graph.edgelist", "population.json"] {
        assert_eq!(std::fs::read(outs[0].join(f)).unwrap(), std::fs::read(outs[1].join(f)).unwrap(), "{f}");
    }
}
