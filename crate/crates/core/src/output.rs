//! Run artifacts: panel and metrics CSVs, a JSON run summary, the graph edge
//! list and the initial population.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::engine::{DailyMetrics, PanelRow, SimOutput};
use crate::error::{Error, Result};
use crate::model::{Agent, AgentKind};

pub const PANEL_FILE: &str = "panel.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const SUMMARY_FILE: &str = "run_summary.json";
pub const EDGELIST_FILE: &str = "graph.edgelist";
pub const POPULATION_FILE: &str = "population.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub crate_version: String,
    pub seed: u64,
    pub config: SimConfig,
    pub timeline_event: String,
    pub n_agents: usize,
    pub n_days: usize,
    pub edge_count: usize,
    pub panel_rows: usize,
    /// Agent-days per `backend_used` value.
    pub backend_counts: BTreeMap<String, usize>,
    pub metrics: Vec<DailyMetrics>,
}

impl RunSummary {
    pub fn from_output(out: &SimOutput) -> Self {
        let mut backend_counts = BTreeMap::new();
        for row in &out.panel {
            *backend_counts.entry(row.backend_used.as_str().to_string()).or_insert(0) += 1;
        }
        Self {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: out.config.seed,
            config: out.config.clone(),
            timeline_event: out.timeline.critical_event.clone(),
            n_agents: out.agents.len(),
            n_days: out.metrics.len(),
            edge_count: out.graph.edge_count(),
            panel_rows: out.panel.len(),
            backend_counts,
            metrics: out.metrics.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OutputFiles {
    pub panel: PathBuf,
    pub metrics: PathBuf,
    pub summary: PathBuf,
    pub edgelist: PathBuf,
    pub population: PathBuf,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Runtime(format!("{}: {other:?}", path.display())),
    }
}

pub fn write_panel<W: Write>(rows: &[PanelRow], w: W) -> std::result::Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_panel(path: &Path) -> Result<Vec<PanelRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    rdr.deserialize()
        .collect::<std::result::Result<Vec<PanelRow>, _>>()
        .map_err(|e| csv_err(path, e))
}

pub fn metrics_header(with_bimodality: bool) -> Vec<String> {
    let mut h: Vec<String> = ["day", "mean_attitude", "polarization", "mean_mood", "mean_exposure"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend(AgentKind::ALL.iter().map(|k| format!("mean_attitude_{k}")));
    if with_bimodality {
        h.push("bimodality".into());
    }
    h
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_metrics<W: Write>(
    metrics: &[DailyMetrics],
    with_bimodality: bool,
    w: W,
) -> std::result::Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(metrics_header(with_bimodality))?;
    for m in metrics {
        let mut rec = vec![
            m.day.to_string(),
            m.mean_attitude.to_string(),
            m.polarization.to_string(),
            m.mean_mood.to_string(),
            m.mean_exposure.to_string(),
        ];
        rec.extend(AgentKind::ALL.iter().map(|&k| cell(m.kind_mean_attitude.get(k))));
        if with_bimodality {
            rec.push(cell(m.bimodality));
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_population(agents: &[Agent], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, agents)
        .map_err(|e| Error::Runtime(format!("{}: {e}", path.display())))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// Writes every artifact of a run into `dir`, creating it if needed.
pub fn write_outputs(out: &SimOutput, dir: &Path) -> Result<OutputFiles> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = OutputFiles {
        panel: dir.join(PANEL_FILE),
        metrics: dir.join(METRICS_FILE),
        summary: dir.join(SUMMARY_FILE),
        edgelist: dir.join(EDGELIST_FILE),
        population: dir.join(POPULATION_FILE),
    };

    write_panel(&out.panel, create(&files.panel)?).map_err(|e| csv_err(&files.panel, e))?;
    write_metrics(&out.metrics, out.config.bimodality, create(&files.metrics)?)
        .map_err(|e| csv_err(&files.metrics, e))?;

    let summary = RunSummary::from_output(out);
    let mut w = create(&files.summary)?;
    serde_json::to_writer_pretty(&mut w, &summary)
        .map_err(|e| Error::Runtime(format!("{}: {e}", files.summary.display())))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(&files.summary, e))?;

    let mut w = create(&files.edgelist)?;
    out.graph
        .write_edgelist(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(&files.edgelist, e))?;

    write_population(&out.initial_population, &files.population)?;
    Ok(files)
}
