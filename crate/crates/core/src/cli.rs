//! Command-line front end.
//!
//! Settings are layered: built-in defaults, then the `--config` file, then
//! environment variables, then explicit flags.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{BackendChoice, SimConfig};
use crate::engine::{self, load_news_fixture, run_simulation};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::output::{self, write_outputs};
use crate::timeline::Timeline;

#[derive(Debug, Parser)]
#[command(name = "discourse-sim", version, about = "Generative agent-based attitude diffusion simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a simulation and write its artifacts.
    Run(RunArgs),
    /// Check the config and every input file without running.
    Validate(Overrides),
    /// Write the sampled initial population (and optionally the graph).
    DumpPopulation(DumpArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config file; keys not present keep their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub days: Option<usize>,
    #[arg(long)]
    pub agents: Option<usize>,
    #[arg(long)]
    pub backend: Option<BackendChoice>,
    /// Use bundled news snippets instead of live search.
    #[arg(long, env = "DISCOURSE_OFFLINE")]
    pub offline: bool,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, env = "DISCOURSE_BASE_URL")]
    pub base_url: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub timeline: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<SimConfig> {
        let mut c = match &self.config {
            Some(p) => SimConfig::load(p)?,
            None => SimConfig::default(),
        };
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.days {
            c.n_days = v;
        }
        if let Some(v) = self.agents {
            c.n_agents = v;
        }
        if let Some(v) = self.backend {
            c.backend = v;
        }
        if self.offline {
            c.offline = true;
        }
        if let Some(v) = &self.model {
            c.model_name = v.clone();
        }
        if let Some(v) = &self.base_url {
            c.base_url = v.clone();
        }
        if let Some(v) = self.workers {
            c.workers = v;
        }
        if let Some(v) = &self.timeline {
            c.timeline_path = Some(v.clone());
        }
        if let Some(v) = &self.lexicon {
            c.lexicon_path = Some(v.clone());
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub overrides: Overrides,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub overrides: Overrides,
    /// Population JSON destination.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the graph edge list here.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

fn run(args: &RunArgs) -> Result<()> {
    let mut config = args.overrides.resolve()?;
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    if config.backend == BackendChoice::Remote {
        log::info!("remote backend {} at {}", config.model_name, config.base_url);
    }
    let result = run_simulation(&config)?;
    let files = write_outputs(&result, &config.out_dir)?;
    println!(
        "{} agents x {} days -> {}",
        config.n_agents,
        config.n_days,
        files.panel.display()
    );
    println!("metrics: {}", files.metrics.display());
    println!("summary: {}", files.summary.display());
    Ok(())
}

fn validate(overrides: &Overrides) -> Result<()> {
    let config = overrides.resolve()?;
    let timeline = Timeline::load_or_bundled(config.timeline_path.as_deref(), config.n_days)?;
    if let Some(p) = &config.lexicon_path {
        Lexicon::load(p)?;
    }
    if config.offline {
        load_news_fixture(config.news_fixture_path.as_deref())?;
    }
    println!(
        "ok: {} agents, {} days, {} timeline entries, backend {}",
        config.n_agents,
        config.n_days,
        timeline.len(),
        config.backend
    );
    Ok(())
}

fn dump_population(args: &DumpArgs) -> Result<()> {
    let config = args.overrides.resolve()?;
    let (population, graph) = engine::initialize(&config)?;
    output::write_population(&population, &args.out)?;
    if let Some(path) = &args.graph {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        graph
            .write_edgelist(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))?;
    }
    println!("{} agents -> {}", population.len(), args.out.display());
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(a) => run(a),
        Command::Validate(o) => validate(o),
        Command::DumpPopulation(a) => dump_population(a),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
