//! Command-line front end: `list`, `run` and `sample`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use chrono::Utc;
use clap::{Args, Parser, Subcommand};

use crate::config::ExperimentConfig;
use crate::experiments::{self, REGISTRY};
use crate::manifest::{write_plot_csvs, RunManifest};
use crate::rng::RandomSource;
use crate::samplers::{self, DistributionSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "spherelab", version, about = "Monte-Carlo checks of spherical symmetry and the normal law")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List available experiments.
    List,
    /// Run experiments and write a JSON manifest.
    Run(RunArgs),
    /// Draw a sample from a distribution family and print it as CSV.
    Sample(SampleArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Experiment names (all when empty).
    pub names: Vec<String>,
    /// Comma-separated experiment names, merged with the positional ones.
    #[arg(long, value_delimiter = ',')]
    pub experiments: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Draws per test.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub replications: Option<usize>,
    /// Manifest path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for per-series CSV plot data.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// e.g. `gaussian:sigma=1`, `zero_inflated:p=0.3,base=laplace`.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 10)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

pub fn cmd_list() -> String {
    let width = REGISTRY.iter().map(|d| d.name.len()).max().unwrap_or(0);
    REGISTRY.iter().map(|d| format!("{:width$}  {}\n", d.name, d.summary)).collect()
}

impl RunArgs {
    pub fn config(&self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(m) = self.m {
            cfg.m = m;
        }
        if let Some(alpha) = self.alpha {
            cfg.alpha = alpha;
        }
        if let Some(r) = self.replications {
            cfg.replications = r;
        }
        cfg
    }

    fn selected(&self) -> Vec<String> {
        self.names.iter().chain(&self.experiments).filter(|s| !s.is_empty()).cloned().collect()
    }
}

/// Runs the selected experiments; returns the process exit code.
pub fn cmd_run(args: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cfg = args.config();
    if let Err(e) = cfg.validate() {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    let selected = args.selected();
    let names: Vec<&str> =
        if selected.is_empty() { experiments::names() } else { selected.iter().map(String::as_str).collect() };
    if let Some(bad) = names.iter().find(|n| experiments::find(n).is_none()) {
        let _ = writeln!(stderr, "error: unknown experiment `{bad}` (see `spherelab list`)");
        return EXIT_USAGE;
    }

    let started = Utc::now();
    let reports = match experiments::run_named(&names, &cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let manifest = RunManifest::new(cfg, reports, started, Utc::now());

    for r in &manifest.reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(stderr, "{verdict}  {}  ({} ms)", r.name, r.runtime_ms);
        if let Some(err) = &r.error {
            let _ = writeln!(stderr, "      error: {err}");
        }
        for c in r.criteria.iter().filter(|c| !c.holds) {
            let _ = writeln!(stderr, "      {} = {} outside {:?}", c.name, c.value, c.bound);
        }
    }

    let json = match manifest.to_json() {
        Ok(j) => j,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_IO;
        }
    };
    let written = match &args.out {
        Some(path) => fs::write(path, json + "\n"),
        None => writeln!(stdout, "{json}"),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write manifest: {e}");
        return EXIT_IO;
    }
    if let Some(dir) = &args.plot_dir {
        if let Err(e) = write_plot_csvs(dir, &manifest.reports) {
            let _ = writeln!(stderr, "error: cannot write plot data: {e}");
            return EXIT_IO;
        }
    }
    if manifest.all_passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn cmd_sample(args: &SampleArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let spec: DistributionSpec = match args.family.parse() {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let vs = match samplers::sample(&spec, args.m, args.n, &RandomSource::new(args.seed)) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(stdout);
    let header: Vec<String> = (1..=vs.n()).map(|j| format!("x{j}")).collect();
    let mut result = w.write_record(&header);
    for row in vs.rows() {
        if result.is_err() {
            break;
        }
        result = w.write_record(row.iter().map(f64::to_string));
    }
    match result.and_then(|_| w.flush().map_err(Into::into)) {
        Ok(()) => EXIT_PASS,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
    }
}

pub fn dispatch(cli: &Cli) -> i32 {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    match &cli.command {
        Command::List => {
            let _ = write!(out, "{}", cmd_list());
            EXIT_PASS
        }
        Command::Run(args) => cmd_run(args, &mut out, &mut err),
        Command::Sample(args) => cmd_sample(args, &mut out, &mut err),
    }
}
