//! `dipercolation` command-line tool.
//!
//! Exit status: 0 on success, 1 on a usage error, 2 on a runtime error.
//! Machine-readable output goes to stdout or the named file; diagnostics go
//! to stderr as a single line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dipercolation::experiments::{records_to_csv, summary_to_json};
use dipercolation::io::{
    parse_edge_list, parse_sequence, write_component_labels, write_edge_list, EdgeListHeader,
};
use dipercolation::{
    gscc_fraction, percolate, realize_sequence, run_experiment, sample_simple, strongly_connected_components,
    DegreeSequence, Digraph, DistributionSource, ExperimentConfig, Mode, Stream, TheoryMode,
    DEFAULT_MAX_ATTEMPTS,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "dipercolation", version, about = "Percolation on directed configuration-model graphs")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true, value_name = "T")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the predicted giant strongly connected component as JSON.
    Theory {
        #[arg(long, value_name = "SOURCE")]
        dist: DistributionSource,
        #[arg(long, default_value_t = 1.0)]
        pi: f64,
        #[arg(long, default_value = "bond")]
        mode: TheoryMode,
    },
    /// Sample a uniform simple digraph and write its edge list.
    Sample {
        #[arg(long, value_name = "SOURCE", required_unless_present = "seq", conflicts_with = "seq")]
        dist: Option<DistributionSource>,
        /// Degree sequence file, used instead of `--dist`.
        #[arg(long, value_name = "FILE")]
        seq: Option<PathBuf>,
        /// Vertex count when sampling from `--dist`.
        #[arg(long, required_unless_present = "seq")]
        n: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Percolate an edge list and write the surviving graph.
    Percolate {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[arg(long)]
        pi: f64,
        #[arg(long, default_value = "bond")]
        mode: Mode,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Report strongly connected component sizes.
    Scc {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Also write `vertex label` lines to this file.
        #[arg(long, value_name = "FILE")]
        labels: Option<PathBuf>,
    },
    /// Run a Monte Carlo experiment from a `key = value` config file.
    Experiment {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Override a config entry; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Share one realized degree sequence across all trials.
        #[arg(long)]
        fixed_sequence: bool,
        /// Trial CSV destination (stdout when absent).
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        /// Per-π summary JSON destination.
        #[arg(long, value_name = "FILE")]
        summary: Option<PathBuf>,
    },
    /// Validity, graphicality and properness of a degree sequence file.
    Check {
        #[arg(long, value_name = "FILE")]
        seq: PathBuf,
    },
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Runtime(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn read_sequence(path: &Path) -> std::result::Result<DegreeSequence, Failure> {
    Ok(parse_sequence(&read_text(path)?, &path.display().to_string())?)
}

fn read_edge_list(path: &Path) -> std::result::Result<Digraph, Failure> {
    Ok(parse_edge_list(&read_text(path)?, &path.display().to_string())?)
}

fn emit(text: &str, dest: Option<&Path>) -> Outcome {
    match dest {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn theory(dist: &DistributionSource, pi: f64, mode: TheoryMode) -> Outcome {
    let prediction = gscc_fraction(&dist.load()?, pi, mode)?;
    let mut text = serde_json::to_string_pretty(&prediction)?;
    text.push('\n');
    emit(&text, None)
}

fn sample(
    dist: Option<&DistributionSource>,
    seq_path: Option<&Path>,
    n: Option<usize>,
    seed: u64,
    max_attempts: usize,
    out: Option<&Path>,
) -> Outcome {
    let stream = Stream::keyed(&[seed]);
    let seq: DegreeSequence = match (seq_path, dist) {
        (Some(path), _) => read_sequence(path)?,
        (None, Some(dist)) => {
            let n = n.ok_or_else(|| Failure::Runtime("--n is required with --dist".into()))?;
            realize_sequence(&dist.load()?, n, &mut stream.split(0))?
        }
        (None, None) => return Err(Failure::Runtime("one of --dist or --seq is required".into())),
    };
    let sampled = sample_simple(&seq, &mut stream.split(1), max_attempts)?;
    let header = EdgeListHeader {
        seed: Some(seed),
        extra: vec![("attempts".into(), sampled.attempts.to_string())],
        deleted: None,
    };
    emit(&write_edge_list(&sampled.graph, &header), out)
}

fn percolate_cmd(graph: &Path, pi: f64, mode: Mode, seed: u64, out: Option<&Path>) -> Outcome {
    let g = read_edge_list(graph)?;
    let outcome = percolate(&g, mode, pi, &mut Stream::keyed(&[seed]))?;
    let header = EdgeListHeader {
        seed: Some(seed),
        extra: vec![("mode".into(), mode.to_string()), ("pi".into(), pi.to_string())],
        deleted: (mode == Mode::Site).then(|| outcome.deleted_vertices.clone()),
    };
    emit(&write_edge_list(&outcome.graph, &header), out)
}

fn scc(graph: &Path, labels: Option<&Path>) -> Outcome {
    let g = read_edge_list(graph)?;
    let partition = strongly_connected_components(&g);
    let largest = partition.largest().map_or(0, |(_, size)| size);
    emit(&format!("{} component(s); largest = {largest}\n", partition.count()), None)?;
    if let Some(path) = labels {
        emit(&write_component_labels(&partition), Some(path))?;
    }
    Ok(())
}

fn experiment(
    config: &Path,
    overrides: &[String],
    seed: Option<u64>,
    fixed_sequence: bool,
    csv: Option<PathBuf>,
    summary: Option<PathBuf>,
    threads: Option<usize>,
) -> Outcome {
    let text = read_text(config)?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    for entry in overrides {
        let (key, value) =
            entry.split_once('=').ok_or_else(|| Failure::Runtime(format!("bad override {entry:?}")))?;
        cfg.set(key.trim(), value.trim())?;
    }
    if let Some(seed) = seed {
        cfg.master_seed = seed;
    }
    cfg.fixed_sequence |= fixed_sequence;
    if csv.is_some() {
        cfg.csv_path = csv;
    }
    if summary.is_some() {
        cfg.summary_path = summary;
    }
    if threads.is_some() {
        cfg.threads = threads;
    }
    let result = run_experiment(&cfg)?;
    emit(&records_to_csv(&result.records), cfg.csv_path.as_deref())?;
    if let Some(path) = &cfg.summary_path {
        let mut json = summary_to_json(&result.summary);
        json.push('\n');
        emit(&json, Some(path))?;
    }
    Ok(())
}

fn check(path: &Path) -> Outcome {
    let seq = read_sequence(path)?;
    let validity = seq.validate();
    let report = if validity.valid {
        json!({
            "n": seq.n(),
            "valid": true,
            "in_sum": validity.in_sum,
            "out_sum": validity.out_sum,
            "graphical": seq.is_graphical()?,
            "properness": seq.properness_report()?,
        })
    } else {
        json!({
            "n": seq.n(),
            "valid": false,
            "in_sum": validity.in_sum,
            "out_sum": validity.out_sum,
            "graphical": null,
            "properness": null,
        })
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(&text, None)?;
    if validity.valid {
        Ok(())
    } else {
        Err(Failure::Runtime(format!(
            "invalid degree sequence: in-degree sum {} != out-degree sum {}",
            validity.in_sum, validity.out_sum
        )))
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Runtime("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match cli.command {
        Command::Theory { dist, pi, mode } => theory(&dist, pi, mode),
        Command::Sample { dist, seq, n, seed, max_attempts, out } => {
            sample(dist.as_ref(), seq.as_deref(), n, seed, max_attempts, out.out.as_deref())
        }
        Command::Percolate { graph, pi, mode, seed, out } => {
            percolate_cmd(&graph, pi, mode, seed, out.out.as_deref())
        }
        Command::Scc { graph, labels } => scc(&graph, labels.as_deref()),
        Command::Experiment { config, overrides, seed, fixed_sequence, csv, summary } => {
            experiment(&config, &overrides, seed, fixed_sequence, csv, summary, cli.threads)
        }
        Command::Check { seq } => check(&seq),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Runtime(msg)) => {
            eprintln!("dipercolation: {msg}");
            ExitCode::from(2)
        }
    }
}
