//! Seeded Monte Carlo trials over a grid of percolation probabilities.
//!
//! Each trial realizes a degree sequence, samples a uniform simple digraph,
//! percolates it and records the largest strongly connected component.
//! Trial `(i, t)` draws only from the stream keyed by
//! `(master_seed, i, t)`, so results do not depend on thread count or
//! execution order.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::components::strongly_connected_components;
use crate::configmodel::{sample_simple, DEFAULT_MAX_ATTEMPTS};
use crate::degrees::{realize_sequence, DegreeDistribution, DegreeSequence};
use crate::error::{Error, Result};
use crate::io::DistributionSource;
use crate::percolation::{percolate, Mode};
use crate::rng::{derive_key, Stream};
use crate::theory::{gscc_fraction, TheoryPrediction};

/// Attempts per trial before it is recorded as failed.
pub const TRIAL_ATTEMPTS: usize = 3;

const FIXED_SEQUENCE_TAG: u64 = u64::MAX;

pub const CSV_HEADER: &str =
    "pi,trial,seed,n,m_before,m_after,deleted,scc_size,scc_fraction,attempts,elapsed_ms,status";

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub source: DistributionSource,
    pub n: usize,
    pub mode: Mode,
    pub pi_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub max_rejection_attempts: usize,
    /// Share one realized sequence across all trials.
    pub fixed_sequence: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Record wall-clock time per trial. Off by default so that output is
    /// byte-identical across runs.
    pub record_timing: bool,
    pub csv_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(source: DistributionSource, n: usize, mode: Mode, pi_grid: Vec<f64>) -> Self {
        ExperimentConfig {
            source,
            n,
            mode,
            pi_grid,
            trials: 1,
            master_seed: 0,
            max_rejection_attempts: DEFAULT_MAX_ATTEMPTS,
            fixed_sequence: false,
            threads: None,
            record_timing: false,
            csv_path: None,
            summary_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.pi_grid.is_empty() {
            return Err(Error::Config("pi grid is empty".into()));
        }
        if let Some(&pi) = self.pi_grid.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::Config(format!("pi {pi} outside (0, 1]")));
        }
        if self.max_rejection_attempts == 0 {
            return Err(Error::Config("max_attempts must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
        }
        match key {
            "dist" => self.source = value.parse()?,
            "n" => self.n = num(key, value)?,
            "mode" => self.mode = value.parse()?,
            "pi" | "pi_grid" => self.pi_grid = parse_pi_grid(value)?,
            "trials" => self.trials = num(key, value)?,
            "seed" => self.master_seed = num(key, value)?,
            "max_attempts" => self.max_rejection_attempts = num(key, value)?,
            "fixed_sequence" => self.fixed_sequence = num(key, value)?,
            "threads" => self.threads = Some(num(key, value)?),
            "timing" => self.record_timing = num(key, value)?,
            "csv" => self.csv_path = Some(PathBuf::from(value)),
            "summary" => self.summary_path = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Parses a `key = value` file. `dist`, `n` and `pi` are required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::new(DistributionSource::Const(0), 0, Mode::Bond, Vec::new());
        let mut seen_dist = false;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let key = key.trim();
            seen_dist |= key == "dist";
            cfg.set(key, value.trim())?;
        }
        if !seen_dist {
            return Err(Error::Config("missing dist".into()));
        }
        Ok(cfg)
    }
}

/// Comma-separated probabilities, or `start:stop:step` (inclusive).
pub fn parse_pi_grid(value: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("bad pi grid {value:?}"));
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    if parts.len() == 3 {
        let [start, stop, step]: [f64; 3] = [
            parts[0].parse().map_err(|_| bad())?,
            parts[1].parse().map_err(|_| bad())?,
            parts[2].parse().map_err(|_| bad())?,
        ];
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        // round to 12 digits so grid points print cleanly
        return Ok((0..=count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect());
    }
    value.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub pi: f64,
    pub trial_index: usize,
    /// Key of the stream the (last) attempt drew from.
    pub seed: u64,
    pub n: usize,
    pub m_before: Option<usize>,
    pub m_after: Option<usize>,
    pub deleted: Option<usize>,
    pub scc_size: Option<usize>,
    pub scc_fraction: Option<f64>,
    /// Configurations tried, summed over retries.
    pub rejection_attempts: usize,
    pub elapsed_ms: u64,
    pub status: TrialStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiSummary {
    pub pi: f64,
    pub trials_ok: usize,
    pub trials_failed: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub theory_c: Option<f64>,
    pub pi_c: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<PiSummary>,
}

struct TrialContext<'a> {
    config: &'a ExperimentConfig,
    dist: &'a DegreeDistribution,
    fixed: Option<&'a DegreeSequence>,
}

impl TrialContext<'_> {
    fn run(&self, pi_index: usize, trial_index: usize) -> Result<TrialRecord> {
        let cfg = self.config;
        let pi = cfg.pi_grid[pi_index];
        let start = Instant::now();
        let mut attempts = 0;
        let mut key = 0;
        for retry in 0..TRIAL_ATTEMPTS {
            let stream = if retry == 0 {
                Stream::keyed(&[cfg.master_seed, pi_index as u64, trial_index as u64])
            } else {
                Stream::keyed(&[cfg.master_seed, pi_index as u64, trial_index as u64, retry as u64])
            };
            key = stream.key();
            let realized;
            let seq = match self.fixed {
                Some(seq) => seq,
                None => match realize_sequence(self.dist, cfg.n, &mut stream.split(0)) {
                    Ok(s) => {
                        realized = s;
                        &realized
                    }
                    Err(Error::RepairFailed { .. }) => continue,
                    Err(e) => return Err(e),
                },
            };
            let sample = match sample_simple(seq, &mut stream.split(1), cfg.max_rejection_attempts) {
                Ok(s) => s,
                Err(Error::AttemptsExhausted { attempts: a }) => {
                    attempts += a;
                    continue;
                }
                Err(Error::NotGraphical) => continue,
                Err(e) => return Err(e),
            };
            attempts += sample.attempts;
            let outcome = percolate(&sample.graph, cfg.mode, pi, &mut stream.split(2))?;
            let partition = strongly_connected_components(&outcome.graph);
            let (_, size) = partition.largest().expect("n >= 1");
            return Ok(TrialRecord {
                pi,
                trial_index,
                seed: key,
                n: cfg.n,
                m_before: Some(sample.graph.m()),
                m_after: Some(outcome.surviving_edges),
                deleted: Some(outcome.deleted_vertices.len()),
                scc_size: Some(size),
                scc_fraction: Some(size as f64 / cfg.n as f64),
                rejection_attempts: attempts,
                elapsed_ms: self.elapsed(start),
                status: TrialStatus::Ok,
            });
        }
        Ok(TrialRecord {
            pi,
            trial_index,
            seed: key,
            n: cfg.n,
            m_before: None,
            m_after: None,
            deleted: None,
            scc_size: None,
            scc_fraction: None,
            rejection_attempts: attempts,
            elapsed_ms: self.elapsed(start),
            status: TrialStatus::Failed,
        })
    }

    fn elapsed(&self, start: Instant) -> u64 {
        if self.config.record_timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

/// Runs every `(π, trial)` pair and summarizes per π. Records come back
/// ordered by π-index, then trial index.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let dist = config.source.load()?;
    let fixed = if config.fixed_sequence {
        let mut stream = Stream::keyed(&[config.master_seed, FIXED_SEQUENCE_TAG]);
        Some(realize_sequence(&dist, config.n, &mut stream)?)
    } else {
        None
    };
    let ctx = TrialContext { config, dist: &dist, fixed: fixed.as_ref() };
    let jobs: Vec<(usize, usize)> =
        (0..config.pi_grid.len()).flat_map(|i| (0..config.trials).map(move |t| (i, t))).collect();
    let run_all = || -> Result<Vec<TrialRecord>> { jobs.par_iter().map(|&(i, t)| ctx.run(i, t)).collect() };
    let records = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(run_all)?,
        None => run_all()?,
    };
    let summary = summarize(&records, &dist, config.mode)?;
    Ok(ExperimentResult { records, summary })
}

/// Per-π statistics in order of first appearance. Failed trials are
/// counted but excluded from the statistics; `std` is the sample standard
/// deviation (0 for a single trial).
pub fn summarize(records: &[TrialRecord], dist: &DegreeDistribution, mode: Mode) -> Result<Vec<PiSummary>> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut order: Vec<f64> = Vec::new();
    for r in records {
        if !order.iter().any(|p| p.to_bits() == r.pi.to_bits()) {
            order.push(r.pi);
        }
    }
    Ok(order
        .into_iter()
        .map(|pi| {
            let group: Vec<&TrialRecord> =
                records.iter().filter(|r| r.pi.to_bits() == pi.to_bits()).collect();
            let values: Vec<f64> = group.iter().filter_map(|r| r.scc_fraction).collect();
            let failed = group.iter().filter(|r| r.status == TrialStatus::Failed).count();
            let theory: Option<TheoryPrediction> = gscc_fraction(dist, pi, mode.into()).ok();
            let (mean, std, min, max) = if values.is_empty() {
                (None, None, None, None)
            } else {
                // shifted by the first value, so identical inputs give std == 0 exactly
                let k = values.len() as f64;
                let shift = values[0];
                let mean_shifted = values.iter().map(|v| v - shift).sum::<f64>() / k;
                let mean = shift + mean_shifted;
                let std = if values.len() > 1 {
                    let ss: f64 = values.iter().map(|v| (v - shift - mean_shifted).powi(2)).sum();
                    (ss / (k - 1.0)).sqrt()
                } else {
                    0.0
                };
                let min = values.iter().copied().fold(f64::INFINITY, f64::min);
                let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (Some(mean), Some(std), Some(min), Some(max))
            };
            PiSummary {
                pi,
                trials_ok: values.len(),
                trials_failed: failed,
                mean,
                std,
                min,
                max,
                theory_c: theory.as_ref().map(TheoryPrediction::fraction),
                pi_c: theory.map(|t| t.pi_c),
            }
        })
        .collect())
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with the fixed column order in [`CSV_HEADER`].
pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(96 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let status = match r.status {
            TrialStatus::Ok => "ok",
            TrialStatus::Failed => "failed",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.pi,
            r.trial_index,
            r.seed,
            r.n,
            opt(r.m_before),
            opt(r.m_after),
            opt(r.deleted),
            opt(r.scc_size),
            opt(r.scc_fraction),
            r.rejection_attempts,
            r.elapsed_ms,
            status
        );
    }
    out
}

pub fn summary_to_json(summary: &[PiSummary]) -> String {
    serde_json::to_string_pretty(summary).expect("summary serializes")
}

/// Stream key used by trial `(pi_index, trial_index)` on its first attempt.
pub fn trial_key(master_seed: u64, pi_index: usize, trial_index: usize) -> u64 {
    derive_key(&[master_seed, pi_index as u64, trial_index as u64])
}
