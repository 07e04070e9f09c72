//! Plain-text file formats: degree distributions, degree sequences, edge
//! lists and component labels. All are line oriented with `#` comments.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::components::SccPartition;
use crate::configmodel::Digraph;
use crate::degrees::{DegreeDistribution, DegreeSequence};
use crate::error::{Error, Result};

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), line, msg: msg.into() }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn field<T: FromStr>(path: &str, line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(path, line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(path, line, format!("bad {what} {tok:?}")))
}

/// `j k p` per line; probabilities must sum to 1 ± 1e-6.
pub fn parse_distribution(text: &str, path: &str) -> Result<DegreeDistribution> {
    let mut entries = Vec::new();
    for (ln, line) in data_lines(text) {
        let mut it = line.split_whitespace();
        let j: usize = field(path, ln, it.next(), "in-degree")?;
        let k: usize = field(path, ln, it.next(), "out-degree")?;
        let p: f64 = field(path, ln, it.next(), "probability")?;
        if it.next().is_some() {
            return Err(parse_err(path, ln, "expected three fields"));
        }
        entries.push(((j, k), p));
    }
    DegreeDistribution::from_probabilities(entries)
}

pub fn read_distribution(path: &Path) -> Result<DegreeDistribution> {
    parse_distribution(&fs::read_to_string(path)?, &path.display().to_string())
}

pub fn write_distribution(dist: &DegreeDistribution) -> String {
    let mut out = String::new();
    for ((j, k), p) in dist.iter() {
        let _ = writeln!(out, "{j} {k} {p}");
    }
    out
}

/// `d_in d_out` per line.
pub fn parse_sequence(text: &str, path: &str) -> Result<DegreeSequence> {
    let mut pairs = Vec::new();
    for (ln, line) in data_lines(text) {
        let mut it = line.split_whitespace();
        let i: usize = field(path, ln, it.next(), "in-degree")?;
        let o: usize = field(path, ln, it.next(), "out-degree")?;
        if it.next().is_some() {
            return Err(parse_err(path, ln, "expected two fields"));
        }
        pairs.push((i, o));
    }
    Ok(DegreeSequence::new(pairs))
}

pub fn read_sequence(path: &Path) -> Result<DegreeSequence> {
    parse_sequence(&fs::read_to_string(path)?, &path.display().to_string())
}

pub fn write_sequence(seq: &DegreeSequence) -> String {
    let mut out = String::new();
    for &(i, o) in seq.pairs() {
        let _ = writeln!(out, "{i} {o}");
    }
    out
}

/// Header metadata written as `# key=value` comments above an edge list.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EdgeListHeader {
    pub seed: Option<u64>,
    /// Extra `key=value` pairs, e.g. `mode=site`, `pi=0.5`.
    pub extra: Vec<(String, String)>,
    /// Deleted vertices, written as a `# deleted ...` line.
    pub deleted: Option<Vec<usize>>,
}

pub fn write_edge_list(g: &Digraph, header: &EdgeListHeader) -> String {
    let mut out = String::with_capacity(16 * g.m() + 64);
    let _ = write!(out, "# n={} m={}", g.n(), g.m());
    if let Some(seed) = header.seed {
        let _ = write!(out, " seed={seed}");
    }
    for (k, v) in &header.extra {
        let _ = write!(out, " {k}={v}");
    }
    out.push('\n');
    if let Some(deleted) = &header.deleted {
        out.push_str("# deleted");
        for v in deleted {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// `source target` per line, 0-based. The vertex count comes from an
/// `n=` token in a header comment when present, otherwise from the largest id.
pub fn parse_edge_list(text: &str, path: &str) -> Result<Digraph> {
    let mut n: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let Some(comment) = raw.trim_start().strip_prefix('#') else { continue };
        for tok in comment.split_whitespace() {
            if let Some(v) = tok.strip_prefix("n=") {
                n = Some(v.parse().map_err(|_| parse_err(path, i + 1, format!("bad vertex count {v:?}")))?);
            }
        }
        if n.is_some() {
            break;
        }
    }
    let mut edges = Vec::new();
    for (ln, line) in data_lines(text) {
        let mut it = line.split_whitespace();
        let u: usize = field(path, ln, it.next(), "source")?;
        let v: usize = field(path, ln, it.next(), "target")?;
        if it.next().is_some() {
            return Err(parse_err(path, ln, "expected two fields"));
        }
        edges.push((u, v));
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Digraph::new(n, edges)
}

pub fn read_edge_list(path: &Path) -> Result<Digraph> {
    parse_edge_list(&fs::read_to_string(path)?, &path.display().to_string())
}

/// `vertex label` per line.
pub fn write_component_labels(p: &SccPartition) -> String {
    let mut out = String::new();
    for (v, c) in p.component_id().iter().enumerate() {
        let _ = writeln!(out, "{v} {c}");
    }
    out
}

/// Where a degree distribution comes from: a built-in family or a file.
#[derive(Clone, Debug, PartialEq)]
pub enum DistributionSource {
    /// Independent in/out Poisson(λ).
    Poisson(f64),
    /// Point mass at `(d, d)`.
    Const(usize),
    /// Independent in/out geometric(p) on `{0, 1, …}`.
    Geometric(f64),
    File(PathBuf),
}

impl DistributionSource {
    pub fn load(&self) -> Result<DegreeDistribution> {
        match self {
            DistributionSource::Poisson(l) => DegreeDistribution::poisson(*l),
            DistributionSource::Const(d) => DegreeDistribution::constant(*d),
            DistributionSource::Geometric(p) => DegreeDistribution::geometric(*p),
            DistributionSource::File(path) => read_distribution(path),
        }
    }
}

impl FromStr for DistributionSource {
    type Err = Error;

    /// `poisson:<λ>`, `const:<d>`, `geometric:<p>` or `file:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad distribution {s:?}"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "poisson" => arg.parse().map(DistributionSource::Poisson).map_err(|_| bad()),
            "const" => arg.parse().map(DistributionSource::Const).map_err(|_| bad()),
            "geometric" => arg.parse().map(DistributionSource::Geometric).map_err(|_| bad()),
            "file" if !arg.is_empty() => Ok(DistributionSource::File(PathBuf::from(arg))),
            _ => Err(bad()),
        }
    }
}
