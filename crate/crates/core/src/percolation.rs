//! Bond and site percolation on a [`Digraph`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::configmodel::Digraph;
use crate::degrees::DegreeSequence;
use crate::error::{Error, Result};
use crate::rng::Stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bond,
    Site,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Bond => "bond",
            Mode::Site => "site",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bond" => Ok(Mode::Bond),
            "site" => Ok(Mode::Site),
            other => Err(Error::Config(format!("unknown percolation mode {other:?}"))),
        }
    }
}

pub(crate) fn check_pi(pi: f64) -> Result<()> {
    if pi > 0.0 && pi <= 1.0 {
        Ok(())
    } else {
        Err(Error::PiOutOfRange(pi))
    }
}

#[derive(Clone, Debug)]
pub struct PercolationOutcome {
    pub graph: Digraph,
    pub mode: Mode,
    pub pi: f64,
    pub surviving_edges: usize,
    /// Deleted vertices in increasing order; always empty in bond mode.
    pub deleted_vertices: Vec<usize>,
    induced: DegreeSequence,
}

impl PercolationOutcome {
    fn new(graph: Digraph, mode: Mode, pi: f64, deleted_vertices: Vec<usize>) -> Self {
        let induced = graph.degree_sequence();
        PercolationOutcome { surviving_edges: graph.m(), graph, mode, pi, deleted_vertices, induced }
    }

    /// Degree sequence of the percolated graph.
    pub fn induced_degree_sequence(&self) -> &DegreeSequence {
        &self.induced
    }
}

/// Keeps each edge (parallel copies included) independently with
/// probability `pi`. Draws exactly one uniform per edge, in edge order.
pub fn bond_percolate(g: &Digraph, pi: f64, rng: &mut Stream) -> Result<PercolationOutcome> {
    check_pi(pi)?;
    let kept: Vec<_> = g.edges().iter().copied().filter(|_| rng.uniform() < pi).collect();
    // a subset of a simple edge list stays simple
    let graph =
        if g.is_simple() { Digraph::from_parts(g.n(), kept, true) } else { Digraph::new(g.n(), kept)? };
    Ok(PercolationOutcome::new(graph, Mode::Bond, pi, Vec::new()))
}

/// Deletes each vertex independently with probability `1 − pi`, removing
/// every incident edge. Deleted vertices keep their ids with degree (0, 0).
/// Draws exactly one uniform per vertex, in vertex order.
pub fn site_percolate(g: &Digraph, pi: f64, rng: &mut Stream) -> Result<PercolationOutcome> {
    check_pi(pi)?;
    let alive: Vec<bool> = (0..g.n()).map(|_| rng.uniform() < pi).collect();
    let deleted = alive.iter().enumerate().filter_map(|(v, &a)| (!a).then_some(v)).collect();
    let kept: Vec<_> = g.edges().iter().copied().filter(|&(u, v)| alive[u] && alive[v]).collect();
    let graph =
        if g.is_simple() { Digraph::from_parts(g.n(), kept, true) } else { Digraph::new(g.n(), kept)? };
    Ok(PercolationOutcome::new(graph, Mode::Site, pi, deleted))
}

pub fn percolate(g: &Digraph, mode: Mode, pi: f64, rng: &mut Stream) -> Result<PercolationOutcome> {
    match mode {
        Mode::Bond => bond_percolate(g, pi, rng),
        Mode::Site => site_percolate(g, pi, rng),
    }
}
