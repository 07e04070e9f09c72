//! Directed configuration model: uniform stub matchings, rejection to simple
//! digraphs, and the exact matching probability of a multigraph.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::degrees::{ln_factorial, DegreeDistribution, DegreeSequence};
use crate::error::{Error, Result};
use crate::rng::Stream;

/// Default cap on rejection attempts in [`sample_simple`].
pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;

/// Largest edge count for which [`matching_probability`] is exact.
pub const EXACT_MAX_EDGES: usize = 20;

/// A directed multigraph on vertices `0..n` stored as a flat edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    simple: bool,
}

impl Digraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
        }
        let simple = check_simple(&edges);
        Ok(Digraph { n, edges, simple })
    }

    pub(crate) fn from_parts(n: usize, edges: Vec<(usize, usize)>, simple: bool) -> Self {
        debug_assert_eq!(simple, check_simple(&edges));
        Digraph { n, edges, simple }
    }

    pub fn empty(n: usize) -> Self {
        Digraph { n, edges: Vec::new(), simple: true }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// No self-loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// Edge multiplicities `Υ_{i,j}`.
    pub fn multiplicities(&self) -> HashMap<(usize, usize), usize> {
        let mut mult = HashMap::with_capacity(self.edges.len());
        for &e in &self.edges {
            *mult.entry(e).or_insert(0) += 1;
        }
        mult
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut pairs = vec![(0usize, 0usize); self.n];
        for &(u, v) in &self.edges {
            pairs[u].1 += 1;
            pairs[v].0 += 1;
        }
        DegreeSequence::new(pairs)
    }

    /// Edge list sorted lexicographically; two multigraphs are equal iff
    /// their canonical edge lists are equal.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

fn check_simple(edges: &[(usize, usize)]) -> bool {
    if edges.iter().any(|&(u, v)| u == v) {
        return false;
    }
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Owners of the in-stubs, grouped by vertex in increasing order.
fn in_stub_owners(seq: &DegreeSequence) -> Vec<usize> {
    let mut owners = Vec::with_capacity(seq.m());
    for (v, &(d_in, _)) in seq.pairs().iter().enumerate() {
        owners.extend(std::iter::repeat_n(v, d_in));
    }
    owners
}

fn out_stub_owners(seq: &DegreeSequence) -> Vec<usize> {
    let mut owners = Vec::with_capacity(seq.out_sum());
    for (v, &(_, d_out)) in seq.pairs().iter().enumerate() {
        owners.extend(std::iter::repeat_n(v, d_out));
    }
    owners
}

/// Multigraph induced by a uniformly random perfect matching of in-stubs
/// with out-stubs (Fisher–Yates shuffle of the out-stubs against the
/// in-stubs in canonical order).
pub fn sample_configuration(seq: &DegreeSequence, rng: &mut Stream) -> Result<Digraph> {
    seq.require_valid()?;
    let targets = in_stub_owners(seq);
    let mut sources = out_stub_owners(seq);
    let m = sources.len();
    for i in 0..m {
        let j = i + rng.below(m - i);
        sources.swap(i, j);
    }
    let edges: Vec<_> = sources.into_iter().zip(targets).collect();
    Digraph::new(seq.n(), edges)
}

/// Probability of a multigraph under the configuration model:
/// `(1/m!) · ∏ d⁻! ∏ d⁺! / ∏ Υ!`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Probability {
    Exact(Ratio<u128>),
    Approx(f64),
}

impl Probability {
    pub fn to_f64(self) -> f64 {
        match self {
            Probability::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Probability::Approx(p) => p,
        }
    }
}

fn factorial(k: usize) -> u128 {
    (2..=k as u128).product()
}

pub fn matching_probability(g: &Digraph, seq: &DegreeSequence) -> Result<Probability> {
    seq.require_valid()?;
    if g.degree_sequence() != *seq {
        return Err(Error::DegreeMismatch);
    }
    let m = seq.m();
    let mult = g.multiplicities();
    if m <= EXACT_MAX_EDGES {
        let mut numer: u128 = 1;
        for &(i, o) in seq.pairs() {
            numer *= factorial(i) * factorial(o);
        }
        let mut denom = factorial(m);
        for &u in mult.values() {
            denom *= factorial(u);
        }
        Ok(Probability::Exact(Ratio::new(numer, denom)))
    } else {
        let mut log_p = -ln_factorial(m);
        for &(i, o) in seq.pairs() {
            log_p += ln_factorial(i) + ln_factorial(o);
        }
        for &u in mult.values() {
            log_p -= ln_factorial(u);
        }
        Ok(Probability::Approx(log_p.exp()))
    }
}

/// A simple digraph drawn by rejection, with the number of configurations
/// tried (including the accepted one).
#[derive(Clone, Debug)]
pub struct SimpleSample {
    pub graph: Digraph,
    pub attempts: usize,
}

/// Uniform simple digraph with degree sequence `seq`, by rejecting
/// non-simple configurations.
///
/// A matching is abandoned as soon as a self-loop or a repeated edge
/// appears; since the completed matching would be rejected anyway, the
/// accepted graphs are still uniform over simple realizations.
pub fn sample_simple(seq: &DegreeSequence, rng: &mut Stream, max_attempts: usize) -> Result<SimpleSample> {
    if !seq.is_graphical()? {
        return Err(Error::NotGraphical);
    }
    let mut sampler = SimpleSampler::new(seq);
    for attempt in 1..=max_attempts {
        if sampler.try_match(rng) {
            return Ok(SimpleSample { graph: sampler.into_graph(), attempts: attempt });
        }
    }
    Err(Error::AttemptsExhausted { attempts: max_attempts })
}

/// Reusable state for repeated simple-matching attempts on one sequence.
pub struct SimpleSampler {
    n: usize,
    targets: Vec<usize>,
    sources: Vec<usize>,
    seen: Vec<u64>,
    stamp: u64,
}

impl SimpleSampler {
    pub fn new(seq: &DegreeSequence) -> Self {
        SimpleSampler {
            n: seq.n(),
            targets: in_stub_owners(seq),
            sources: out_stub_owners(seq),
            seen: vec![0; seq.n()],
            stamp: 0,
        }
    }

    /// One matching attempt; `true` iff it produced a simple digraph.
    pub fn try_match(&mut self, rng: &mut Stream) -> bool {
        let m = self.sources.len();
        let mut current = usize::MAX;
        for i in 0..m {
            let j = i + rng.below(m - i);
            self.sources.swap(i, j);
            let (src, tgt) = (self.sources[i], self.targets[i]);
            if src == tgt {
                return false;
            }
            if tgt != current {
                current = tgt;
                self.stamp += 1;
            }
            if self.seen[src] == self.stamp {
                return false;
            }
            self.seen[src] = self.stamp;
        }
        true
    }

    /// Graph from the most recent (successful) matching.
    pub fn into_graph(self) -> Digraph {
        let edges = self.sources.into_iter().zip(self.targets).collect();
        Digraph::from_parts(self.n, edges, true)
    }
}

/// Which closed form to use in [`simple_probability`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimpleFormula {
    /// `exp(−μ₁₁/μ − (μ₂₀−μ)(μ₀₂−μ)/μ)`
    AsPrinted,
    /// `exp(−μ₁₁/μ − (μ₂₀−μ)(μ₀₂−μ)/(2μ²))`
    Standard,
}

/// Asymptotic probability that the configuration model yields a simple graph.
pub fn simple_probability(dist: &DegreeDistribution, formula: SimpleFormula) -> Result<f64> {
    let mu = dist.mean();
    if mu <= 0.0 {
        return Err(Error::ZeroMeanDegree);
    }
    let loops = dist.mu11() / mu;
    let pairs = (dist.mu20() - mu) * (dist.mu02() - mu);
    let exponent = match formula {
        SimpleFormula::AsPrinted => loops + pairs / mu,
        SimpleFormula::Standard => loops + pairs / (2.0 * mu * mu),
    };
    Ok((-exponent).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(p: &[(usize, usize)]) -> DegreeSequence {
        DegreeSequence::new(p.to_vec())
    }

    #[test]
    fn is_simple_examples() {
        assert!(Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap().is_simple());
        assert!(!Digraph::new(2, vec![(0, 0), (0, 1)]).unwrap().is_simple());
        assert!(!Digraph::new(2, vec![(0, 1), (0, 1)]).unwrap().is_simple());
        assert!(Digraph::new(1, vec![(0, 1)]).is_err());
    }

    #[test]
    fn configuration_on_empty_sequence() {
        let g = sample_configuration(&seq(&[(0, 0)]), &mut Stream::new(0)).unwrap();
        assert_eq!(g.m(), 0);
        let p = matching_probability(&g, &seq(&[(0, 0)])).unwrap();
        assert_eq!(p, Probability::Exact(Ratio::from_integer(1)));
    }

    #[test]
    fn doubled_self_loop_has_probability_one() {
        let s = seq(&[(2, 2)]);
        let g = sample_configuration(&s, &mut Stream::new(3)).unwrap();
        assert_eq!(g.edges(), &[(0, 0), (0, 0)]);
        assert_eq!(matching_probability(&g, &s).unwrap(), Probability::Exact(Ratio::from_integer(1)));
    }

    #[test]
    fn two_cycle_has_probability_half() {
        let s = seq(&[(1, 1), (1, 1)]);
        let cycle = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let loops = Digraph::new(2, vec![(0, 0), (1, 1)]).unwrap();
        assert_eq!(matching_probability(&cycle, &s).unwrap(), Probability::Exact(Ratio::new(1, 2)));
        assert_eq!(matching_probability(&loops, &s).unwrap(), Probability::Exact(Ratio::new(1, 2)));
    }

    #[test]
    fn matching_probability_rejects_mismatch() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        assert!(matches!(matching_probability(&g, &seq(&[(1, 1), (1, 1)])), Err(Error::DegreeMismatch)));
    }

    #[test]
    fn approximate_branch_agrees_with_exact_formula() {
        // 21 parallel edges 0 -> 1: probability (1/21!)·21!·21!/21! = 1
        let s = seq(&[(0, 21), (21, 0)]);
        let g = Digraph::new(2, vec![(0, 1); 21]).unwrap();
        match matching_probability(&g, &s).unwrap() {
            Probability::Approx(p) => assert!((p - 1.0).abs() < 1e-9),
            other => panic!("expected approximate branch, got {other:?}"),
        }
    }

    #[test]
    fn sample_simple_two_cycle_always() {
        let s = seq(&[(1, 1), (1, 1)]);
        let mut rng = Stream::new(9);
        for _ in 0..200 {
            let out = sample_simple(&s, &mut rng, DEFAULT_MAX_ATTEMPTS).unwrap();
            assert_eq!(out.graph.canonical_edges(), vec![(0, 1), (1, 0)]);
        }
    }

    #[test]
    fn sample_simple_rejects_non_graphical() {
        let err = sample_simple(&seq(&[(1, 1)]), &mut Stream::new(0), 10).unwrap_err();
        assert!(matches!(err, Error::NotGraphical));
    }

    #[test]
    fn sample_simple_reports_exhaustion() {
        // graphical, but acceptance is tiny with a single attempt allowed on many seeds
        let s = DegreeSequence::new(vec![(3, 3); 5]);
        let exhausted = (0..50).any(|seed| {
            matches!(
                sample_simple(&s, &mut Stream::new(seed), 1),
                Err(Error::AttemptsExhausted { attempts: 1 })
            )
        });
        assert!(exhausted);
    }

    #[test]
    fn simple_probability_examples() {
        let d = DegreeDistribution::constant(1).unwrap();
        for f in [SimpleFormula::AsPrinted, SimpleFormula::Standard] {
            assert!((simple_probability(&d, f).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        }
        let p = DegreeDistribution::poisson(2.0).unwrap();
        let printed = simple_probability(&p, SimpleFormula::AsPrinted).unwrap();
        let standard = simple_probability(&p, SimpleFormula::Standard).unwrap();
        assert!((printed / (-10.0f64).exp() - 1.0).abs() < 1e-8);
        assert!((standard / (-4.0f64).exp() - 1.0).abs() < 1e-8);
        let zero = DegreeDistribution::constant(0).unwrap();
        assert!(matches!(simple_probability(&zero, SimpleFormula::Standard), Err(Error::ZeroMeanDegree)));
    }
}
