//! Degree sequences, bivariate degree distributions and the finite-n
//! diagnostics (validity, graphicality, properness) defined on them.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Tail mass below which analytic families are cut off.
pub const TRUNCATION_TAIL: f64 = 1e-12;

const NORMALIZATION_TOL: f64 = 1e-9;
const BALANCE_TOL: f64 = 1e-9;

/// Per-vertex `(in_degree, out_degree)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pairs: Vec<(usize, usize)>,
    in_sum: usize,
    out_sum: usize,
    d_max: usize,
}

/// Outcome of [`DegreeSequence::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub valid: bool,
    pub in_sum: usize,
    pub out_sum: usize,
}

impl DegreeSequence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        let mut in_sum = 0;
        let mut out_sum = 0;
        let mut d_max = 0;
        for &(i, o) in &pairs {
            in_sum += i;
            out_sum += o;
            d_max = d_max.max(i).max(o);
        }
        DegreeSequence { pairs, in_sum, out_sum, d_max }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    /// Number of edges, i.e. the in-degree sum.
    pub fn m(&self) -> usize {
        self.in_sum
    }

    pub fn in_sum(&self) -> usize {
        self.in_sum
    }

    pub fn out_sum(&self) -> usize {
        self.out_sum
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn validate(&self) -> Validity {
        Validity { valid: self.in_sum == self.out_sum, in_sum: self.in_sum, out_sum: self.out_sum }
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        if self.in_sum == self.out_sum {
            Ok(())
        } else {
            Err(Error::InvalidSequence { in_sum: self.in_sum, out_sum: self.out_sum })
        }
    }

    /// Whether some simple digraph (no self-loops, no parallel edges)
    /// realizes this sequence.
    ///
    /// Fulkerson–Chen–Anstee: with pairs ordered by in-degree descending
    /// (ties by out-degree descending), for every `k`
    /// `Σ_{i≤k} in_i ≤ Σ_{i≤k} min(out_i, k−1) + Σ_{i>k} min(out_i, k)`.
    /// The right-hand side is evaluated as `Σ_i min(out_i, k) − #{i ≤ k : out_i ≥ k}`
    /// so the whole check runs in `O(n log n)`.
    pub fn is_graphical(&self) -> Result<bool> {
        self.require_valid()?;
        let n = self.n();
        if n == 0 {
            return Ok(true);
        }
        if self.d_max >= n {
            return Ok(false);
        }
        let mut sorted = self.pairs.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));

        // at_least[t] = #{i : out_i >= t}
        let mut at_least = vec![0usize; n + 2];
        for &(_, o) in &sorted {
            at_least[o] += 1;
        }
        for t in (0..=n).rev() {
            at_least[t] += at_least[t + 1];
        }

        let mut prefix_out = Fenwick::new(n + 1);
        let mut lhs = 0usize;
        let mut sum_min_all = 0usize;
        for k in 1..=n {
            let (in_k, out_k) = sorted[k - 1];
            lhs += in_k;
            prefix_out.add(out_k, 1);
            sum_min_all += at_least[k];
            let prefix_at_least_k = k - prefix_out.prefix(k - 1);
            let rhs = sum_min_all - prefix_at_least_k;
            if lhs > rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Empirical distribution `p_{j,k} = N_{j,k}/n` together with the counts.
    pub fn empirical_distribution(&self) -> Result<EmpiricalDistribution> {
        if self.pairs.is_empty() {
            return Err(Error::EmptySequence);
        }
        let counts = self.counts();
        let n = self.n() as f64;
        let distribution =
            DegreeDistribution::from_weights(counts.iter().map(|(&jk, &c)| (jk, c as f64 / n)))?;
        Ok(EmpiricalDistribution { distribution, counts })
    }

    /// `N_{j,k}`: number of vertices with in-degree `j` and out-degree `k`.
    pub fn counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut counts = BTreeMap::new();
        for &p in &self.pairs {
            *counts.entry(p).or_insert(0) += 1;
        }
        counts
    }

    /// Finite-n diagnostics for the properness conditions. Never fails on
    /// a valid sequence; the flags are informational.
    pub fn properness_report(&self) -> Result<PropernessReport> {
        self.require_valid()?;
        let n = self.n();
        let counts = self.counts();
        let mut moments = [[0.0f64; 3]; 3];
        let mut s21 = 0.0;
        let mut s12 = 0.0;
        for (&(j, k), &c) in &counts {
            let (jf, kf, cf) = (j as f64, k as f64, c as f64);
            for (i, row) in moments.iter_mut().enumerate() {
                for (l, cell) in row.iter_mut().enumerate() {
                    *cell += jf.powi(i as i32) * kf.powi(l as i32) * cf;
                }
            }
            s21 += jf * jf * kf * cf;
            s12 += jf * kf * kf * cf;
        }
        if n > 0 {
            for row in moments.iter_mut() {
                for cell in row.iter_mut() {
                    *cell /= n as f64;
                }
            }
        }
        // μ(n)·n = m
        let m = self.m() as f64;
        let rho = if m > 0.0 { s21.max(s12) / m } else { 0.0 };
        let d_max_bound = if n >= 2 {
            let nf = n as f64;
            nf.powf(1.0 / 12.0) / nf.ln()
        } else {
            f64::INFINITY
        };
        Ok(PropernessReport {
            n,
            d_max: self.d_max,
            d_max_bound,
            rho,
            empirical_moments: moments,
            valid: true,
            graphical: self.is_graphical()?,
            d_max_ok: n >= 2 && (self.d_max as f64) <= d_max_bound,
            rho_vs_dmax_ratio: (self.d_max > 0).then(|| rho / self.d_max as f64),
        })
    }
}

/// Binary indexed tree over `0..len` counting inserted values.
struct Fenwick {
    tree: Vec<usize>,
}

impl Fenwick {
    fn new(len: usize) -> Self {
        Fenwick { tree: vec![0; len + 1] }
    }

    fn add(&mut self, idx: usize, delta: usize) {
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over values `0..=idx`.
    fn prefix(&self, idx: usize) -> usize {
        let mut i = (idx + 1).min(self.tree.len() - 1);
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct EmpiricalDistribution {
    pub distribution: DegreeDistribution,
    pub counts: BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropernessReport {
    pub n: usize,
    pub d_max: usize,
    /// `n^{1/12} / ln n`; infinite for `n < 2`.
    pub d_max_bound: f64,
    pub rho: f64,
    /// `empirical_moments[i][l] = μ_il(n)`.
    pub empirical_moments: [[f64; 3]; 3],
    pub valid: bool,
    pub graphical: bool,
    pub d_max_ok: bool,
    pub rho_vs_dmax_ratio: Option<f64>,
}

/// Sparse joint probability table `p_{j,k}` over (in-degree, out-degree).
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeDistribution {
    support: BTreeMap<(usize, usize), f64>,
    moments: [[f64; 3]; 3],
    truncation_loss: f64,
}

impl DegreeDistribution {
    /// Builds a distribution from nonnegative weights, renormalizing them to
    /// sum to one. Rejects in/out mean imbalance.
    pub fn from_weights<I>(weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        Self::build(weights, 0.0)
    }

    /// Like [`from_weights`](Self::from_weights), but the input must already
    /// sum to one within `1e-6`, as required for distribution files.
    pub fn from_probabilities<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        let entries: Vec<_> = entries.into_iter().collect();
        let total: f64 = entries.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1 ± 1e-6"
            )));
        }
        Self::from_weights(entries)
    }

    fn build<I>(weights: I, truncation_loss: f64) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        let mut support = BTreeMap::new();
        for (jk, w) in weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "weight {w} at ({}, {}) is not a nonnegative number",
                    jk.0, jk.1
                )));
            }
            if w > 0.0 {
                *support.entry(jk).or_insert(0.0) += w;
            }
        }
        let total: f64 = support.values().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("no positive mass".into()));
        }
        for p in support.values_mut() {
            *p /= total;
        }
        let moments = moments_of(&support);
        let (mu10, mu01) = (moments[1][0], moments[0][1]);
        if !moments.iter().flatten().all(|m| m.is_finite()) {
            return Err(Error::InvalidDistribution("moments are not finite".into()));
        }
        if (mu10 - mu01).abs() > BALANCE_TOL * mu10.max(mu01).max(1.0) {
            return Err(Error::Imbalance { mu10, mu01 });
        }
        Ok(DegreeDistribution { support, moments, truncation_loss })
    }

    /// Independent in/out Poisson(`lambda`) degrees.
    pub fn poisson(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidDistribution(format!("poisson rate {lambda}")));
        }
        let log_lambda = lambda.ln();
        let mut pmf = Vec::new();
        let mut cdf = 0.0;
        let mut k = 0usize;
        loop {
            let log_p = if k == 0 { -lambda } else { -lambda + k as f64 * log_lambda - ln_factorial(k) };
            let p = log_p.exp();
            pmf.push(p);
            cdf += p;
            if (k as f64) >= lambda && 1.0 - cdf < TRUNCATION_TAIL {
                break;
            }
            k += 1;
        }
        Self::product(&pmf)
    }

    /// Point mass at `(d, d)`.
    pub fn constant(d: usize) -> Result<Self> {
        Self::from_weights([((d, d), 1.0)])
    }

    /// Independent in/out geometric degrees `P(k) = p (1 − p)^k`, `k ≥ 0`.
    pub fn geometric(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidDistribution(format!("geometric parameter {p}")));
        }
        let q = 1.0 - p;
        let mut pmf = vec![p];
        let mut tail = q;
        while tail >= TRUNCATION_TAIL {
            pmf.push(p * tail);
            tail *= q;
        }
        Self::product(&pmf)
    }

    /// Product of identical in/out marginals, truncated and renormalized.
    fn product(marginal: &[f64]) -> Result<Self> {
        let kept: f64 = marginal.iter().sum();
        let kept_joint = kept * kept;
        let loss = (1.0 - kept_joint).max(0.0);
        let weights = marginal
            .iter()
            .enumerate()
            .flat_map(|(j, &pj)| marginal.iter().enumerate().map(move |(k, &pk)| ((j, k), pj * pk)));
        Self::build(weights, loss)
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.support.get(&(j, k)).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.support.iter().map(|(&jk, &p)| (jk, p))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// Largest in- or out-degree with positive probability.
    pub fn max_degree(&self) -> usize {
        self.support.keys().map(|&(j, k)| j.max(k)).max().unwrap_or(0)
    }

    /// `μ_il = Σ jⁱ kˡ p_{j,k}` for `i, l ≤ 2`.
    pub fn moment(&self, i: usize, l: usize) -> f64 {
        self.moments[i][l]
    }

    /// Mean degree μ = μ₁₀ = μ₀₁.
    pub fn mean(&self) -> f64 {
        self.moments[1][0]
    }

    pub fn mu11(&self) -> f64 {
        self.moments[1][1]
    }

    pub fn mu20(&self) -> f64 {
        self.moments[2][0]
    }

    pub fn mu02(&self) -> f64 {
        self.moments[0][2]
    }

    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub(crate) fn with_truncation_loss(mut self, loss: f64) -> Self {
        self.truncation_loss = loss;
        self
    }

    /// Total-variation distance `½ Σ |p − q|` over the union of supports.
    pub fn total_variation(&self, other: &DegreeDistribution) -> f64 {
        let mut diff = 0.0;
        for (jk, p) in &self.support {
            diff += (p - other.support.get(jk).copied().unwrap_or(0.0)).abs();
        }
        for (jk, q) in &other.support {
            if !self.support.contains_key(jk) {
                diff += q;
            }
        }
        0.5 * diff
    }

    pub(crate) fn is_normalized(&self) -> bool {
        (self.support.values().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOL
    }
}

fn moments_of(support: &BTreeMap<(usize, usize), f64>) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for (&(j, k), &p) in support {
        let (jf, kf) = (j as f64, k as f64);
        let jp = [1.0, jf, jf * jf];
        let kp = [1.0, kf, kf * kf];
        for i in 0..3 {
            for l in 0..3 {
                m[i][l] += jp[i] * kp[l] * p;
            }
        }
    }
    m
}

pub(crate) fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Draws `n` i.i.d. degree pairs from `dist`, then repairs the sample until
/// in- and out-degree sums agree.
///
/// Repair picks a uniformly random vertex and redraws its pair. A redraw
/// that does not move the sum imbalance further from zero is kept; one that
/// worsens it by `Δ` is kept with probability `e^{−Δ}`, so the walk drifts
/// toward zero but cannot get trapped cycling between `±r`.
/// Gives up after `100·n` redraws.
pub fn realize_sequence(dist: &DegreeDistribution, n: usize, rng: &mut Stream) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if !dist.is_normalized() {
        return Err(Error::InvalidDistribution("not normalized".into()));
    }
    let points: Vec<(usize, usize)> = dist.support.keys().copied().collect();
    let sampler = WeightedIndex::new(dist.support.values().copied())
        .map_err(|e| Error::InvalidDistribution(e.to_string()))?;

    let mut pairs: Vec<(usize, usize)> = (0..n).map(|_| points[sampler.sample(rng)]).collect();
    let mut imbalance: i64 = pairs.iter().map(|&(i, o)| i as i64 - o as i64).sum();

    let cap = 100 * n;
    let mut redraws = 0;
    while imbalance != 0 {
        if redraws == cap {
            return Err(Error::RepairFailed { redraws });
        }
        redraws += 1;
        let v = rng.below(n);
        let old = pairs[v];
        let new = points[sampler.sample(rng)];
        let next = imbalance - (old.0 as i64 - old.1 as i64) + (new.0 as i64 - new.1 as i64);
        let worse = next.abs() - imbalance.abs();
        if worse <= 0 || rng.uniform() < (-(worse as f64)).exp() {
            pairs[v] = new;
            imbalance = next;
        }
    }
    Ok(DegreeSequence::new(pairs))
}
