mod common;

use std::collections::BTreeMap;

use dipercolation::rng::Stream;
use dipercolation::{
    bond_percolate, realize_sequence, sample_configuration, sample_simple, site_percolate,
    DegreeDistribution, DegreeSequence, Digraph,
};

const P_FLOOR: f64 = 1e-4;

fn tally(samples: impl Iterator<Item = Vec<(usize, usize)>>) -> BTreeMap<Vec<(usize, usize)>, u64> {
    let mut out = BTreeMap::new();
    for s in samples {
        *out.entry(s).or_insert(0) += 1;
    }
    out
}

#[test]
fn configuration_frequencies_follow_matching_counts() {
    let mut rng = Stream::new(21);
    for n in 1..=3 {
        for pairs in common::all_sequences(n, 2) {
            let seq = DegreeSequence::new(pairs.clone());
            if !seq.validate().valid || seq.m() < 2 {
                continue;
            }
            let exact = common::matchings_by_multigraph(&pairs);
            if exact.len() < 2 {
                continue;
            }
            let total = common::factorial(seq.m()) as f64;
            let draws = 20_000;
            let seen =
                tally((0..draws).map(|_| sample_configuration(&seq, &mut rng).unwrap().canonical_edges()));
            assert!(seen.keys().all(|k| exact.contains_key(k)));
            let observed: Vec<u64> = exact.keys().map(|k| seen.get(k).copied().unwrap_or(0)).collect();
            let probs: Vec<f64> = exact.values().map(|&c| c as f64 / total).collect();
            let p = common::chi_square_p(&observed, &probs);
            assert!(p > P_FLOOR, "{pairs:?}: p = {p}");
        }
    }
}

#[test]
fn simple_samples_are_uniform_over_realizations() {
    let mut rng = Stream::new(22);
    for pairs in
        [vec![(1, 1); 4], vec![(0, 2), (1, 1), (1, 1), (2, 0)], vec![(2, 2), (1, 1), (1, 1), (1, 1), (1, 1)]]
    {
        let seq = DegreeSequence::new(pairs.clone());
        let simple: Vec<Vec<(usize, usize)>> = common::matchings_by_multigraph(&pairs)
            .into_keys()
            .filter(|e| Digraph::new(pairs.len(), e.clone()).unwrap().is_simple())
            .collect();
        assert!(simple.len() >= 2);
        let draws = 30_000;
        let seen =
            tally((0..draws).map(|_| sample_simple(&seq, &mut rng, 10_000).unwrap().graph.canonical_edges()));
        assert_eq!(seen.len(), simple.len(), "{pairs:?}");
        let observed: Vec<u64> = simple.iter().map(|k| seen.get(k).copied().unwrap_or(0)).collect();
        let probs = vec![1.0 / simple.len() as f64; simple.len()];
        let p = common::chi_square_p(&observed, &probs);
        assert!(p > P_FLOOR, "{pairs:?}: p = {p}");
    }
}

#[test]
fn bond_on_two_cycle_has_four_equal_outcomes() {
    let g = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
    let mut rng = Stream::new(23);
    let seen = tally((0..40_000).map(|_| bond_percolate(&g, 0.5, &mut rng).unwrap().graph.canonical_edges()));
    assert_eq!(seen.len(), 4);
    let observed: Vec<u64> = seen.values().copied().collect();
    assert!(common::chi_square_p(&observed, &[0.25; 4]) > P_FLOOR);
}

#[test]
fn site_on_two_cycle_keeps_edges_only_when_both_survive() {
    let g = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
    let mut rng = Stream::new(24);
    let pi: f64 = 0.6;
    let mut counts = [0u64; 4];
    for _ in 0..40_000 {
        let out = site_percolate(&g, pi, &mut rng).unwrap();
        let idx = match out.deleted_vertices.as_slice() {
            [] => {
                assert_eq!(out.graph.m(), 2);
                0
            }
            [0] => 1,
            [1] => 2,
            _ => 3,
        };
        if idx > 0 {
            assert_eq!(out.graph.m(), 0);
        }
        counts[idx] += 1;
    }
    let q = 1.0 - pi;
    let probs = [pi * pi, q * pi, pi * q, q * q];
    assert!(common::chi_square_p(&counts, &probs) > P_FLOOR);
}

#[test]
fn kept_edge_count_is_binomial() {
    let n = 300;
    let edges: Vec<_> = (0..n).flat_map(|u| [(u, (u + 1) % n), (u, (u + 7) % n)]).collect();
    let g = Digraph::new(n, edges).unwrap();
    let (m, pi) = (g.m() as f64, 0.3);
    let mut rng = Stream::new(25);
    let trials = 4000;
    let kept: Vec<f64> =
        (0..trials).map(|_| bond_percolate(&g, pi, &mut rng).unwrap().surviving_edges as f64).collect();
    let mean = kept.iter().sum::<f64>() / trials as f64;
    let var = kept.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let (mu, sigma2) = (m * pi, m * pi * (1.0 - pi));
    assert!((mean - mu).abs() < 4.0 * (sigma2 / trials as f64).sqrt(), "mean {mean} vs {mu}");
    assert!((var / sigma2 - 1.0).abs() < 0.1, "var {var} vs {sigma2}");
}

#[test]
fn surviving_subsets_are_uniform_given_their_size() {
    let g = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
    let mut rng = Stream::new(26);
    let mut bond: BTreeMap<usize, BTreeMap<Vec<(usize, usize)>, u64>> = BTreeMap::new();
    let mut site: BTreeMap<usize, BTreeMap<Vec<usize>, u64>> = BTreeMap::new();
    for _ in 0..200_000 {
        let b = bond_percolate(&g, 0.5, &mut rng).unwrap().graph.canonical_edges();
        *bond.entry(b.len()).or_default().entry(b).or_insert(0) += 1;
        let s = site_percolate(&g, 0.5, &mut rng).unwrap().deleted_vertices;
        *site.entry(s.len()).or_default().entry(s).or_insert(0) += 1;
    }
    let binom = |n: usize, k: usize| {
        (common::factorial(n) / common::factorial(k) / common::factorial(n - k)) as usize
    };
    for (k, groups) in &bond {
        assert_eq!(groups.len(), binom(4, *k));
        let observed: Vec<u64> = groups.values().copied().collect();
        if observed.len() > 1 {
            let p = common::chi_square_p(&observed, &vec![1.0 / observed.len() as f64; observed.len()]);
            assert!(p > P_FLOOR, "bond k = {k}: p = {p}");
        }
    }
    for (k, groups) in &site {
        assert_eq!(groups.len(), binom(3, *k));
        let observed: Vec<u64> = groups.values().copied().collect();
        if observed.len() > 1 {
            let p = common::chi_square_p(&observed, &vec![1.0 / observed.len() as f64; observed.len()]);
            assert!(p > P_FLOOR, "site k = {k}: p = {p}");
        }
    }
}

#[test]
fn realized_sequence_tracks_its_distribution() {
    let d = DegreeDistribution::poisson(2.0).unwrap();
    let seq = realize_sequence(&d, 100_000, &mut Stream::new(27)).unwrap();
    assert!(seq.validate().valid);
    let empirical = seq.empirical_distribution().unwrap().distribution;
    let tv = empirical.total_variation(&d);
    assert!(tv < 0.01, "tv = {tv}");
    let p00: f64 = common::poisson_pmf(2.0, 0).powi(2);
    assert!((empirical.get(0, 0) - p00).abs() < 0.005);
}
