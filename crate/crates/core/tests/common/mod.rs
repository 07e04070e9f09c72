//! Independent oracles shared by the integration and acceptance suites.
//! Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Degree sequences (indexed by labeled vertex) of every simple digraph on
/// `n` vertices, found by enumerating all `2^{n(n−1)}` edge subsets.
pub fn simple_realizable_sequences(n: usize) -> HashSet<Vec<(usize, usize)>> {
    let slots: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let mut out = HashSet::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let mut pairs = vec![(0usize, 0usize); n];
        for (bit, &(u, v)) in slots.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                pairs[u].1 += 1;
                pairs[v].0 += 1;
            }
        }
        out.insert(pairs);
    }
    out
}

/// All sequences of `n` pairs with entries in `0..=max_degree`.
pub fn all_sequences(n: usize, max_degree: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            for i in 0..=max_degree {
                for o in 0..=max_degree {
                    let mut p = prefix.clone();
                    p.push((i, o));
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

/// Ordered compositions of `total` into `parts` nonnegative integers.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Every perfect matching of in-stubs (canonical vertex order) with
/// out-stubs, grouped by the multigraph it induces: canonical sorted edge
/// list → number of matchings (out of `m!`).
pub fn matchings_by_multigraph(pairs: &[(usize, usize)]) -> BTreeMap<Vec<(usize, usize)>, u64> {
    let targets: Vec<usize> =
        pairs.iter().enumerate().flat_map(|(v, &(i, _))| std::iter::repeat_n(v, i)).collect();
    let mut sources: Vec<usize> =
        pairs.iter().enumerate().flat_map(|(v, &(_, o))| std::iter::repeat_n(v, o)).collect();
    assert_eq!(targets.len(), sources.len());
    let mut out = BTreeMap::new();
    permutations(&mut sources, 0, &mut |perm| {
        let mut edges: Vec<(usize, usize)> = perm.iter().copied().zip(targets.iter().copied()).collect();
        edges.sort_unstable();
        *out.entry(edges).or_insert(0) += 1;
    });
    out
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Strongly connected classes by boolean transitive closure (Warshall).
/// Returned as sorted member lists ordered by smallest member.
pub fn scc_by_closure(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut reach = vec![vec![false; n]; n];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
    }
    for &(u, v) in edges {
        reach[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for u in 0..n {
        if assigned[u] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&v| reach[u][v] && reach[v][u]).collect();
        for &v in &class {
            assigned[v] = true;
        }
        classes.push(class);
    }
    classes
}

/// Upper-tail p-value of Pearson's chi-square statistic against expected
/// probabilities.
pub fn chi_square_p(observed: &[u64], expected_probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(expected_probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    ChiSquared::new((observed.len() - 1) as f64).unwrap().sf(stat)
}

/// Poisson pmf by recurrence.
pub fn poisson_pmf(lambda: f64, k: usize) -> f64 {
    let mut p = (-lambda).exp();
    for i in 1..=k {
        p *= lambda / i as f64;
    }
    p
}

/// Smallest root of `x = e^{λ(x−1)}` by bisection on the survival form
/// `β = 1 − e^{−λβ}`, `x = 1 − β`.
pub fn poisson_extinction(lambda: f64) -> f64 {
    if lambda <= 1.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (1e-12, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - (-lambda * mid).exp() > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    1.0 - 0.5 * (lo + hi)
}
