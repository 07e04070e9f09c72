//! Strongly connected components.

use std::collections::VecDeque;

use crate::configmodel::Digraph;
use crate::error::{Error, Result};

/// Partition of the vertex set into strongly connected components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    component_id: Vec<usize>,
    component_sizes: Vec<usize>,
}

impl SccPartition {
    /// Component label of every vertex.
    pub fn component_id(&self) -> &[usize] {
        &self.component_id
    }

    pub fn component_sizes(&self) -> &[usize] {
        &self.component_sizes
    }

    pub fn count(&self) -> usize {
        self.component_sizes.len()
    }

    /// `(label, size)` of the largest component; ties go to the smallest label.
    pub fn largest(&self) -> Option<(usize, usize)> {
        self.component_sizes.iter().copied().enumerate().fold(None, |best, (label, size)| match best {
            Some((_, s)) if s >= size => best,
            _ => Some((label, size)),
        })
    }

    /// Members of each component, vertices sorted, components ordered by
    /// their smallest vertex. Independent of how labels were assigned.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.count()];
        for (v, &c) in self.component_id.iter().enumerate() {
            groups[c].push(v);
        }
        groups.sort_unstable_by_key(|g| g[0]);
        groups
    }
}

/// Deduplicated forward adjacency in CSR form.
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    fn build(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<(usize, usize)> = edges.collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Csr { offsets, targets: pairs.into_iter().map(|(_, v)| v).collect() }
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

const UNVISITED: usize = usize::MAX;

/// Tarjan's algorithm with an explicit call stack; `O(n + m)`.
pub fn strongly_connected_components(g: &Digraph) -> SccPartition {
    let n = g.n();
    let adj = Csr::build(n, g.edges().iter().copied());
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut calls: Vec<(usize, usize)> = Vec::new();
    let mut component_id = vec![UNVISITED; n];
    let mut component_sizes = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, adj.offsets[root]));

        while let Some(frame) = calls.last_mut() {
            let v = frame.0;
            if frame.1 < adj.offsets[v + 1] {
                let w = adj.targets[frame.1];
                frame.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, adj.offsets[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let label = component_sizes.len();
                let mut size = 0;
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_id[w] = label;
                    size += 1;
                    if w == v {
                        break;
                    }
                }
                component_sizes.push(size);
            }
        }
    }
    SccPartition { component_id, component_sizes }
}

/// `|largest SCC| / n`.
pub fn largest_scc_fraction(g: &Digraph) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (_, size) = strongly_connected_components(g).largest().expect("n >= 1");
    Ok(size as f64 / g.n() as f64)
}

fn reachable(adj: &Csr, start: usize, n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in adj.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// `{v} ∪ {w : v ⇝ w and w ⇝ v}`, computed by forward and backward search.
pub fn strong_component_of(g: &Digraph, v: usize) -> Result<Vec<usize>> {
    let n = g.n();
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let forward = Csr::build(n, g.edges().iter().copied());
    let backward = Csr::build(n, g.edges().iter().map(|&(a, b)| (b, a)));
    let fwd = reachable(&forward, v, n);
    let bwd = reachable(&backward, v, n);
    Ok((0..n).filter(|&w| fwd[w] && bwd[w]).collect())
}
