//! Deterministic instance generators: exhaustive free trees and seeded
//! random forests.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::FiniteGraph;

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
    let mut parts: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(adj, w, Some(v)))
        .collect();
    parts.sort();
    format!("({})", parts.concat())
}

/// Isomorphism-invariant code of a tree: the least rooted code over its centers.
pub fn canonical_tree_code(g: &FiniteGraph) -> String {
    let n = g.vertex_count();
    if n == 0 {
        return String::new();
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).unwrap().to_vec()).collect();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &w in &adj[leaf] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|&c| rooted_code(&adj, c, None))
        .min()
        .unwrap()
}

/// All trees on `n >= 1` vertices up to isomorphism, in a fixed order.
pub fn enumerate_trees(n: usize) -> Vec<FiniteGraph> {
    assert!(n >= 1);
    let mut current: BTreeMap<String, FiniteGraph> = BTreeMap::new();
    let single = FiniteGraph::empty(1);
    current.insert(canonical_tree_code(&single), single);
    for size in 2..=n {
        let mut next = BTreeMap::new();
        for g in current.values() {
            for attach in 0..size - 1 {
                let grown = FiniteGraph::new(size, g.edges().chain([(attach, size - 1)])).unwrap();
                next.entry(canonical_tree_code(&grown)).or_insert(grown);
            }
        }
        current = next;
    }
    current.into_values().collect()
}

/// A random forest on `n` vertices with shuffled labels. Each new vertex
/// joins a uniformly random earlier vertex with probability `attach`.
pub fn random_forest(rng: &mut impl Rng, n: usize, attach: f64) -> FiniteGraph {
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen_bool(attach) {
            let u = rng.gen_range(0..v);
            edges.push((label[u], label[v]));
        }
    }
    FiniteGraph::new(n, edges).unwrap()
}

/// `count` random forests with sizes in `1..=max_n`, reproducible from `seed`.
pub fn seeded_forests(seed: u64, count: usize, max_n: usize) -> Vec<FiniteGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let attach = rng.gen_range(0.6..1.0);
            random_forest(&mut rng, n, attach)
        })
        .collect()
}
