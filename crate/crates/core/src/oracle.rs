//! Brute-force ground truth for matchings on finite graphs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::matching::Matching;

/// Largest vertex count handled by exhaustive search.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Largest vertex count accepted by [`enumerate_perfect_matchings`]. The
/// output itself can still be exponential on dense inputs.
pub const ENUMERATION_LIMIT: usize = 32;

/// A maximum-cardinality matching.
///
/// Bipartite inputs (forests included) use augmenting paths; anything else
/// falls back to exhaustive search over vertex subsets, which is limited to
/// [`EXHAUSTIVE_LIMIT`] vertices.
pub fn max_matching(g: &FiniteGraph) -> Result<Matching> {
    if let Some(side) = g.bipartition() {
        return Ok(augmenting_path_matching(g, &side));
    }
    if g.vertex_count() > EXHAUSTIVE_LIMIT {
        return Err(Error::Precondition(format!(
            "{} vertices exceed the exhaustive-search limit of {EXHAUSTIVE_LIMIT} for non-bipartite graphs",
            g.vertex_count()
        )));
    }
    Ok(exhaustive_matching(g))
}

pub fn has_perfect_matching(g: &FiniteGraph) -> Result<bool> {
    Ok(2 * max_matching(g)?.len() == g.vertex_count())
}

fn augmenting_path_matching(g: &FiniteGraph, side: &[bool]) -> Matching {
    let n = g.vertex_count();
    let mut mate: Vec<Option<usize>> = vec![None; n];

    fn augment(
        g: &FiniteGraph,
        u: usize,
        mate: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &w in g.neighbors(u).expect("vertex in range") {
            if visited[w] {
                continue;
            }
            visited[w] = true;
            if mate[w].map_or(true, |x| augment(g, x, mate, visited)) {
                mate[w] = Some(u);
                mate[u] = Some(w);
                return true;
            }
        }
        false
    }

    for u in (0..n).filter(|&u| !side[u]) {
        let mut visited = vec![false; n];
        augment(g, u, &mut mate, &mut visited);
    }
    let mut m = Matching::new();
    for (u, w) in mate.iter().enumerate() {
        if let Some(w) = *w {
            if u < w {
                m.insert(u, w).expect("augmenting paths keep mates consistent");
            }
        }
    }
    m
}

fn exhaustive_matching(g: &FiniteGraph) -> Matching {
    let n = g.vertex_count();
    let nbr: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .unwrap()
                .iter()
                .fold(0u32, |acc, &w| acc | (1 << w))
        })
        .collect();
    let mut memo = vec![u8::MAX; 1usize << n];

    fn best(mask: u32, nbr: &[u32], memo: &mut [u8]) -> u8 {
        if mask == 0 {
            return 0;
        }
        if memo[mask as usize] != u8::MAX {
            return memo[mask as usize];
        }
        let v = mask.trailing_zeros();
        let rest = mask & !(1 << v);
        let mut value = best(rest, nbr, memo);
        let mut options = nbr[v as usize] & rest;
        while options != 0 {
            let u = options.trailing_zeros();
            options &= options - 1;
            value = value.max(1 + best(rest & !(1 << u), nbr, memo));
        }
        memo[mask as usize] = value;
        value
    }

    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut m = Matching::new();
    let mut mask = full;
    while mask != 0 {
        let target = best(mask, &nbr, &mut memo);
        let v = mask.trailing_zeros();
        let rest = mask & !(1 << v);
        if best(rest, &nbr, &mut memo) == target {
            mask = rest;
            continue;
        }
        let mut options = nbr[v as usize] & rest;
        while options != 0 {
            let u = options.trailing_zeros();
            options &= options - 1;
            let after = rest & !(1 << u);
            if 1 + best(after, &nbr, &mut memo) == target {
                m.insert(v as usize, u as usize).unwrap();
                mask = after;
                break;
            }
        }
    }
    m
}

/// All perfect matchings, lowest unmatched vertex paired first, partners in
/// increasing order.
pub fn enumerate_perfect_matchings(g: &FiniteGraph) -> Result<Vec<Matching>> {
    let n = g.vertex_count();
    if n > ENUMERATION_LIMIT {
        return Err(Error::Precondition(format!(
            "{n} vertices exceed the enumeration limit of {ENUMERATION_LIMIT}"
        )));
    }
    fn go(g: &FiniteGraph, used: &mut [bool], pairs: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
        let Some(v) = used.iter().position(|&u| !u) else {
            out.push(Matching::from_pairs(pairs.iter().copied()).unwrap());
            return;
        };
        used[v] = true;
        for &w in g.neighbors(v).unwrap() {
            if !used[w] {
                used[w] = true;
                pairs.push((v, w));
                go(g, used, pairs, out);
                pairs.pop();
                used[w] = false;
            }
        }
        used[v] = false;
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        go(g, &mut vec![false; n], &mut Vec::new(), &mut out);
    }
    Ok(out)
}

/// Result of leaf-forcing on a forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOutcome {
    Perfect(Matching),
    /// `vertex` was left without neighbors; `partial` holds the pairs forced so far.
    Stuck { vertex: usize, partial: Matching },
}

/// Repeatedly matches the lowest degree-one vertex to its neighbor and
/// deletes both. On forests this succeeds iff a perfect matching exists.
pub fn greedy_forest_matching(g: &FiniteGraph) -> Result<GreedyOutcome> {
    if !g.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v).unwrap()).collect();
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut isolated: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 0).collect();
    let mut m = Matching::new();
    loop {
        if let Some(&vertex) = isolated.first() {
            return Ok(GreedyOutcome::Stuck { vertex, partial: m });
        }
        let Some(leaf) = leaves.pop_first() else {
            break;
        };
        let partner = *g
            .neighbors(leaf)?
            .iter()
            .find(|&&w| alive[w])
            .expect("a leaf has one live neighbor");
        m.insert(leaf, partner)?;
        alive[leaf] = false;
        alive[partner] = false;
        leaves.remove(&partner);
        for &w in g.neighbors(partner)? {
            if alive[w] {
                degree[w] -= 1;
                match degree[w] {
                    0 => {
                        leaves.remove(&w);
                        isolated.insert(w);
                    }
                    1 => {
                        leaves.insert(w);
                    }
                    _ => {}
                }
            }
        }
    }
    debug_assert!(alive.iter().all(|a| !a), "forests reduce to nothing");
    Ok(GreedyOutcome::Perfect(m))
}

/// Calls `visit` on every injective path of at most `max_points` points
/// whose even-indexed points all satisfy `degree(x) == 2`. Paths are
/// reported as they grow, so every prefix of a reported path is reported
/// first.
pub fn for_each_bad_path(
    g: &FiniteGraph,
    degree: &dyn Fn(usize) -> usize,
    max_points: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    fn extend(
        g: &FiniteGraph,
        degree: &dyn Fn(usize) -> usize,
        max_points: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        visit(path);
        if path.len() == max_points {
            return;
        }
        let last = *path.last().unwrap();
        let even = path.len() % 2 == 0;
        for &w in g.neighbors(last).unwrap() {
            if on_path[w] || (even && degree(w) != 2) {
                continue;
            }
            on_path[w] = true;
            path.push(w);
            extend(g, degree, max_points, path, on_path, visit);
            path.pop();
            on_path[w] = false;
        }
    }
    let mut on_path = vec![false; g.vertex_count()];
    for start in 0..g.vertex_count() {
        if degree(start) != 2 || max_points == 0 {
            continue;
        }
        on_path[start] = true;
        extend(g, degree, max_points, &mut vec![start], &mut on_path, visit);
        on_path[start] = false;
    }
}

/// Number of points on the longest bad path, capped at `max_points`.
pub fn longest_bad_path(g: &FiniteGraph, degree: &dyn Fn(usize) -> usize, max_points: usize) -> usize {
    let mut best = 0;
    for_each_bad_path(g, degree, max_points, &mut |p| best = best.max(p.len()));
    best
}
