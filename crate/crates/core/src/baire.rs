//! Closure and buffer sets, and the sweep that removes a packing of them.
//!
//! Everything happens inside a remainder: the tree minus a finite set of
//! already matched vertices. A closure set `S` is grown from a seed and
//! carries a perfect matching of itself, and its removal leaves the
//! remainder with degree at least two. The buffer `T` around `S` is wide
//! enough that no bad path of the remainder minus `S` runs from the
//! boundary of `S` to the boundary of `T`. Buffers of kept closures are
//! pairwise disjoint, so their removals do not interact.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, FiniteGraph, TreeVertex};
use crate::oracle;

pub type VertexSet = BTreeSet<TreeVertex>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosurePair {
    pub seed: TreeVertex,
    pub s: VertexSet,
    pub t: VertexSet,
    /// Perfect matching of the tree restricted to `s`, pairs ordered.
    pub matching: Vec<(TreeVertex, TreeVertex)>,
    /// Least `n` such that no bad path of `n` points starts at a boundary
    /// vertex; also the radius of `t` around `s`.
    pub radius: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    /// Closure pairs for every usable seed, in seed order.
    pub pairs: Vec<ClosurePair>,
    /// Indices into `pairs` of the kept, buffer-disjoint subfamily.
    pub kept: Vec<usize>,
    pub matching: Vec<(TreeVertex, TreeVertex)>,
    /// Removed set after the sweep.
    pub removed: VertexSet,
}

fn live_neighbors(t: &AutomaticTree, v: &TreeVertex, dead: &dyn Fn(&TreeVertex) -> bool) -> Result<Vec<TreeVertex>> {
    Ok(t.neighbors(v)?.into_iter().filter(|w| !dead(w)).collect())
}

/// Vertices outside `s` and `removed` with a neighbor in `s`.
pub fn boundary(t: &AutomaticTree, removed: &VertexSet, s: &VertexSet) -> Result<VertexSet> {
    let mut out = VertexSet::new();
    for v in s {
        for w in t.neighbors(v)? {
            if !s.contains(&w) && !removed.contains(&w) {
                out.insert(w);
            }
        }
    }
    Ok(out)
}

/// Grows the closure of `x` inside the remainder.
pub fn closure_in(
    t: &AutomaticTree,
    removed: &VertexSet,
    x: &TreeVertex,
    budget: usize,
) -> Result<(VertexSet, Vec<(TreeVertex, TreeVertex)>)> {
    t.state_of(x)?;
    if removed.contains(x) {
        return Err(Error::Precondition(format!("{x} was already removed")));
    }
    let y = live_neighbors(t, x, &|w| removed.contains(w))?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Precondition(format!("{x} has no neighbor in the remainder")))?;
    let mut s: VertexSet = [x.clone(), y.clone()].into();
    let mut pairs = vec![(x.clone(), y)];
    let mut fresh: Vec<TreeVertex> = s.iter().cloned().collect();
    while !fresh.is_empty() {
        let dead = |w: &TreeVertex| s.contains(w) || removed.contains(w);
        let mut candidates = VertexSet::new();
        for v in &fresh {
            candidates.extend(live_neighbors(t, v, &dead)?);
        }
        let mut round: BTreeMap<TreeVertex, TreeVertex> = BTreeMap::new();
        for w in candidates {
            let live = live_neighbors(t, &w, &dead)?;
            match live.as_slice() {
                [] => return Err(Error::Precondition(format!("{w} is left without neighbors"))),
                [z] => {
                    if round.contains_key(z) || round.values().any(|u| u == z) {
                        return Err(Error::InvariantViolation(format!("{z} is claimed twice")));
                    }
                    round.insert(w, z.clone());
                }
                _ => {}
            }
        }
        fresh = Vec::new();
        for (w, z) in round {
            s.insert(w.clone());
            s.insert(z.clone());
            fresh.push(w.clone());
            fresh.push(z.clone());
            pairs.push(if w < z { (w, z) } else { (z, w) });
        }
        if s.len() > budget {
            return Err(Error::BudgetExceeded {
                context: format!("growing the closure of {x}"),
                budget,
                frontier: fresh,
            });
        }
    }
    if pairs[0].1 < pairs[0].0 {
        let (a, b) = pairs[0].clone();
        pairs[0] = (b, a);
    }
    pairs.sort();
    Ok((s, pairs))
}

pub fn closure(t: &AutomaticTree, x: &TreeVertex, budget: usize) -> Result<(VertexSet, Vec<(TreeVertex, TreeVertex)>)> {
    closure_in(t, &VertexSet::new(), x, budget)
}

/// Longest path from `u` moving away from `prev` whose points at indices
/// of parity `phase` have degree two.
fn longest_bad(
    t: &AutomaticTree,
    dead: &dyn Fn(&TreeVertex) -> bool,
    u: &TreeVertex,
    prev: Option<&TreeVertex>,
    phase: usize,
    limit: usize,
    visits: &mut usize,
) -> Result<usize> {
    *visits += 1;
    let live = live_neighbors(t, u, dead)?;
    if phase == 0 && live.len() != 2 {
        return Ok(0);
    }
    if limit == 0 || *visits > limit * 64 {
        return Err(Error::BudgetExceeded {
            context: "measuring bad paths".into(),
            budget: limit,
            frontier: vec![u.clone()],
        });
    }
    let mut best = 0;
    for w in live.iter().filter(|w| Some(*w) != prev) {
        best = best.max(longest_bad(t, dead, w, Some(u), 1 - phase, limit - 1, visits)?);
    }
    Ok(1 + best)
}

/// Buffer around `s`: returns `T` and its radius.
pub fn buffer_in(t: &AutomaticTree, removed: &VertexSet, s: &VertexSet, budget: usize) -> Result<(VertexSet, usize)> {
    let dead = |w: &TreeVertex| s.contains(w) || removed.contains(w);
    let mut radius = 0;
    let mut visits = 0;
    for z in boundary(t, removed, s)? {
        for phase in 0..2 {
            radius = radius.max(1 + longest_bad(t, &dead, &z, None, phase, budget, &mut visits)?);
        }
    }
    let mut ball = s.clone();
    let mut layer: Vec<TreeVertex> = s.iter().cloned().collect();
    for _ in 0..radius {
        let mut next = Vec::new();
        for v in &layer {
            for w in t.neighbors(v)? {
                if !removed.contains(&w) && ball.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    Ok((ball, radius))
}

pub fn buffer(t: &AutomaticTree, s: &VertexSet, budget: usize) -> Result<(VertexSet, usize)> {
    buffer_in(t, &VertexSet::new(), s, budget)
}

pub fn closure_pair(t: &AutomaticTree, removed: &VertexSet, seed: &TreeVertex, budget: usize) -> Result<ClosurePair> {
    let (s, matching) = closure_in(t, removed, seed, budget)?;
    let (tset, radius) = buffer_in(t, removed, &s, budget)?;
    Ok(ClosurePair {
        seed: seed.clone(),
        s,
        t: tset,
        matching,
        radius,
    })
}

/// One sweep: closure pairs for the seeds in shortlex order, greedily
/// keeping those whose buffers avoid all earlier kept buffers.
pub fn sweep_step(t: &AutomaticTree, removed: &VertexSet, seeds: &[TreeVertex], budget: usize) -> Result<Sweep> {
    let seeds: VertexSet = seeds.iter().filter(|v| !removed.contains(*v)).cloned().collect();
    let mut pairs = Vec::new();
    for seed in &seeds {
        pairs.push(closure_pair(t, removed, seed, budget)?);
    }
    let mut taken = VertexSet::new();
    let mut kept = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        if p.t.is_disjoint(&taken) {
            taken.extend(p.t.iter().cloned());
            kept.push(i);
        }
    }
    let mut matching: Vec<_> = kept.iter().flat_map(|&i| pairs[i].matching.iter().cloned()).collect();
    matching.sort();
    let mut after = removed.clone();
    for &i in &kept {
        after.extend(pairs[i].s.iter().cloned());
    }
    Ok(Sweep {
        pairs,
        kept,
        matching,
        removed: after,
    })
}

/// Sweeps with every remaining vertex of the depth-`depth` window as a seed
/// until the window is covered or `rounds` sweeps have run.
pub fn sweep_window(t: &AutomaticTree, depth: usize, rounds: usize, budget: usize) -> Result<Vec<Sweep>> {
    let window = t.vertices_to_depth(depth, budget)?;
    let mut removed = VertexSet::new();
    let mut out = Vec::new();
    for _ in 0..rounds {
        let seeds: Vec<TreeVertex> = window.iter().filter(|v| !removed.contains(*v)).cloned().collect();
        if seeds.is_empty() {
            break;
        }
        let sweep = sweep_step(t, &removed, &seeds, budget)?;
        removed = sweep.removed.clone();
        out.push(sweep);
    }
    Ok(out)
}

/// The finite tree spanned by `vertices`, numbered in the given order.
pub fn induced(vertices: &[TreeVertex]) -> FiniteGraph {
    let index: BTreeMap<&TreeVertex, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges = vertices
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.parent().and_then(|p| index.get(&p).map(|&j| (j, i))));
    FiniteGraph::new(vertices.len(), edges).expect("tree edges")
}

/// Least number of remainder neighbors over window vertices outside `removed`.
pub fn remainder_min_degree(t: &AutomaticTree, removed: &VertexSet, depth: usize, budget: usize) -> Result<usize> {
    let mut least = usize::MAX;
    for v in t.vertices_to_depth(depth, budget)? {
        if !removed.contains(&v) {
            least = least.min(live_neighbors(t, &v, &|w| removed.contains(w))?.len());
        }
    }
    Ok(least)
}

/// Bad paths of at most `max_points` points inside the depth-`depth`
/// window of the remainder minus `pair.s` that meet both the boundary of
/// `pair.s` and the inner boundary of `pair.t`. Degrees are true
/// remainder degrees, not window degrees.
pub fn crossing_bad_paths(
    t: &AutomaticTree,
    removed: &VertexSet,
    pair: &ClosurePair,
    depth: usize,
    max_points: usize,
    budget: usize,
) -> Result<Vec<Vec<TreeVertex>>> {
    let dead = |w: &TreeVertex| pair.s.contains(w) || removed.contains(w);
    let live: Vec<TreeVertex> = t
        .vertices_to_depth(depth, budget)?
        .into_iter()
        .filter(|v| !dead(v))
        .collect();
    let g = induced(&live);
    let mut degree = Vec::with_capacity(live.len());
    for v in &live {
        degree.push(live_neighbors(t, v, &dead)?.len());
    }
    let inner = boundary(t, removed, &pair.s)?;
    let mut outer = VertexSet::new();
    for v in &pair.t {
        if live_neighbors(t, v, &|w| removed.contains(w))?.iter().any(|w| !pair.t.contains(w)) {
            outer.insert(v.clone());
        }
    }
    let mut found = Vec::new();
    oracle::for_each_bad_path(&g, &|i| degree[i], max_points, &mut |path| {
        let hits = |set: &VertexSet| path.iter().any(|&i| set.contains(&live[i]));
        if hits(&inner) && hits(&outer) {
            found.push(path.iter().map(|&i| live[i].clone()).collect());
        }
    });
    Ok(found)
}

/// Window checks after a sweep that started from `before`: the remainder
/// keeps degree at least two, and no bad path of at most `max_points`
/// points crosses from a removed `S` to the edge of its buffer.
pub fn verify_sweep(
    t: &AutomaticTree,
    before: &VertexSet,
    sweep: &Sweep,
    depth: usize,
    max_points: usize,
    budget: usize,
) -> Result<()> {
    let least = remainder_min_degree(t, &sweep.removed, depth, budget)?;
    if least < 2 && least != usize::MAX {
        return Err(Error::InvariantViolation(format!("remainder degree {least} on the depth-{depth} window")));
    }
    for &i in &sweep.kept {
        let pair = &sweep.pairs[i];
        if let Some(path) = crossing_bad_paths(t, before, pair, depth, max_points, budget)?.first() {
            let shown: Vec<String> = path.iter().map(ToString::to_string).collect();
            return Err(Error::InvariantViolation(format!(
                "bad path {} crosses the buffer of {}",
                shown.join(" "),
                pair.seed
            )));
        }
    }
    Ok(())
}

/// Breadth-first distance from `s` to `v` through the remainder.
pub fn distance_from(t: &AutomaticTree, removed: &VertexSet, s: &VertexSet, v: &TreeVertex, limit: usize) -> Result<Option<usize>> {
    let mut seen: VertexSet = s.clone();
    let mut queue: VecDeque<(TreeVertex, usize)> = s.iter().map(|x| (x.clone(), 0)).collect();
    while let Some((x, d)) = queue.pop_front() {
        if &x == v {
            return Ok(Some(d));
        }
        if d == limit {
            continue;
        }
        for w in t.neighbors(&x)? {
            if !removed.contains(&w) && seen.insert(w.clone()) {
                queue.push_back((w, d + 1));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn three_regular_root_closure() {
        let t = catalog::three_regular();
        let (s, m) = closure(&t, &TreeVertex::root(), 64).unwrap();
        assert_eq!(s, [TreeVertex::root(), TreeVertex::from([0])].into());
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn three_regular_buffer_radius() {
        let t = catalog::three_regular();
        let (s, _) = closure(&t, &TreeVertex::root(), 64).unwrap();
        let (tset, radius) = buffer(&t, &s, 64).unwrap();
        assert_eq!(radius, 3);
        assert!(tset.is_superset(&boundary(&t, &VertexSet::new(), &s).unwrap()));
    }

    #[test]
    fn bare_line_closure_runs_away() {
        let t = catalog::line();
        match closure(&t, &TreeVertex::root(), 40).unwrap_err() {
            Error::BudgetExceeded { frontier, .. } => assert!(!frontier.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn even_comb_closure_follows_the_bad_ray() {
        let t = catalog::even_comb();
        assert!(matches!(
            closure(&t, &TreeVertex::from([0, 0]), 64),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn odd_comb_closures_are_perfectly_matched() {
        let t = catalog::odd_comb();
        for x in t.vertices_to_depth(3, 256).unwrap() {
            let (s, m) = closure(&t, &x, 64).unwrap();
            assert_eq!(s.len(), 2 * m.len());
            let g = induced(&s.iter().cloned().collect::<Vec<_>>());
            assert!(oracle::has_perfect_matching(&g).unwrap());
        }
    }

    #[test]
    fn overlapping_seeds_keep_the_first() {
        let t = catalog::three_regular();
        let seeds = [TreeVertex::from([0]), TreeVertex::root()];
        let sweep = sweep_step(&t, &VertexSet::new(), &seeds, 256).unwrap();
        assert_eq!(sweep.kept, vec![0]);
        assert_eq!(sweep.pairs[0].seed, TreeVertex::root());
    }

    #[test]
    fn sweep_keeps_the_remainder_healthy() {
        let t = catalog::three_regular();
        let sweeps = sweep_window(&t, 3, 3, 1 << 12).unwrap();
        let mut removed = VertexSet::new();
        for sweep in &sweeps {
            for &i in &sweep.kept {
                let pair = &sweep.pairs[i];
                assert!(crossing_bad_paths(&t, &removed, pair, 7, 10, 1 << 14).unwrap().is_empty());
            }
            removed = sweep.removed.clone();
            assert!(remainder_min_degree(&t, &removed, 6, 1 << 14).unwrap() >= 2);
        }
    }

    #[test]
    fn boundary_alone_is_too_thin_a_buffer() {
        // boundary vertices have lost a neighbor to S, so bad paths leave them
        let t = catalog::three_regular();
        let none = VertexSet::new();
        let mut pair = closure_pair(&t, &none, &TreeVertex::root(), 64).unwrap();
        assert!(crossing_bad_paths(&t, &none, &pair, 6, 12, 1 << 12).unwrap().is_empty());
        pair.t = pair.s.union(&boundary(&t, &none, &pair.s).unwrap()).cloned().collect();
        assert!(!crossing_bad_paths(&t, &none, &pair, 6, 12, 1 << 12).unwrap().is_empty());
    }
}
