//! The degree derivative: peel off vertices of degree at most one together
//! with their forced partners until only a degree-two core remains.
//!
//! Each round computes `D`, the vertices of degree at most one in the
//! current set. A vertex of degree zero cannot be matched; a vertex of
//! degree one must be matched to its unique neighbor. The next set drops
//! `D` and every vertex adjacent to `D`, which are exactly the forced
//! partners. Any perfect matching contains every forced pair.

use std::fmt;

use crate::error::Result;
use crate::graph::{AutomaticTree, FiniteGraph, TreeVertex};
use crate::matching::Matching;

/// Why no perfect matching exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivativeConflict<V = usize> {
    /// `vertex` has no neighbor left at `stage`.
    Isolated { vertex: V, stage: usize, trace: Vec<Vec<V>> },
    /// `first` and `second` both have `partner` as their only neighbor.
    TwoForced {
        partner: V,
        first: V,
        second: V,
        stage: usize,
        trace: Vec<Vec<V>>,
    },
}

impl<V> DerivativeConflict<V> {
    /// The sets `X^0 ⊇ X^1 ⊇ ...` up to and including the failing stage.
    pub fn trace(&self) -> &[Vec<V>] {
        match self {
            DerivativeConflict::Isolated { trace, .. } | DerivativeConflict::TwoForced { trace, .. } => {
                trace
            }
        }
    }

    fn map<W>(self, f: impl Fn(V) -> W) -> DerivativeConflict<W> {
        let map_trace = |t: Vec<Vec<V>>| -> Vec<Vec<W>> {
            t.into_iter().map(|s| s.into_iter().map(&f).collect()).collect()
        };
        match self {
            DerivativeConflict::Isolated { vertex, stage, trace } => DerivativeConflict::Isolated {
                vertex: f(vertex),
                stage,
                trace: map_trace(trace),
            },
            DerivativeConflict::TwoForced {
                partner,
                first,
                second,
                stage,
                trace,
            } => DerivativeConflict::TwoForced {
                partner: f(partner),
                first: f(first),
                second: f(second),
                stage,
                trace: map_trace(trace),
            },
        }
    }
}

impl<V: fmt::Display> fmt::Display for DerivativeConflict<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivativeConflict::Isolated { vertex, stage, .. } => {
                write!(f, "conflict isolated {vertex} stage {stage}")
            }
            DerivativeConflict::TwoForced {
                partner,
                first,
                second,
                stage,
                ..
            } => write!(f, "conflict two-forced {partner} by {first} and {second} stage {stage}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeResult {
    /// Vertices never peeled; the graph restricted to them has degree at least two.
    pub core: Vec<usize>,
    pub forced: Matching,
    /// `X^0, X^1, X^2, ...`, ending with the stable set.
    pub trace: Vec<Vec<usize>>,
}

/// The derivative of a window of an infinite tree. Pairs may reach one
/// level below the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowDerivative {
    pub depth: usize,
    pub core: Vec<TreeVertex>,
    pub forced: Vec<(TreeVertex, TreeVertex)>,
    pub trace: Vec<Vec<TreeVertex>>,
}

struct Peeled {
    alive: Vec<bool>,
    pairs: Vec<(usize, usize)>,
    trace: Vec<Vec<usize>>,
}

fn members(alive: &[bool]) -> Vec<usize> {
    (0..alive.len()).filter(|&v| alive[v]).collect()
}

/// Shared engine. Frozen vertices stand in for the unseen rest of an
/// infinite graph: they never join `D`, but can be taken as partners.
fn peel(adj: &[Vec<usize>], frozen: &[bool]) -> Result<Peeled, DerivativeConflict> {
    let n = adj.len();
    let mut alive = vec![true; n];
    let mut trace = vec![members(&alive)];
    let mut pairs = Vec::new();
    loop {
        let stage = trace.len() - 1;
        let degree = |v: usize, alive: &[bool]| adj[v].iter().filter(|&&w| alive[w]).count();
        let low: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && !frozen[v] && degree(v, &alive) <= 1)
            .collect();
        if low.is_empty() {
            return Ok(Peeled { alive, pairs, trace });
        }
        let mut forced_by: Vec<Option<usize>> = vec![None; n];
        for &x in &low {
            let Some(&y) = adj[x].iter().find(|&&w| alive[w]) else {
                return Err(DerivativeConflict::Isolated {
                    vertex: x,
                    stage,
                    trace,
                });
            };
            if let Some(other) = forced_by[y] {
                return Err(DerivativeConflict::TwoForced {
                    partner: y,
                    first: other,
                    second: x,
                    stage,
                    trace,
                });
            }
            forced_by[y] = Some(x);
        }
        for &x in &low {
            alive[x] = false;
        }
        trace.push(members(&alive));
        for (y, x) in forced_by.iter().enumerate() {
            if let Some(x) = *x {
                alive[y] = false;
                if x < y || forced_by[x] != Some(y) {
                    pairs.push((x.min(y), x.max(y)));
                }
            }
        }
        trace.push(members(&alive));
    }
}

fn adjacency(g: &FiniteGraph) -> Vec<Vec<usize>> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).expect("in range").to_vec())
        .collect()
}

/// Runs the derivative to stabilization.
pub fn derive(g: &FiniteGraph) -> Result<DerivativeResult, DerivativeConflict> {
    let adj = adjacency(g);
    let peeled = peel(&adj, &vec![false; adj.len()])?;
    let forced = Matching::from_pairs(peeled.pairs).expect("forced pairs are disjoint");
    Ok(DerivativeResult {
        core: members(&peeled.alive),
        forced,
        trace: peeled.trace,
    })
}

/// The derivative on the window of depth `depth`, using true tree degrees.
///
/// The engine runs on the window of depth `depth + 1` with its last level
/// frozen, so every vertex of depth at most `depth` sees all its neighbors.
pub fn derive_window(
    t: &AutomaticTree,
    depth: usize,
    budget: usize,
) -> Result<Result<WindowDerivative, DerivativeConflict<TreeVertex>>> {
    let w = t.window(depth + 1, budget)?;
    let adj = adjacency(&w.graph);
    let frozen: Vec<bool> = w.labels.iter().map(|v| v.depth() > depth).collect();
    let label = |v: usize| w.labels[v].clone();
    let inside = |set: Vec<usize>| -> Vec<TreeVertex> {
        set.into_iter().filter(|&v| !frozen[v]).map(label).collect()
    };
    Ok(match peel(&adj, &frozen) {
        Ok(peeled) => Ok(WindowDerivative {
            depth,
            core: inside(members(&peeled.alive)),
            forced: peeled
                .pairs
                .into_iter()
                .map(|(a, b)| {
                    let (a, b) = (label(a), label(b));
                    if a < b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect(),
            trace: peeled.trace.into_iter().map(inside).collect(),
        }),
        Err(conflict) => Err(conflict.map(label)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn p2_is_forced() {
        let r = derive(&FiniteGraph::path(2)).unwrap();
        assert!(r.core.is_empty());
        assert_eq!(r.forced, Matching::from_pairs([(0, 1)]).unwrap());
    }

    #[test]
    fn p3_names_the_middle_vertex() {
        match derive(&FiniteGraph::path(3)).unwrap_err() {
            DerivativeConflict::TwoForced { partner, first, second, stage, .. } => {
                assert_eq!((partner, first, second, stage), (1, 0, 2, 0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_conflicts_at_center() {
        let err = derive(&FiniteGraph::star(3)).unwrap_err();
        assert!(matches!(err, DerivativeConflict::TwoForced { partner: 0, .. }));
    }

    #[test]
    fn cycle_is_its_own_core() {
        let r = derive(&FiniteGraph::cycle(4)).unwrap();
        assert_eq!(r.core, vec![0, 1, 2, 3]);
        assert!(r.forced.is_empty());
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn isolated_vertex() {
        let err = derive(&FiniteGraph::empty(1)).unwrap_err();
        assert!(matches!(err, DerivativeConflict::Isolated { vertex: 0, stage: 0, .. }));
    }

    #[test]
    fn pendant_cycle_leaves_core() {
        // a triangle 0-1-2 with a pendant path 2-3-4
        let g = FiniteGraph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap();
        let r = derive(&g).unwrap();
        assert_eq!(r.core, vec![0, 1, 2]);
        assert_eq!(r.forced, Matching::from_pairs([(3, 4)]).unwrap());
        assert_eq!(r.trace, vec![vec![0, 1, 2, 3, 4], vec![0, 1, 2, 3], vec![0, 1, 2]]);
    }

    #[test]
    fn windows_of_regular_trees_are_cores() {
        for t in [catalog::three_regular(), catalog::line()] {
            let r = derive_window(&t, 4, 1 << 12).unwrap().unwrap();
            assert!(r.forced.is_empty());
            assert_eq!(r.core, t.vertices_to_depth(4, 1 << 12).unwrap());
        }
    }

    #[test]
    fn pendant_root_is_forced_to_its_child() {
        let t = catalog::pendant_root();
        let r = derive_window(&t, 4, 1 << 12).unwrap().unwrap();
        assert_eq!(r.forced, vec![(TreeVertex::root(), TreeVertex::from([0]))]);
        assert!(!r.core.contains(&TreeVertex::root()));
        assert!(!r.core.contains(&TreeVertex::from([0])));
        assert_eq!(r.core.len(), t.vertices_to_depth(4, 1 << 12).unwrap().len() - 2);
    }
}
