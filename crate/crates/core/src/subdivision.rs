//! The line-and-point graph: one vertex per original vertex and one per
//! edge, joined by incidence. Its perfect matchings are exactly the
//! orientations `f` that generate the graph with `f` and `f∘f` fixed-point
//! free, each point matched with the edge `{x, f(x)}`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::matching::Matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubdivisionLabel {
    Point(usize),
    Edge(usize, usize),
}

/// Points keep their ids `0..n`; edge vertices follow at `n..` in the
/// order of [`FiniteGraph::edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionGraph {
    pub graph: FiniteGraph,
    pub labels: Vec<SubdivisionLabel>,
    edge_ids: HashMap<(usize, usize), usize>,
}

impl SubdivisionGraph {
    pub fn point_count(&self) -> usize {
        self.labels.iter().take_while(|l| matches!(l, SubdivisionLabel::Point(_))).count()
    }

    /// Id of the vertex standing for the edge `{a, b}`.
    pub fn edge_vertex(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_ids.get(&(a.min(b), a.max(b))).copied()
    }
}

pub fn subdivide(g: &FiniteGraph) -> SubdivisionGraph {
    let n = g.vertex_count();
    let mut labels: Vec<SubdivisionLabel> = (0..n).map(SubdivisionLabel::Point).collect();
    let mut edge_ids = HashMap::new();
    let mut edges = Vec::new();
    for (k, (a, b)) in g.edges().enumerate() {
        let id = n + k;
        labels.push(SubdivisionLabel::Edge(a, b));
        edge_ids.insert((a, b), id);
        edges.push((a, id));
        edges.push((b, id));
    }
    let graph = FiniteGraph::new(labels.len(), edges).expect("incidence edges are valid");
    SubdivisionGraph { graph, labels, edge_ids }
}

/// Checks that `f` is total on the points, fixed-point free together with
/// its square, and generates exactly the edges of `g`.
fn check_orientation(g: &FiniteGraph, f: &[usize]) -> Result<()> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(Error::Precondition(format!("f has {} values for {n} vertices", f.len())));
    }
    if let Some(&y) = f.iter().find(|&&y| y >= n) {
        return Err(Error::VertexOutOfRange(y));
    }
    if let Some(x) = (0..n).find(|&x| f[x] == x) {
        return Err(Error::Precondition(format!("f fixes {x}")));
    }
    if let Some(x) = (0..n).find(|&x| f[f[x]] == x) {
        return Err(Error::Precondition(format!("f∘f fixes {x}")));
    }
    if let Some(x) = (0..n).find(|&x| !g.has_edge(x, f[x])) {
        return Err(Error::InvalidEdge(x, f[x]));
    }
    let mut generated: Vec<(usize, usize)> = (0..n).map(|x| (x.min(f[x]), x.max(f[x]))).collect();
    generated.sort_unstable();
    generated.dedup();
    if generated.len() != g.edge_count() {
        return Err(Error::Precondition("f does not generate every edge".into()));
    }
    Ok(())
}

/// Pairs each point `x` with the edge vertex of `{x, f(x)}`.
pub fn orientation_to_matching(g: &FiniteGraph, f: &[usize]) -> Result<Matching> {
    check_orientation(g, f)?;
    let sub = subdivide(g);
    Matching::from_pairs((0..f.len()).map(|x| (x, sub.edge_vertex(x, f[x]).expect("checked edge"))))
}

/// Reads off `f(x)` as the other endpoint of the edge matched with `x`.
pub fn matching_to_orientation(g: &FiniteGraph, m: &Matching) -> Result<Vec<usize>> {
    let sub = subdivide(g);
    if !m.is_perfect(&sub.graph) {
        return Err(Error::Precondition("not a perfect matching of the subdivision".into()));
    }
    let f: Vec<usize> = (0..g.vertex_count())
        .map(|x| match sub.labels[m.partner(x).expect("perfect")] {
            SubdivisionLabel::Edge(a, b) => if a == x { b } else { a },
            SubdivisionLabel::Point(_) => unreachable!("points are only adjacent to edges"),
        })
        .collect();
    check_orientation(g, &f)?;
    Ok(f)
}

/// Whether no iterate of `f` has a fixed point.
pub fn is_aperiodic(f: &[usize]) -> bool {
    let n = f.len();
    (0..n).all(|x| {
        let mut y = f[x];
        for _ in 0..n {
            if y == x {
                return false;
            }
            y = f[y];
        }
        true
    })
}
