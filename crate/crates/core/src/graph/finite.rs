use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// A simple undirected graph on the vertices `0..vertex_count`.
///
/// Edges are stored as sorted pairs `(a, b)` with `a < b`, so the relation is
/// irreflexive and symmetric by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl FiniteGraph {
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidEdge(a, b));
            }
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange(v));
                }
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(FiniteGraph {
            vertex_count,
            edges: set,
            adjacency,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        FiniteGraph {
            vertex_count,
            edges: BTreeSet::new(),
            adjacency: vec![Vec::new(); vertex_count],
        }
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    /// The cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
    }

    /// The star with center `0` and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star edges are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> Result<&[usize]> {
        self.adjacency
            .get(v)
            .map(Vec::as_slice)
            .ok_or(Error::VertexOutOfRange(v))
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.neighbors(v).map(<[usize]>::len)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_acyclic(&self) -> bool {
        self.edges.len() + self.components().len() == self.vertex_count
    }

    /// Two-coloring if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.vertex_count];
        for start in 0..self.vertex_count {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.adjacency[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    /// Induced subgraph on `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Result<FiniteGraph> {
        let mut index = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.vertex_count {
                return Err(Error::VertexOutOfRange(v));
            }
            index[v] = i;
        }
        let edges = self.edges().filter_map(|(a, b)| {
            (index[a] != usize::MAX && index[b] != usize::MAX).then(|| (index[a], index[b]))
        });
        FiniteGraph::new(vertices.len(), edges)
    }
}
