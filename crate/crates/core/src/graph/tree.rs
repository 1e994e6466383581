use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;

/// A vertex of an [`AutomaticTree`], named by its child-index path from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TreeVertex(Vec<usize>);

impl TreeVertex {
    pub fn root() -> Self {
        TreeVertex(Vec::new())
    }

    pub fn new(path: Vec<usize>) -> Self {
        TreeVertex(path)
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parent(&self) -> Option<TreeVertex> {
        let (_, rest) = self.0.split_last()?;
        Some(TreeVertex(rest.to_vec()))
    }

    pub fn last_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn child(&self, index: usize) -> TreeVertex {
        let mut path = self.0.clone();
        path.push(index);
        TreeVertex(path)
    }

    /// The ancestor (or self) at the given depth.
    pub fn truncate(&self, depth: usize) -> TreeVertex {
        TreeVertex(self.0[..depth.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &TreeVertex) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn common_prefix_len(&self, other: &TreeVertex) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Distance in the tree: `|u| + |v| - 2|lcp(u, v)|`.
    pub fn distance(&self, other: &TreeVertex) -> usize {
        self.depth() + other.depth() - 2 * self.common_prefix_len(other)
    }

    pub fn is_adjacent(&self, other: &TreeVertex) -> bool {
        self.parent().as_ref() == Some(other) || other.parent().as_ref() == Some(self)
    }
}

impl From<Vec<usize>> for TreeVertex {
    fn from(path: Vec<usize>) -> Self {
        TreeVertex(path)
    }
}

impl<const N: usize> From<[usize; N]> for TreeVertex {
    fn from(path: [usize; N]) -> Self {
        TreeVertex(path.to_vec())
    }
}

/// Shortlex: shallower vertices first, then lexicographic by path.
impl Ord for TreeVertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for TreeVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for (i, index) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{index}")?;
        }
        Ok(())
    }
}

/// A rooted, locally finite tree presented by a finite-state branching machine.
///
/// A vertex in state `q` has `branch(q)` children, the `i`-th of which is in
/// state `step(q, i)`. The root has degree `branch(root_state)`; every other
/// vertex in state `q` has degree `1 + branch(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomaticTree {
    names: Vec<String>,
    branch: Vec<usize>,
    step: Vec<Vec<usize>>,
    root: usize,
}

impl AutomaticTree {
    /// Builds a presentation; `step[q]` must have exactly `branch[q]` entries,
    /// all in range, and every state must be reachable from `root`.
    pub fn new(names: Vec<String>, step: Vec<Vec<usize>>, root: usize) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidTree("no states".into()));
        }
        if step.len() != n {
            return Err(Error::InvalidTree(format!(
                "{} states but {} transition rows",
                n,
                step.len()
            )));
        }
        if root >= n {
            return Err(Error::InvalidTree(format!("root state {root} out of range")));
        }
        for (q, row) in step.iter().enumerate() {
            if let Some(&bad) = row.iter().find(|&&r| r >= n) {
                return Err(Error::InvalidTree(format!(
                    "state {} steps to unknown state {bad}",
                    names[q]
                )));
            }
        }
        let branch = step.iter().map(Vec::len).collect();
        let tree = AutomaticTree {
            names,
            branch,
            step,
            root,
        };
        let reachable = tree.reachable_from(&[root]);
        if let Some(q) = (0..n).find(|&q| !reachable[q]) {
            return Err(Error::InvalidTree(format!(
                "state {} is unreachable from the root",
                tree.names[q]
            )));
        }
        Ok(tree)
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn root_state(&self) -> usize {
        self.root
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn branch(&self, q: usize) -> usize {
        self.branch[q]
    }

    pub fn step(&self, q: usize, index: usize) -> usize {
        self.step[q][index]
    }

    fn reachable_from(&self, starts: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue: VecDeque<usize> = starts.iter().copied().collect();
        for &s in starts {
            seen[s] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &r in &self.step[q] {
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// States carried by at least one non-root vertex.
    pub fn non_root_states(&self) -> Vec<usize> {
        let seen = self.reachable_from(&self.step[self.root]);
        (0..self.state_count()).filter(|&q| seen[q]).collect()
    }

    /// Degree of a vertex in state `q`.
    pub fn state_degree(&self, q: usize, is_root: bool) -> usize {
        self.branch[q] + usize::from(!is_root)
    }

    /// Smallest degree over all vertices.
    pub fn min_degree(&self) -> usize {
        self.non_root_states()
            .into_iter()
            .map(|q| self.state_degree(q, false))
            .chain([self.state_degree(self.root, true)])
            .min()
            .unwrap_or(0)
    }

    /// Fails unless every vertex has degree at least two.
    pub fn require_min_degree_two(&self) -> Result<()> {
        if self.min_degree() < 2 {
            return Err(Error::Precondition(
                "the tree must have degree at least two everywhere".into(),
            ));
        }
        Ok(())
    }

    pub fn state_of(&self, v: &TreeVertex) -> Result<usize> {
        let mut q = self.root;
        for &i in v.path() {
            if i >= self.branch[q] {
                return Err(Error::InvalidTreeVertex(v.clone()));
            }
            q = self.step[q][i];
        }
        Ok(q)
    }

    pub fn contains(&self, v: &TreeVertex) -> bool {
        self.state_of(v).is_ok()
    }

    pub fn degree(&self, v: &TreeVertex) -> Result<usize> {
        Ok(self.state_degree(self.state_of(v)?, v.is_root()))
    }

    pub fn children(&self, v: &TreeVertex) -> Result<Vec<TreeVertex>> {
        let q = self.state_of(v)?;
        Ok((0..self.branch[q]).map(|i| v.child(i)).collect())
    }

    /// Neighbors in the canonical order: children by index, then the parent.
    pub fn neighbors(&self, v: &TreeVertex) -> Result<Vec<TreeVertex>> {
        let mut out = self.children(v)?;
        out.extend(v.parent());
        Ok(out)
    }

    pub fn tree_distance(&self, u: &TreeVertex, v: &TreeVertex) -> Result<usize> {
        self.state_of(u)?;
        self.state_of(v)?;
        Ok(u.distance(v))
    }

    /// All vertices of depth at most `depth`, in shortlex order.
    pub fn vertices_to_depth(&self, depth: usize, budget: usize) -> Result<Vec<TreeVertex>> {
        let mut out = vec![TreeVertex::root()];
        let mut level = vec![(TreeVertex::root(), self.root)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (v, q) in &level {
                for (i, &r) in self.step[*q].iter().enumerate() {
                    next.push((v.child(i), r));
                }
            }
            if out.len() + next.len() > budget {
                return Err(Error::BudgetExceeded {
                    context: format!("materializing a depth-{depth} window"),
                    budget,
                    frontier: next.into_iter().map(|(v, _)| v).take(16).collect(),
                });
            }
            out.extend(next.iter().map(|(v, _)| v.clone()));
            level = next;
        }
        Ok(out)
    }

    /// The induced subgraph on vertices of depth at most `depth`.
    pub fn window(&self, depth: usize, budget: usize) -> Result<Window> {
        let labels = self.vertices_to_depth(depth, budget)?;
        let index: HashMap<TreeVertex, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let edges = labels
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.parent().map(|p| (index[&p], i)));
        let graph = FiniteGraph::new(labels.len(), edges)?;
        Ok(Window {
            depth,
            graph,
            labels,
            index,
        })
    }
}

/// A finite window of an [`AutomaticTree`] with its label table.
#[derive(Debug, Clone)]
pub struct Window {
    pub depth: usize,
    pub graph: FiniteGraph,
    pub labels: Vec<TreeVertex>,
    pub index: HashMap<TreeVertex, usize>,
}

impl Window {
    pub fn id(&self, v: &TreeVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn label(&self, id: usize) -> &TreeVertex {
        &self.labels[id]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn degrees_of_three_regular_tree() {
        let t = catalog::three_regular();
        assert_eq!(t.degree(&TreeVertex::root()).unwrap(), 3);
        assert_eq!(t.degree(&[0, 1].into()).unwrap(), 3);
        assert!(t.degree(&[3].into()).is_err());
    }

    #[test]
    fn distances() {
        let t = catalog::three_regular();
        let root = TreeVertex::root();
        assert_eq!(t.tree_distance(&root, &root).unwrap(), 0);
        assert_eq!(t.tree_distance(&root, &[0, 1].into()).unwrap(), 2);
        assert_eq!(t.tree_distance(&[0].into(), &[1, 1].into()).unwrap(), 3);
    }

    #[test]
    fn distance_matches_bfs_on_window() {
        let t = catalog::three_regular();
        let w = t.window(4, 1 << 12).unwrap();
        let src = w.id(&[0].into()).unwrap();
        let mut dist = vec![usize::MAX; w.graph.vertex_count()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &x in w.graph.neighbors(u).unwrap() {
                if dist[x] == usize::MAX {
                    dist[x] = dist[u] + 1;
                    queue.push_back(x);
                }
            }
        }
        assert_eq!(dist[w.id(&[1, 1].into()).unwrap()], 3);
        for (i, v) in w.labels.iter().enumerate() {
            assert_eq!(dist[i], v.distance(&[0].into()));
        }
    }

    #[test]
    fn window_sizes() {
        let t = catalog::three_regular();
        let w0 = t.window(0, 100).unwrap();
        assert_eq!((w0.graph.vertex_count(), w0.graph.edge_count()), (1, 0));
        let w1 = t.window(1, 100).unwrap();
        assert_eq!((w1.graph.vertex_count(), w1.graph.edge_count()), (4, 3));
        // 1 + 3 + 3*2 + 3*2*2 by the branching recurrence.
        assert_eq!(t.window(3, 100).unwrap().graph.vertex_count(), 22);
        assert!(matches!(t.window(3, 21), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn shortlex_order() {
        let mut vs: Vec<TreeVertex> = vec![[1].into(), [0, 0].into(), TreeVertex::root(), [0].into()];
        vs.sort();
        assert_eq!(
            vs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["/", "0", "1", "0/0"]
        );
    }

    #[test]
    fn rejects_unreachable_states() {
        let err = AutomaticTree::new(vec!["a".into(), "b".into()], vec![vec![0], vec![1]], 0);
        assert!(matches!(err, Err(Error::InvalidTree(_))));
    }
}
