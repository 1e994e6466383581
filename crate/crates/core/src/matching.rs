use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, FiniteGraph, TreeVertex};

/// A finite partial involution on vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Matching {
    partner: BTreeMap<usize, usize>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Result<Self> {
        let mut m = Matching::new();
        for (a, b) in pairs {
            m.insert(a, b)?;
        }
        Ok(m)
    }

    /// Adds the pair `{a, b}`; re-adding an existing pair is a no-op.
    pub fn insert(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::InvariantViolation(format!("vertex {a} matched to itself")));
        }
        for (x, y) in [(a, b), (b, a)] {
            if let Some(&p) = self.partner.get(&x) {
                if p != y {
                    return Err(Error::InvariantViolation(format!(
                        "vertex {x} already matched to {p}"
                    )));
                }
            }
        }
        self.partner.insert(a, b);
        self.partner.insert(b, a);
        Ok(())
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.partner.get(&v).copied()
    }

    pub fn covers(&self, v: usize) -> bool {
        self.partner.contains_key(&v)
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// Pairs `(a, b)` with `a < b`, in increasing order of `a`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner.iter().filter(|(a, b)| a < b).map(|(&a, &b)| (a, b))
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.partner.keys().copied()
    }

    pub fn contains_pair(&self, a: usize, b: usize) -> bool {
        self.partner(a) == Some(b)
    }

    /// Every pair is an edge of `g`.
    pub fn validate(&self, g: &FiniteGraph) -> Result<()> {
        match self.pairs().find(|&(a, b)| !g.has_edge(a, b)) {
            Some((a, b)) => Err(Error::InvariantViolation(format!("pair {a}-{b} is not an edge"))),
            None => Ok(()),
        }
    }

    pub fn is_perfect(&self, g: &FiniteGraph) -> bool {
        self.validate(g).is_ok() && (0..g.vertex_count()).all(|v| self.covers(v))
    }

    /// Same pairs with vertex ids renamed through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Result<Matching> {
        Matching::from_pairs(self.pairs().map(|(a, b)| (map(a), map(b))))
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Partner function of a matching on an infinite tree.
pub trait Partner: Send + Sync {
    /// `None` when `v` is outside the matching's domain.
    fn partner(&self, v: &TreeVertex) -> Result<Option<TreeVertex>>;
}

/// A queryable matching of an [`AutomaticTree`].
///
/// Queries are pure: asking twice gives the same answer.
#[derive(Clone)]
pub struct MatchingOracle {
    inner: Arc<dyn Partner>,
}

impl fmt::Debug for MatchingOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MatchingOracle")
    }
}

struct EmptyDomain;

impl Partner for EmptyDomain {
    fn partner(&self, _: &TreeVertex) -> Result<Option<TreeVertex>> {
        Ok(None)
    }
}

impl MatchingOracle {
    pub fn new<P: Partner + 'static>(p: P) -> Self {
        MatchingOracle { inner: Arc::new(p) }
    }

    pub fn empty() -> Self {
        Self::new(EmptyDomain)
    }

    pub fn partner(&self, v: &TreeVertex) -> Result<Option<TreeVertex>> {
        self.inner.partner(v)
    }

    pub fn in_domain(&self, v: &TreeVertex) -> Result<bool> {
        Ok(self.partner(v)?.is_some())
    }

    /// Pairs with at least one endpoint of depth at most `depth`, each listed
    /// once with the shortlex-smaller endpoint first, in shortlex order.
    pub fn window_pairs(
        &self,
        t: &AutomaticTree,
        depth: usize,
        budget: usize,
    ) -> Result<Vec<(TreeVertex, TreeVertex)>> {
        let mut out = Vec::new();
        for v in t.vertices_to_depth(depth, budget)? {
            if let Some(p) = self.partner(&v)? {
                if v < p || p.depth() > depth {
                    out.push(if v < p { (v, p) } else { (p, v) });
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Checks on every vertex of depth at most `depth`: vertices in
    /// `excluded` are unmatched, every other vertex is matched along a tree
    /// edge to a non-excluded vertex that points back.
    pub fn check_window(
        &self,
        t: &AutomaticTree,
        depth: usize,
        budget: usize,
        excluded: &dyn Fn(&TreeVertex) -> bool,
    ) -> Result<()> {
        for v in t.vertices_to_depth(depth, budget)? {
            let p = self.partner(&v)?;
            match (excluded(&v), p) {
                (true, None) => {}
                (true, Some(p)) => {
                    return Err(Error::InvariantViolation(format!(
                        "{v} is excluded but matched to {p}"
                    )))
                }
                (false, None) => {
                    return Err(Error::InvariantViolation(format!("{v} is unmatched")))
                }
                (false, Some(p)) => {
                    if !t.contains(&p) || !v.is_adjacent(&p) {
                        return Err(Error::InvariantViolation(format!(
                            "{v} matched to non-neighbor {p}"
                        )));
                    }
                    if excluded(&p) {
                        return Err(Error::InvariantViolation(format!(
                            "{v} matched into the excluded vertex {p}"
                        )));
                    }
                    let back = self.partner(&p)?;
                    if back.as_ref() != Some(&v) {
                        return Err(Error::InvariantViolation(format!(
                            "{v} -> {p} but {p} -> {back:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
