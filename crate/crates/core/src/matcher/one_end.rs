//! Matching guided by a single end.
//!
//! `f` sends each vertex one step toward the end and `g` is the section
//! choosing, for each vertex, the previous ray vertex when there is one and
//! the least child mapped to it otherwise. The vertices with infinite
//! `g`-history form a line: the ray itself, continued backwards through the
//! least non-ray child of the root and then child 0 forever. Chains with
//! finite history are paired by parity from their origins, which is the
//! layered rule on each piece hanging off that line.

use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, EndDescriptor, TreeVertex};
use crate::matcher::line::LineReport;
use crate::matcher::rooted::{rerooted, Piece};
use crate::matcher::{BSet, EndsOutput};
use crate::matching::{MatchingOracle, Partner};

/// How far back a vertex's `g`-history reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum History {
    /// `v = g^k(w)` for exactly `k` steps and no more.
    Finite(usize),
    /// `v` lies in every image `g^n(X)`.
    Infinite,
}

/// The end's `f`, `g` and the line of vertices with infinite history.
#[derive(Debug, Clone)]
pub struct EndFunction {
    tree: AutomaticTree,
    end: EndDescriptor,
    line: LineReport,
}

impl EndFunction {
    pub fn new(t: &AutomaticTree, e: &EndDescriptor, budget: usize) -> Result<Self> {
        e.validate(t)?;
        let q = t.root_state();
        let first = (0..t.branch(q))
            .find(|&i| i != e.index_at(0))
            .ok_or_else(|| Error::Precondition("the root needs a child off the end".into()))?;
        let back = EndDescriptor::new(vec![first], vec![0])?;
        let line = LineReport::new(t, e, &back, budget)?;
        Ok(EndFunction {
            tree: t.clone(),
            end: e.clone(),
            line,
        })
    }

    pub fn line(&self) -> &LineReport {
        &self.line
    }

    /// One step toward the end.
    pub fn toward_end(&self, v: &TreeVertex) -> Result<TreeVertex> {
        self.tree.state_of(v)?;
        Ok(if self.end.passes_through(v) {
            v.child(self.end.index_at(v.depth()))
        } else {
            v.parent().expect("the root lies on the end")
        })
    }

    /// The section: a preimage of `v` under [`Self::toward_end`].
    pub fn section(&self, v: &TreeVertex) -> Result<TreeVertex> {
        let on_ray = self.end.passes_through(v);
        if on_ray {
            if let Some(p) = v.parent() {
                return Ok(p);
            }
        }
        self.tree
            .children(v)?
            .into_iter()
            .find(|c| !(on_ray && self.end.passes_through(c)))
            .ok_or_else(|| Error::Precondition(format!("{v} has no preimage toward the end")))
    }

    /// Walks `f` from `v` while each step is undone by `g`.
    pub fn history(&self, v: &TreeVertex, budget: usize) -> Result<History> {
        let mut y = v.clone();
        for k in 0..=budget {
            if self.line.contains(&y) {
                return Ok(History::Infinite);
            }
            let up = self.toward_end(&y)?;
            if self.section(&up)? != y {
                return Ok(History::Finite(k));
            }
            y = up;
        }
        Err(Error::BudgetExceeded {
            context: "classifying a g-history".into(),
            budget,
            frontier: vec![v.clone()],
        })
    }
}

/// Line pairing for branching points unbounded on both sides: a branching
/// point whose next branching point lies an odd number of steps ahead is
/// left for its hanging pieces, the points between are paired
/// consecutively after it; otherwise pairing starts at the point itself.
struct Chains {
    f: EndFunction,
}

impl Chains {
    fn absorbed(&self, p: i64) -> bool {
        let line = self.f.line();
        line.is_branching(p) && line.next_branching(p, 1, false).is_some_and(|n| (n - p) % 2 == 1)
    }

    fn line_partner(&self, p: i64) -> Result<TreeVertex> {
        let line = self.f.line();
        if self.absorbed(p) {
            return Piece {
                root: line.vertex(p),
                cut: line.line_neighbors(p),
            }
            .partner(&self.f.tree, &line.vertex(p));
        }
        let a = if line.is_branching(p) { p } else { line.next_branching(p, -1, false).expect("unbounded") };
        let k = p - a;
        let shift = if self.absorbed(a) { k % 2 == 1 } else { k % 2 == 0 };
        Ok(line.vertex(if shift { p + 1 } else { p - 1 }))
    }
}

impl Partner for Chains {
    fn partner(&self, v: &TreeVertex) -> Result<Option<TreeVertex>> {
        let line = self.f.line();
        let t = &self.f.tree;
        t.state_of(v)?;
        if let Some(p) = line.position(v) {
            return self.line_partner(p).map(Some);
        }
        let (a, s) = line.attachment(v);
        let piece = if self.absorbed(a) {
            Piece {
                root: line.vertex(a),
                cut: line.line_neighbors(a),
            }
        } else {
            Piece::subtree(s)
        };
        piece.partner(t, v).map(Some)
    }
}

struct Unmatched;

impl Partner for Unmatched {
    fn partner(&self, _: &TreeVertex) -> Result<Option<TreeVertex>> {
        Ok(None)
    }
}

/// Matching from one selected end. The exceptional set is the injective
/// part of `f`, which is the whole tree when the tree is a bare line and
/// empty otherwise.
pub fn one_end_matching(t: &AutomaticTree, e: &EndDescriptor, budget: usize) -> Result<EndsOutput> {
    t.require_min_degree_two()?;
    let f = EndFunction::new(t, e, budget)?;
    let line = f.line().clone();
    let (lo, hi) = (-(line.negative_branching.horizon() as i64) - 2, line.positive_branching.horizon() as i64 + 2);
    let window = line.branching_in(lo, hi);
    let (b_set, oracle) = if window.is_empty() {
        (BSet::InjectivePart, MatchingOracle::new(Unmatched))
    } else if line.unbounded(1) && line.unbounded(-1) {
        (BSet::Empty, MatchingOracle::new(Chains { f }))
    } else {
        let root = if line.unbounded(1) { window[0] } else { *window.last().unwrap() };
        (BSet::Empty, rerooted(t, line.vertex(root)))
    };
    Ok(EndsOutput {
        ends: vec![e.clone()],
        b_set,
        line: Some(line),
        oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn e(s: &str) -> EndDescriptor {
        s.parse().unwrap()
    }

    fn v<const N: usize>(p: [usize; N]) -> TreeVertex {
        TreeVertex::from(p)
    }

    #[test]
    fn section_inverts_toward_end() {
        let t = catalog::binary();
        let f = EndFunction::new(&t, &e("|0"), 64).unwrap();
        for x in t.vertices_to_depth(5, 1 << 10).unwrap() {
            assert_eq!(f.toward_end(&f.section(&x).unwrap()).unwrap(), x);
        }
        assert_eq!(f.section(&TreeVertex::root()).unwrap(), v([1]));
        assert_eq!(f.section(&v([0, 0])).unwrap(), v([0]));
        assert_eq!(f.section(&v([1, 1])).unwrap(), v([1, 1, 0]));
    }

    #[test]
    fn histories() {
        let t = catalog::binary();
        let f = EndFunction::new(&t, &e("|0"), 64).unwrap();
        assert_eq!(f.history(&v([1, 0, 0]), 64).unwrap(), History::Infinite);
        assert_eq!(f.history(&v([0, 0, 0]), 64).unwrap(), History::Infinite);
        assert_eq!(f.history(&v([1, 1]), 64).unwrap(), History::Finite(0));
        assert_eq!(f.history(&v([1, 1, 0, 0]), 64).unwrap(), History::Finite(2));
        assert_eq!(f.history(&v([0, 1, 0]), 64).unwrap(), History::Finite(1));
    }

    #[test]
    fn bare_line_is_all_injective() {
        let t = catalog::line();
        let out = one_end_matching(&t, &e("|0"), 64).unwrap();
        assert_eq!(out.b_set, BSet::InjectivePart);
        assert_eq!(out.oracle.partner(&v([0, 0])).unwrap(), None);
    }

    #[test]
    fn three_regular_is_total() {
        let t = catalog::three_regular();
        let out = one_end_matching(&t, &e("|0"), 64).unwrap();
        assert_eq!(out.b_set, BSet::Empty);
        out.oracle.check_window(&t, 10, 1 << 14, &|_| false).unwrap();
    }

    #[test]
    fn ray_with_teeth_is_total() {
        let t = catalog::ray_with_teeth();
        let out = one_end_matching(&t, &e("|0"), 64).unwrap();
        assert_eq!(out.b_set, BSet::Empty);
        out.oracle.check_window(&t, 10, 1 << 14, &|_| false).unwrap();
        // root sits in the one even gap and pairs with its tooth child
        assert_eq!(out.oracle.partner(&TreeVertex::root()).unwrap(), Some(v([1])));
    }

    #[test]
    fn one_sided_branching_reroots() {
        // the root's back line is bare, the ray carries teeth
        let t = crate::format::parse_tree(
            "tree\nstate top branch 2\nstate ray branch 2\nstate bare branch 1\nstate tooth branch 2\n\
             root top\ntrans top 0 ray\ntrans top 1 bare\ntrans ray 1 tooth\n",
        )
        .unwrap();
        let out = one_end_matching(&t, &e("|0"), 64).unwrap();
        assert_eq!(out.b_set, BSet::Empty);
        out.oracle.check_window(&t, 10, 1 << 14, &|_| false).unwrap();
    }
}
