//! Matching guided by two ends.
//!
//! The two ends span a line. When two branching line vertices lie at odd
//! distance, a set `U` of branching vertices with odd consecutive gaps is
//! chosen: starting from the branching vertex that ends an odd gap nearest
//! the divergence vertex (ties toward the first end), repeatedly take the
//! nearest branching vertex at odd distance in each direction. Points of
//! `U` are matched into their hanging pieces, the even runs between them
//! and the tails beyond the last ones are paired consecutively. Otherwise
//! the line is left unmatched and only the hanging pieces are matched.

use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, EndDescriptor, TreeVertex};
use crate::matcher::line::LineReport;
use crate::matcher::rooted::Piece;
use crate::matcher::{BSet, EndsOutput};
use crate::matching::{MatchingOracle, Partner};

struct TwoEnds {
    tree: AutomaticTree,
    line: LineReport,
    /// First point of `U`; `None` when the line stays unmatched.
    anchor: Option<i64>,
}

impl TwoEnds {
    /// Nearest points of `U` at or below and at or above `p`.
    fn bracket(&self, anchor: i64, p: i64) -> (Option<i64>, Option<i64>) {
        let direction = if p >= anchor { 1 } else { -1 };
        let mut last = anchor;
        loop {
            if last == p {
                return (Some(p), Some(p));
            }
            match self.line.next_branching(last, direction, true) {
                Some(next) if (next - p) * direction <= 0 => last = next,
                beyond => {
                    return if direction > 0 { (Some(last), beyond) } else { (beyond, Some(last)) };
                }
            }
        }
    }

    fn in_u(&self, p: i64) -> bool {
        self.anchor.is_some_and(|a| self.bracket(a, p) == (Some(p), Some(p)))
    }

    fn absorbing_piece(&self, p: i64) -> Piece {
        Piece {
            root: self.line.vertex(p),
            cut: self.line.line_neighbors(p),
        }
    }

    fn line_partner(&self, anchor: i64, p: i64) -> Result<TreeVertex> {
        let target = match self.bracket(anchor, p) {
            (Some(lo), Some(hi)) if lo == p && hi == p => {
                return self.absorbing_piece(p).partner(&self.tree, &self.line.vertex(p));
            }
            (Some(lo), _) => {
                if (p - lo) % 2 == 1 {
                    p + 1
                } else {
                    p - 1
                }
            }
            (None, Some(hi)) => {
                if (hi - p) % 2 == 1 {
                    p - 1
                } else {
                    p + 1
                }
            }
            (None, None) => unreachable!("the anchor belongs to U"),
        };
        Ok(self.line.vertex(target))
    }
}

impl Partner for TwoEnds {
    fn partner(&self, v: &TreeVertex) -> Result<Option<TreeVertex>> {
        self.tree.state_of(v)?;
        if let Some(p) = self.line.position(v) {
            return match self.anchor {
                Some(anchor) => self.line_partner(anchor, p).map(Some),
                None => Ok(None),
            };
        }
        let (a, s) = self.line.attachment(v);
        let piece = if self.in_u(a) {
            self.absorbing_piece(a)
        } else {
            Piece::subtree(s)
        };
        piece.partner(&self.tree, v).map(Some)
    }
}

/// The branching vertex nearest the divergence vertex that has a branching
/// neighbor along the line at odd distance.
fn choose_anchor(line: &LineReport) -> Option<i64> {
    if !line.odd_gap {
        return None;
    }
    let ends_odd_gap = |p: i64| {
        line.is_branching(p)
            && [1, -1].into_iter().any(|dir| {
                line.next_branching(p, dir, false)
                    .is_some_and(|n| (n - p).rem_euclid(2) == 1)
            })
    };
    (0..).flat_map(|k: i64| [k, -k]).find(|&p| ends_odd_gap(p))
}

pub fn two_end_matching(
    t: &AutomaticTree,
    e1: &EndDescriptor,
    e2: &EndDescriptor,
    budget: usize,
) -> Result<EndsOutput> {
    t.require_min_degree_two()?;
    if e1.validate(t).is_ok() && e2.validate(t).is_ok() && e1.divergence_depth(e2).is_none() {
        return Err(Error::Precondition(format!("{e1} and {e2} name the same end")));
    }
    let line = LineReport::new(t, e1, e2, budget)?;
    let anchor = choose_anchor(&line);
    let b_set = if anchor.is_some() { BSet::Empty } else { BSet::Line };
    let oracle = MatchingOracle::new(TwoEnds {
        tree: t.clone(),
        line: line.clone(),
        anchor,
    });
    Ok(EndsOutput {
        ends: vec![e1.clone(), e2.clone()],
        b_set,
        line: Some(line),
        oracle,
    })
}
