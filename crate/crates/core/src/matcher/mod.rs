//! Perfect matchings of infinite trees: layered matchings from a root,
//! matchings guided by one, two or several selected ends, and matchings of
//! graphs generated by fixed-point-free permutations.

mod bijection;
mod line;
mod many_end;
mod one_end;
mod rooted;
mod two_end;

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

pub use bijection::{bijection_graph_matching, cycles, BijectionMatching};
pub use line::LineReport;
pub use many_end::{many_end_matching, median};
pub use one_end::{one_end_matching, EndFunction, History};
pub use rooted::{rooted_matching, Piece};
pub use two_end::two_end_matching;

use crate::error::{Error, Result};
use crate::graph::{has_bad_ray, AutomaticTree, EndDescriptor, TreeVertex};
use crate::matching::MatchingOracle;

/// The exceptional set left unmatched by an end-guided matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BSet {
    Empty,
    /// Every vertex: the tree is a bare line and `f` is injective.
    InjectivePart,
    /// The line spanned by two ends, which has no odd gap.
    Line,
}

#[derive(Debug, Clone)]
pub struct EndsOutput {
    /// The ends actually used, deduplicated and in canonical order.
    pub ends: Vec<EndDescriptor>,
    pub b_set: BSet,
    /// The line the construction worked along, if any.
    pub line: Option<LineReport>,
    pub oracle: MatchingOracle,
}

impl EndsOutput {
    pub fn in_b(&self, v: &TreeVertex) -> bool {
        match self.b_set {
            BSet::Empty => false,
            BSet::InjectivePart => true,
            BSet::Line => self.line.as_ref().is_some_and(|l| l.contains(v)),
        }
    }
}

/// Window checks of the four conclusions about the exceptional set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conclusions {
    /// Every B vertex has exactly two neighbors in B.
    pub two_regular: bool,
    /// B meets the window in at most one connected piece.
    pub one_component: bool,
    /// No two branching B vertices lie at odd distance.
    pub no_odd_pair: bool,
    /// The oracle is perfect off B.
    pub perfect_off_b: bool,
    /// B is empty whenever the tree has no bad ray.
    pub empty_without_bad_ray: bool,
}

impl Conclusions {
    pub fn all(&self) -> bool {
        self.two_regular && self.one_component && self.no_odd_pair && self.perfect_off_b && self.empty_without_bad_ray
    }
}

fn compare_rays(a: &EndDescriptor, b: &EndDescriptor) -> Ordering {
    match a.divergence_depth(b) {
        Some(d) => a.index_at(d).cmp(&b.index_at(d)),
        None => Ordering::Equal,
    }
}

/// Validates, sorts by index sequence and drops repeated ends.
pub fn canonical_ends(t: &AutomaticTree, ends: &[EndDescriptor]) -> Result<Vec<EndDescriptor>> {
    for e in ends {
        e.validate(t)?;
    }
    let mut out = ends.to_vec();
    out.sort_by(compare_rays);
    out.dedup_by(|a, b| compare_rays(a, b) == Ordering::Equal);
    Ok(out)
}

/// Dispatches on the number of distinct ends.
pub fn match_ends_unchecked(t: &AutomaticTree, ends: &[EndDescriptor], budget: usize) -> Result<EndsOutput> {
    let ends = canonical_ends(t, ends)?;
    match ends.as_slice() {
        [] => Err(Error::Precondition("at least one end is required".into())),
        [e] => one_end_matching(t, e, budget),
        [e1, e2] => two_end_matching(t, e1, e2, budget),
        _ => many_end_matching(t, &ends),
    }
}

/// Checks the conclusions on the window of depth `depth`.
pub fn verify_conclusions(t: &AutomaticTree, out: &EndsOutput, depth: usize, budget: usize) -> Result<Conclusions> {
    let w = t.window(depth, budget)?;
    let in_b: Vec<bool> = w.labels.iter().map(|v| out.in_b(v)).collect();

    let mut two_regular = true;
    for v in w.labels.iter().filter(|v| out.in_b(v)) {
        two_regular &= t.neighbors(v)?.iter().filter(|u| out.in_b(u)).count() == 2;
    }

    let members: Vec<usize> = (0..in_b.len()).filter(|&i| in_b[i]).collect();
    let one_component = match members.first() {
        None => true,
        Some(&start) => {
            let mut seen = vec![false; in_b.len()];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut reached = 1;
            while let Some(x) = queue.pop_front() {
                for &y in w.graph.neighbors(x)? {
                    if in_b[y] && !seen[y] {
                        seen[y] = true;
                        reached += 1;
                        queue.push_back(y);
                    }
                }
            }
            reached == members.len()
        }
    };

    let mut parities = BTreeSet::new();
    for &i in &members {
        if t.degree(&w.labels[i])? >= 3 {
            parities.insert(w.labels[i].depth() % 2);
        }
    }
    let line_ok = match (out.b_set, &out.line) {
        (BSet::Line, Some(line)) => !line.odd_gap,
        _ => true,
    };
    let no_odd_pair = parities.len() <= 1 && line_ok;

    let perfect_off_b = out
        .oracle
        .check_window(t, depth, budget, &|v: &TreeVertex| out.in_b(v))
        .is_ok();

    let empty_without_bad_ray = has_bad_ray(t) || out.b_set == BSet::Empty;

    Ok(Conclusions {
        two_regular,
        one_component,
        no_odd_pair,
        perfect_off_b,
        empty_without_bad_ray,
    })
}

/// Matches from the selected ends and checks the conclusions on the window
/// of depth `depth`; a failed check is reported as an invariant violation.
pub fn match_ends(t: &AutomaticTree, ends: &[EndDescriptor], depth: usize, budget: usize) -> Result<EndsOutput> {
    let out = match_ends_unchecked(t, ends, budget)?;
    let c = verify_conclusions(t, &out, depth, budget)?;
    if !c.all() {
        return Err(Error::InvariantViolation(format!("conclusions fail on the depth-{depth} window: {c:?}")));
    }
    Ok(out)
}
