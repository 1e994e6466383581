use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, EndDescriptor, Lasso, TreeVertex};

/// A two-ended line through the tree, spanned by two rays from the root
/// that share a prefix and split at the divergence vertex.
///
/// Line vertices carry integer positions: the divergence vertex is 0,
/// positive positions run toward `positive`, negative ones toward
/// `negative`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineReport {
    pub divergence: TreeVertex,
    pub positive: EndDescriptor,
    pub negative: EndDescriptor,
    /// Whether the divergence vertex has degree at least three.
    pub divergence_branching: bool,
    /// Degree-at-least-three flags at positions 1, 2, 3, ...
    pub positive_branching: Lasso<bool>,
    /// Degree-at-least-three flags at positions -1, -2, -3, ...
    pub negative_branching: Lasso<bool>,
    /// Whether two branching line vertices lie at odd distance.
    pub odd_gap: bool,
}

impl LineReport {
    pub fn new(t: &AutomaticTree, positive: &EndDescriptor, negative: &EndDescriptor, budget: usize) -> Result<Self> {
        positive.validate(t)?;
        negative.validate(t)?;
        let d = positive
            .divergence_depth(negative)
            .ok_or_else(|| Error::Precondition(format!("{positive} and {negative} name the same end")))?;
        let divergence = positive.vertex_at(d);
        let flag = |q: usize, _| t.state_degree(q, false) >= 3;
        let mut line = LineReport {
            divergence_branching: t.degree(&divergence)? >= 3,
            divergence,
            positive: positive.clone(),
            negative: negative.clone(),
            positive_branching: positive.profile(t, d + 1, budget, flag)?,
            negative_branching: negative.profile(t, d + 1, budget, flag)?,
            odd_gap: false,
        };
        let (lo, hi) = line.scan_range();
        let mut parities = [false; 2];
        for p in (lo..=hi).filter(|&p| line.is_branching(p)) {
            parities[p.rem_euclid(2) as usize] = true;
        }
        line.odd_gap = parities[0] && parities[1];
        Ok(line)
    }

    pub fn depth(&self) -> usize {
        self.divergence.depth()
    }

    /// Positions beyond which both tails repeat with every parity covered.
    fn scan_range(&self) -> (i64, i64) {
        (
            -(self.negative_branching.horizon() as i64 + 2),
            self.positive_branching.horizon() as i64 + 2,
        )
    }

    pub fn vertex(&self, p: i64) -> TreeVertex {
        let d = self.depth();
        if p >= 0 {
            self.positive.vertex_at(d + p as usize)
        } else {
            self.negative.vertex_at(d + p.unsigned_abs() as usize)
        }
    }

    pub fn position(&self, v: &TreeVertex) -> Option<i64> {
        let d = self.depth();
        if v.depth() < d {
            return None;
        }
        let offset = (v.depth() - d) as i64;
        if self.positive.passes_through(v) {
            Some(offset)
        } else if self.negative.passes_through(v) {
            Some(-offset)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &TreeVertex) -> bool {
        self.position(v).is_some()
    }

    /// Whether the line vertex at `p` has degree at least three.
    pub fn is_branching(&self, p: i64) -> bool {
        match p {
            0 => self.divergence_branching,
            p if p > 0 => self.positive_branching.get(p as usize - 1),
            p => self.negative_branching.get(p.unsigned_abs() as usize - 1),
        }
    }

    /// Whether a tail holds branching vertices arbitrarily far out.
    pub fn unbounded(&self, direction: i64) -> bool {
        let lasso = if direction > 0 {
            &self.positive_branching
        } else {
            &self.negative_branching
        };
        lasso.cycle.iter().any(|&b| b)
    }

    /// The nearest branching position strictly beyond `p` in `direction`
    /// (`+1` or `-1`), optionally restricted to odd distance from `p`.
    pub fn next_branching(&self, p: i64, direction: i64, odd: bool) -> Option<i64> {
        let (lo, hi) = self.scan_range();
        let limit = p.abs() + hi - lo;
        (1..=limit)
            .map(|k| p + direction * k)
            .find(|&b| self.is_branching(b) && (!odd || (b - p).rem_euclid(2) == 1))
    }

    /// Branching positions in `[lo, hi]`.
    pub fn branching_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&p| self.is_branching(p)).collect()
    }

    /// For a vertex off the line: the position of the line vertex it hangs
    /// from and the first vertex of its hanging piece.
    pub fn attachment(&self, v: &TreeVertex) -> (i64, TreeVertex) {
        if !self.divergence.is_prefix_of(v) {
            let above = self.divergence.parent().expect("off-line vertices above the line exist only below the root");
            return (0, above);
        }
        let mut k = v.depth();
        while self.position(&v.truncate(k)).is_none() {
            k -= 1;
        }
        (self.position(&v.truncate(k)).unwrap(), v.truncate(k + 1))
    }

    /// Line neighbors of the line vertex at `p`.
    pub fn line_neighbors(&self, p: i64) -> Vec<TreeVertex> {
        vec![self.vertex(p - 1), self.vertex(p + 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn e(s: &str) -> EndDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn positions_on_the_bare_line() {
        let t = catalog::line();
        let l = LineReport::new(&t, &e("|0"), &e("1|0"), 64).unwrap();
        assert_eq!(l.divergence, TreeVertex::root());
        assert_eq!(l.vertex(2), TreeVertex::from([0, 0]));
        assert_eq!(l.vertex(-2), TreeVertex::from([1, 0]));
        assert_eq!(l.position(&TreeVertex::from([1, 0, 0])), Some(-3));
        assert!(!l.odd_gap);
        assert!(!l.unbounded(1));
        assert_eq!(l.next_branching(0, 1, false), None);
    }

    #[test]
    fn comb_gaps() {
        let odd = LineReport::new(&catalog::odd_comb(), &e("|0"), &e("1|0"), 64).unwrap();
        assert!(odd.odd_gap);
        let even = LineReport::new(&catalog::even_comb(), &e("|0"), &e("1|0"), 64).unwrap();
        assert!(!even.odd_gap);
        assert_eq!(even.branching_in(-4, 4), vec![-4, -2, 0, 2, 4]);
        assert_eq!(even.next_branching(0, 1, true), None);
        let mixed = LineReport::new(&catalog::mixed_period(), &e("|0"), &e("1|0"), 64).unwrap();
        assert_eq!(mixed.branching_in(-6, 6), vec![-6, -3, 0, 3, 6]);
        assert_eq!(mixed.next_branching(0, 1, true), Some(3));
        assert_eq!(mixed.next_branching(3, 1, true), Some(6));
        assert_eq!(mixed.next_branching(3, 1, false), Some(6));
    }

    #[test]
    fn attachments() {
        let t = catalog::binary();
        let l = LineReport::new(&t, &e("0,0|0"), &e("0,1|0"), 64).unwrap();
        assert_eq!(l.divergence, TreeVertex::from([0]));
        assert_eq!(l.attachment(&TreeVertex::from([1, 1])), (0, TreeVertex::root()));
        assert_eq!(
            l.attachment(&TreeVertex::from([0, 1, 0, 1, 1])),
            (-2, TreeVertex::from([0, 1, 0, 1]))
        );
    }

    #[test]
    fn same_end_is_rejected() {
        let t = catalog::binary();
        assert!(LineReport::new(&t, &e("|0"), &e("0|0"), 64).is_err());
    }
}
