use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, TreeVertex};
use crate::matching::{MatchingOracle, Partner};

/// A piece of the tree matched by the layered rule from its own root.
///
/// The piece is the component of `root` after cutting the edges from `root`
/// to the vertices in `cut`. Every vertex other than `root` needs a
/// neighbor farther from `root`, and `root` needs one outside `cut`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub root: TreeVertex,
    pub cut: Vec<TreeVertex>,
}

impl Piece {
    pub fn whole(root: TreeVertex) -> Self {
        Piece { root, cut: Vec::new() }
    }

    /// The subtree below `root`, cut from its parent.
    pub fn subtree(root: TreeVertex) -> Self {
        let cut = root.parent().into_iter().collect();
        Piece { root, cut }
    }

    /// Path from the piece root to `v`, both ends included.
    fn path_to(&self, v: &TreeVertex) -> Result<Vec<TreeVertex>> {
        let l = self.root.common_prefix_len(v);
        let mut path: Vec<TreeVertex> = (l..=self.root.depth()).rev().map(|d| self.root.truncate(d)).collect();
        path.extend((l + 1..=v.depth()).map(|d| v.truncate(d)));
        if let Some(second) = path.get(1) {
            if self.cut.contains(second) {
                return Err(Error::InvariantViolation(format!(
                    "{v} is outside the piece rooted at {}",
                    self.root
                )));
            }
        }
        Ok(path)
    }

    /// First neighbor of `u` in canonical order, skipping `toward` (the
    /// neighbor on the way back to the root) and, at the root, the cut.
    fn first_away(&self, t: &AutomaticTree, u: &TreeVertex, toward: Option<&TreeVertex>) -> Result<TreeVertex> {
        t.neighbors(u)?
            .into_iter()
            .find(|w| Some(w) != toward && (toward.is_some() || !self.cut.contains(w)))
            .ok_or_else(|| Error::Precondition(format!("{u} has no neighbor away from {}", self.root)))
    }

    /// Layered partner: the root takes its first away-neighbor; a vertex
    /// chosen that way by a vertex that matched downward is matched back,
    /// every other vertex takes its own first away-neighbor.
    pub fn partner(&self, t: &AutomaticTree, v: &TreeVertex) -> Result<TreeVertex> {
        let path = self.path_to(v)?;
        let mut down = true;
        let mut choice = self.first_away(t, &path[0], None)?;
        for w in path.windows(2) {
            down = !(down && choice == w[1]);
            choice = self.first_away(t, &w[1], Some(&w[0]))?;
        }
        Ok(if down {
            choice
        } else {
            path[path.len() - 2].clone()
        })
    }
}

struct Rooted {
    tree: AutomaticTree,
}

impl Partner for Rooted {
    fn partner(&self, v: &TreeVertex) -> Result<Option<TreeVertex>> {
        self.tree.state_of(v)?;
        Piece::whole(TreeVertex::root()).partner(&self.tree, v).map(Some)
    }
}

/// The layered matching from the root: the root is matched to its first
/// child, a child chosen by a downward-matched parent is matched back, and
/// every other vertex is matched to its first child.
pub fn rooted_matching(t: &AutomaticTree) -> Result<MatchingOracle> {
    if let Some(q) = (0..t.state_count()).find(|&q| t.branch(q) == 0) {
        return Err(Error::Precondition(format!(
            "state {} has no children",
            t.state_name(q)
        )));
    }
    Ok(MatchingOracle::new(Rooted { tree: t.clone() }))
}

/// The layered matching of the whole tree re-rooted at `root`.
pub(crate) fn rerooted(t: &AutomaticTree, root: TreeVertex) -> MatchingOracle {
    struct Rerooted {
        tree: AutomaticTree,
        piece: Piece,
    }
    impl Partner for Rerooted {
        fn partner(&self, v: &TreeVertex) -> Result<Option<TreeVertex>> {
            self.tree.state_of(v)?;
            self.piece.partner(&self.tree, v).map(Some)
        }
    }
    MatchingOracle::new(Rerooted {
        tree: t.clone(),
        piece: Piece::whole(root),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn v<const N: usize>(p: [usize; N]) -> TreeVertex {
        TreeVertex::from(p)
    }

    #[test]
    fn binary_examples() {
        let m = rooted_matching(&catalog::binary()).unwrap();
        assert_eq!(m.partner(&TreeVertex::root()).unwrap(), Some(v([0])));
        assert_eq!(m.partner(&v([1])).unwrap(), Some(v([1, 0])));
        assert_eq!(m.partner(&v([0, 1])).unwrap(), Some(v([0, 1, 0])));
        assert_eq!(m.partner(&v([0])).unwrap(), Some(TreeVertex::root()));
    }

    #[test]
    fn unary_pairs_consecutively() {
        let m = rooted_matching(&catalog::unary()).unwrap();
        assert_eq!(m.partner(&TreeVertex::root()).unwrap(), Some(v([0])));
        assert_eq!(m.partner(&v([0, 0])).unwrap(), Some(v([0, 0, 0])));
        assert_eq!(m.partner(&v([0, 0, 0])).unwrap(), Some(v([0, 0])));
    }

    #[test]
    fn three_regular_window_is_total() {
        let t = catalog::three_regular();
        rooted_matching(&t).unwrap().check_window(&t, 8, 1 << 14, &|_| false).unwrap();
    }

    #[test]
    fn leaves_violate_the_precondition() {
        let t = crate::format::parse_tree("tree\nstate r branch 2\nstate leaf branch 0\nroot r\ntrans r 1 leaf\n").unwrap();
        assert!(matches!(rooted_matching(&t), Err(Error::Precondition(_))));
    }

    #[test]
    fn rerooting_a_line_pairs_around_the_new_root() {
        let t = catalog::line();
        let m = rerooted(&t, v([0, 0]));
        // away-neighbors of /0/0 are its child first
        assert_eq!(m.partner(&v([0, 0])).unwrap(), Some(v([0, 0, 0])));
        assert_eq!(m.partner(&v([0])).unwrap(), Some(TreeVertex::root()));
        assert_eq!(m.partner(&v([1])).unwrap(), Some(v([1, 0])));
        m.check_window(&t, 8, 1 << 10, &|_| false).unwrap();
    }
}
