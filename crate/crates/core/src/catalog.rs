//! A fixed battery of automatic trees used by tests, the acceptance suite
//! and the CLI's `--preset` flag.

use crate::format::parse_tree;
use crate::graph::{AutomaticTree, EndDescriptor};

/// A catalogued tree with end lists of sizes one, two and three.
#[derive(Debug, Clone)]
pub struct NamedTree {
    pub name: &'static str,
    pub tree: AutomaticTree,
    pub ends: Vec<Vec<EndDescriptor>>,
}

fn load(text: &str) -> AutomaticTree {
    parse_tree(text).expect("catalogued trees are well formed")
}

fn ends(lists: &[&[&str]]) -> Vec<Vec<EndDescriptor>> {
    lists
        .iter()
        .map(|l| l.iter().map(|s| s.parse().expect("catalogued end")).collect())
        .collect()
}

/// A one-ended ray: the root has one child, every other vertex has one child.
pub fn unary() -> AutomaticTree {
    load("tree\nstate r branch 1\nstate a branch 1\nroot r\ntrans r 0 a\n")
}

/// Every vertex has two children (root degree 2, others degree 3).
pub fn binary() -> AutomaticTree {
    load("tree\nstate b branch 2\nroot b\n")
}

/// The 3-regular tree: ternary root, binary body.
pub fn three_regular() -> AutomaticTree {
    load(
        "tree\nstate top branch 3\nstate body branch 2\nroot top\n\
         trans top 0 body\ntrans top 1 body\ntrans top 2 body\n",
    )
}

/// The two-ended line: every vertex has degree 2.
pub fn line() -> AutomaticTree {
    load("tree\nstate top branch 2\nstate body branch 1\nroot top\ntrans top 0 body\ntrans top 1 body\n")
}

/// A two-ended line with an infinite binary tooth at every line vertex.
pub fn odd_comb() -> AutomaticTree {
    load(
        "tree\nstate top branch 3\nstate line branch 2\nstate tooth branch 2\nroot top\n\
         trans top 0 line\ntrans top 1 line\ntrans top 2 tooth\ntrans line 1 tooth\n",
    )
}

/// A two-ended line with binary teeth only at even positions, so line
/// degrees alternate 3, 2, 3, 2, ...
pub fn even_comb() -> AutomaticTree {
    load(
        "tree\nstate top branch 3\nstate odd branch 1\nstate even branch 2\nstate tooth branch 2\n\
         root top\ntrans top 0 odd\ntrans top 1 odd\ntrans top 2 tooth\n\
         trans odd 0 even\ntrans even 0 odd\ntrans even 1 tooth\n",
    )
}

/// A two-ended line with a tooth at every third position.
pub fn mixed_period() -> AutomaticTree {
    load(
        "tree\nstate top branch 3\nstate p1 branch 1\nstate p2 branch 1\nstate p0 branch 2\n\
         state tooth branch 2\nroot top\ntrans top 0 p1\ntrans top 1 p1\ntrans top 2 tooth\n\
         trans p1 0 p2\ntrans p2 0 p0\ntrans p0 0 p1\ntrans p0 1 tooth\n",
    )
}

/// A one-ended ray whose every vertex carries a pendant full binary tree.
pub fn ray_with_teeth() -> AutomaticTree {
    load("tree\nstate ray branch 2\nstate tooth branch 2\nroot ray\ntrans ray 1 tooth\n")
}

/// A degree-one root above a binary body.
pub fn pendant_root() -> AutomaticTree {
    load("tree\nstate r branch 1\nstate body branch 2\nroot r\ntrans r 0 body\n")
}

/// Trees on which rooted matching applies (every vertex has a child).
pub fn battery() -> Vec<NamedTree> {
    vec![
        NamedTree {
            name: "unary",
            tree: unary(),
            ends: ends(&[&["|0"]]),
        },
        NamedTree {
            name: "binary",
            tree: binary(),
            ends: ends(&[&["|0"], &["|0", "1|0"], &["|0", "1|0", "0,1|0"]]),
        },
        NamedTree {
            name: "three-regular",
            tree: three_regular(),
            ends: ends(&[&["|0"], &["|0", "1|0"], &["0|0", "1|0", "2|0"]]),
        },
        NamedTree {
            name: "line",
            tree: line(),
            ends: ends(&[&["|0"], &["|0", "1|0"]]),
        },
        NamedTree {
            name: "odd-comb",
            tree: odd_comb(),
            ends: ends(&[&["|0"], &["|0", "1|0"], &["|0", "1|0", "2|0"]]),
        },
        NamedTree {
            name: "even-comb",
            tree: even_comb(),
            ends: ends(&[&["|0"], &["|0", "1|0"], &["|0", "1|0", "2|0"]]),
        },
        NamedTree {
            name: "mixed-period",
            tree: mixed_period(),
            ends: ends(&[&["|0"], &["|0", "1|0"], &["|0", "1|0", "2|0"]]),
        },
        NamedTree {
            name: "ray-with-teeth",
            tree: ray_with_teeth(),
            ends: ends(&[&["|0"], &["|0", "1|0"], &["|0", "1|0", "0,1|0"]]),
        },
    ]
}

pub fn by_name(name: &str) -> Option<AutomaticTree> {
    match name {
        "pendant-root" => Some(pendant_root()),
        _ => battery().into_iter().find(|t| t.name == name).map(|t| t.tree),
    }
}
