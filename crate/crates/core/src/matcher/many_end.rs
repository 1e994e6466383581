use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, EndDescriptor, TreeVertex};
use crate::matcher::rooted::rerooted;
use crate::matcher::{BSet, EndsOutput};

/// The vertex where the rays of the first three ends separate: the deepest
/// of their three pairwise divergence vertices.
pub fn median(ends: &[EndDescriptor]) -> Result<TreeVertex> {
    let [a, b, c] = match ends {
        [a, b, c, ..] => [a, b, c],
        _ => return Err(Error::Precondition("at least three ends are required".into())),
    };
    [(a, b), (a, c), (b, c)]
        .into_iter()
        .map(|(x, y)| {
            x.divergence_depth(y)
                .map(|d| x.vertex_at(d))
                .ok_or_else(|| Error::Precondition(format!("{x} and {y} name the same end")))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().max_by_key(TreeVertex::depth).unwrap())
}

/// With three or more ends the tree has a canonical vertex; the layered
/// matching re-rooted there is perfect.
pub fn many_end_matching(t: &AutomaticTree, ends: &[EndDescriptor]) -> Result<EndsOutput> {
    t.require_min_degree_two()?;
    for e in ends {
        e.validate(t)?;
    }
    let root = median(ends)?;
    Ok(EndsOutput {
        ends: ends.to_vec(),
        b_set: BSet::Empty,
        line: None,
        oracle: rerooted(t, root),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn ends(list: &[&str]) -> Vec<EndDescriptor> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn symmetric_median_is_the_root() {
        let t = catalog::three_regular();
        let e = ends(&["0|0", "1|0", "2|0"]);
        assert_eq!(median(&e).unwrap(), TreeVertex::root());
        many_end_matching(&t, &e).unwrap().oracle.check_window(&t, 8, 1 << 14, &|_| false).unwrap();
    }

    #[test]
    fn shared_prefix_moves_the_median() {
        let t = catalog::three_regular();
        let e = ends(&["0,0|0", "0,1|0", "1|0"]);
        assert_eq!(median(&e).unwrap(), TreeVertex::from([0]));
        many_end_matching(&t, &e).unwrap().oracle.check_window(&t, 8, 1 << 14, &|_| false).unwrap();
    }

    #[test]
    fn extra_ends_are_ignored() {
        let t = catalog::binary();
        let three = many_end_matching(&t, &ends(&["|0", "1|0", "0,1|0"])).unwrap();
        let four = many_end_matching(&t, &ends(&["|0", "1|0", "0,1|0", "1,1|0"])).unwrap();
        for v in t.vertices_to_depth(6, 1 << 10).unwrap() {
            assert_eq!(three.oracle.partner(&v).unwrap(), four.oracle.partner(&v).unwrap());
        }
    }
}
