use proptest::prelude::*;

use perfmatch::derivative::derive;
use perfmatch::format;
use perfmatch::graph::{ends_equivalent, has_bad_ray};
use perfmatch::matcher::{self, BSet};
use perfmatch::subdivision::{matching_to_orientation, orientation_to_matching, subdivide};
use perfmatch::{oracle, AutomaticTree, EndDescriptor, FiniteGraph, TreeVertex};

fn forest() -> impl Strategy<Value = FiniteGraph> {
    (1usize..15).prop_flat_map(|n| {
        prop::collection::vec(prop::option::weighted(0.85, any::<prop::sample::Index>()), n - 1).prop_map(
            move |parents| {
                let edges = parents
                    .iter()
                    .enumerate()
                    .filter_map(|(i, p)| p.map(|p| (p.index(i + 1), i + 1)));
                FiniteGraph::new(n, edges).unwrap()
            },
        )
    })
}

fn small_graph() -> impl Strategy<Value = FiniteGraph> {
    (1usize..9).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            FiniteGraph::new(n, pairs.zip(bits).filter(|(_, on)| *on).map(|(e, _)| e)).unwrap()
        })
    })
}

/// Presentations where every state has a child, so rooted matching applies.
fn tree() -> impl Strategy<Value = AutomaticTree> {
    (1usize..4)
        .prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0..k, 1..4), k))
        .prop_filter_map("unreachable state", |step| {
            let names = (0..step.len()).map(|q| format!("q{q}")).collect();
            AutomaticTree::new(names, step, 0).ok()
        })
}

/// A function with `f` and `f∘f` fixed-point free.
fn orientation() -> impl Strategy<Value = Vec<usize>> {
    (3usize..10).prop_flat_map(|n| {
        prop::collection::vec(1..n, n).prop_filter_map("f∘f has a fixed point", move |shift| {
            let f: Vec<usize> = (0..n).map(|x| (x + shift[x]) % n).collect();
            (0..n).all(|x| f[f[x]] != x).then_some(f)
        })
    })
}

fn generated(f: &[usize]) -> FiniteGraph {
    let mut edges: Vec<(usize, usize)> = (0..f.len()).map(|x| (x.min(f[x]), x.max(f[x]))).collect();
    edges.sort_unstable();
    edges.dedup();
    FiniteGraph::new(f.len(), edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivative_decides_forests(g in forest()) {
        let expected = oracle::has_perfect_matching(&g).unwrap();
        match derive(&g) {
            Ok(r) => {
                prop_assert!(expected);
                prop_assert!(r.core.is_empty());
                prop_assert!(r.forced.is_perfect(&g));
            }
            Err(_) => prop_assert!(!expected),
        }
    }

    #[test]
    fn forced_pairs_lie_in_every_perfect_matching(g in small_graph()) {
        let all = oracle::enumerate_perfect_matchings(&g).unwrap();
        match derive(&g) {
            Ok(r) => {
                r.forced.validate(&g).unwrap();
                for m in &all {
                    for (a, b) in r.forced.pairs() {
                        prop_assert!(m.contains_pair(a, b));
                    }
                }
            }
            Err(_) => prop_assert!(all.is_empty()),
        }
    }

    #[test]
    fn orientation_round_trip(f in orientation()) {
        let g = generated(&f);
        let m = orientation_to_matching(&g, &f).unwrap();
        prop_assert!(m.is_perfect(&subdivide(&g).graph));
        prop_assert_eq!(matching_to_orientation(&g, &m).unwrap(), f);
    }

    #[test]
    fn graph_format_round_trip(g in small_graph()) {
        prop_assert_eq!(format::parse_graph(&format::write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn rooted_matching_is_an_involution(t in tree()) {
        let m = matcher::rooted_matching(&t).unwrap();
        m.check_window(&t, 6, 1 << 12, &|_| false).unwrap();
        let reread = format::parse_tree(&format::write_tree(&t)).unwrap();
        let again = matcher::rooted_matching(&reread).unwrap();
        for v in t.vertices_to_depth(5, 1 << 12).unwrap() {
            prop_assert_eq!(m.partner(&v).unwrap(), again.partner(&v).unwrap());
        }
    }

    #[test]
    fn unrolled_ends_give_the_same_matching(
        t in tree(),
        pre in prop::collection::vec(0usize..3, 0..3),
        period in prop::collection::vec(0usize..3, 1..3),
        extra in 0usize..3,
    ) {
        prop_assume!(t.min_degree() >= 2);
        let e = EndDescriptor::new(pre.clone(), period.clone()).unwrap();
        prop_assume!(e.validate(&t).is_ok());
        // the same ray written with a longer preperiod and a rotated period
        let mut longer = pre;
        longer.extend(&period[..extra % period.len()]);
        let mut rotated = period[extra % period.len()..].to_vec();
        rotated.extend(&period[..extra % period.len()]);
        let f = EndDescriptor::new(longer, rotated).unwrap();
        prop_assert!(ends_equivalent(&t, &e, &f).unwrap());
        let a = matcher::match_ends(&t, &[e], 5, 1 << 12);
        let b = matcher::match_ends(&t, &[f], 5, 1 << 12);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.b_set, b.b_set);
                for v in t.vertices_to_depth(5, 1 << 12).unwrap() {
                    prop_assert_eq!(a.oracle.partner(&v).unwrap(), b.oracle.partner(&v).unwrap());
                }
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn no_bad_ray_means_empty_b(t in tree(), second in 1usize..3) {
        prop_assume!(t.min_degree() >= 2 && !has_bad_ray(&t));
        let mut ends = vec!["|0".parse::<EndDescriptor>().unwrap()];
        let other = EndDescriptor::new(vec![second], vec![0]).unwrap();
        if other.validate(&t).is_ok() {
            ends.push(other);
        }
        let out = matcher::match_ends(&t, &ends, 5, 1 << 12).unwrap();
        prop_assert_eq!(out.b_set, BSet::Empty);
        out.oracle.check_window(&t, 5, 1 << 12, &|_| false).unwrap();
        prop_assert!(out.oracle.partner(&TreeVertex::root()).unwrap().is_some());
    }
}
