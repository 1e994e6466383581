use crate::graph::AutomaticTree;

/// Whether some injective ray has degree exactly two at every even index.
///
/// Every injective ray eventually descends, and dropping an even number of
/// leading points keeps a bad ray bad, so it suffices to look for a
/// descending bad ray from a non-root vertex. Those are infinite paths in
/// the product of states with index parity, restricted to nodes whose even
/// parity carries degree two; such a path exists iff the restricted product
/// contains a node that survives repeated removal of dead ends.
pub fn has_bad_ray(t: &AutomaticTree) -> bool {
    let n = t.state_count();
    let node = |q: usize, parity: usize| 2 * q + parity;
    let allowed = |q: usize, parity: usize| parity == 1 || t.state_degree(q, false) == 2;

    let mut alive: Vec<bool> = (0..2 * n).map(|x| allowed(x / 2, x % 2)).collect();
    loop {
        let mut changed = false;
        for q in 0..n {
            for parity in 0..2 {
                let x = node(q, parity);
                if !alive[x] {
                    continue;
                }
                let has_successor = (0..t.branch(q)).any(|i| alive[node(t.step(q, i), 1 - parity)]);
                if !has_successor {
                    alive[x] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    t.non_root_states()
        .into_iter()
        .any(|q| alive[node(q, 0)] || alive[node(q, 1)])
}
