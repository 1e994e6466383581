use crate::error::{Error, Result};
use crate::matching::Matching;

/// Outcome of matching the graph generated by a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BijectionMatching {
    Perfect(Matching),
    /// An odd cycle of the permutation, starting at its least element.
    OddCycle(Vec<usize>),
}

/// Cycles of `perm`, each starting at its least element, ordered by it.
pub fn cycles(perm: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = *perm.get(x).ok_or(Error::VertexOutOfRange(x))?;
            if x >= n {
                return Err(Error::VertexOutOfRange(x));
            }
        }
        if x != start {
            return Err(Error::Precondition("not a permutation".into()));
        }
        out.push(cycle);
    }
    Ok(out)
}

/// The graph `{x, perm(x)}` has a perfect matching exactly when every
/// cycle is even; then each cycle is paired alternately from its least
/// element.
pub fn bijection_graph_matching(perm: &[usize]) -> Result<BijectionMatching> {
    if let Some(x) = (0..perm.len()).find(|&x| perm[x] == x) {
        return Err(Error::Precondition(format!("{x} is a fixed point")));
    }
    let cycles = cycles(perm)?;
    if let Some(odd) = cycles.iter().find(|c| c.len() % 2 == 1) {
        return Ok(BijectionMatching::OddCycle(odd.clone()));
    }
    let pairs = cycles.iter().flat_map(|c| c.chunks(2).map(|p| (p[0], p[1])));
    Ok(BijectionMatching::Perfect(Matching::from_pairs(pairs)?))
}
