use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, TreeVertex};

/// An eventually periodic ray from the root: `preperiod` followed by
/// `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndDescriptor {
    preperiod: Vec<usize>,
    period: Vec<usize>,
}

impl EndDescriptor {
    pub fn new(preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidEnd("the period must be nonempty".into()));
        }
        Ok(EndDescriptor { preperiod, period })
    }

    /// `index^ω`.
    pub fn constant(index: usize) -> Self {
        EndDescriptor {
            preperiod: Vec::new(),
            period: vec![index],
        }
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.preperiod
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// The `i`-th child index along the ray.
    pub fn index_at(&self, i: usize) -> usize {
        match self.preperiod.get(i) {
            Some(&x) => x,
            None => self.period[(i - self.preperiod.len()) % self.period.len()],
        }
    }

    /// Phase within the period, once past the preperiod.
    fn phase(&self, depth: usize) -> Option<usize> {
        (depth >= self.preperiod.len()).then(|| (depth - self.preperiod.len()) % self.period.len())
    }

    /// The ray vertex at the given depth.
    pub fn vertex_at(&self, depth: usize) -> TreeVertex {
        TreeVertex::new((0..depth).map(|i| self.index_at(i)).collect())
    }

    /// Whether `v` lies on this ray.
    pub fn passes_through(&self, v: &TreeVertex) -> bool {
        v.path()
            .iter()
            .enumerate()
            .all(|(i, &x)| self.index_at(i) == x)
    }

    /// Number of leading indices after which the two index sequences are
    /// known to agree forever if they agree up to it.
    fn comparison_bound(&self, other: &EndDescriptor) -> usize {
        self.preperiod.len() + other.preperiod.len() + lcm(self.period.len(), other.period.len())
    }

    /// First depth at which the two rays differ, if they differ at all.
    pub fn divergence_depth(&self, other: &EndDescriptor) -> Option<usize> {
        (0..self.comparison_bound(other)).find(|&i| self.index_at(i) != other.index_at(i))
    }

    /// Checks that every prefix of the ray is a vertex of `t`.
    pub fn validate(&self, t: &AutomaticTree) -> Result<()> {
        let mut q = t.root_state();
        let mut seen = HashMap::new();
        for depth in 0.. {
            if let Some(phase) = self.phase(depth) {
                if seen.insert((q, phase), depth).is_some() {
                    return Ok(());
                }
            }
            let i = self.index_at(depth);
            if i >= t.branch(q) {
                return Err(Error::InvalidEnd(format!(
                    "{self}: index {i} at depth {depth} exceeds branching {}",
                    t.branch(q)
                )));
            }
            q = t.step(q, i);
        }
        unreachable!()
    }

    /// Values of `value(state)` along the ray from `from_depth` on, folded
    /// into prefix and cycle.
    pub fn profile<T, F>(
        &self,
        t: &AutomaticTree,
        from_depth: usize,
        budget: usize,
        mut value: F,
    ) -> Result<Lasso<T>>
    where
        F: FnMut(usize, usize) -> T,
    {
        let mut q = t.root_state();
        let mut values = Vec::new();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for depth in 0.. {
            if depth > budget + from_depth {
                return Err(Error::budget("profiling a ray", budget));
            }
            if depth >= from_depth {
                if let Some(phase) = self.phase(depth) {
                    if let Some(&first) = seen.get(&(q, phase)) {
                        let cycle = values.split_off(first - from_depth);
                        return Ok(Lasso {
                            prefix: values,
                            cycle,
                        });
                    }
                    seen.insert((q, phase), depth);
                }
                values.push(value(q, depth));
            }
            let i = self.index_at(depth);
            if i >= t.branch(q) {
                return Err(Error::InvalidEnd(format!("{self} leaves the tree at depth {depth}")));
            }
            q = t.step(q, i);
        }
        unreachable!()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Whether two valid descriptors name the same end. For rays from the root
/// of a tree this is equality of the index sequences.
pub fn ends_equivalent(t: &AutomaticTree, a: &EndDescriptor, b: &EndDescriptor) -> Result<bool> {
    a.validate(t)?;
    b.validate(t)?;
    Ok(a.divergence_depth(b).is_none())
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for EndDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", join(&self.preperiod), join(&self.period))
    }
}

impl FromStr for EndDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (pre, period) = s
            .split_once('|')
            .ok_or_else(|| Error::InvalidEnd(format!("`{s}` lacks the `|` separator")))?;
        let list = |part: &str| -> Result<Vec<usize>> {
            let part = part.trim();
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| Error::InvalidEnd(format!("`{x}` is not an index")))
                })
                .collect()
        };
        EndDescriptor::new(list(pre)?, list(period)?)
    }
}

/// An eventually periodic sequence: `prefix` then `cycle` forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso<T> {
    pub prefix: Vec<T>,
    pub cycle: Vec<T>,
}

impl<T: Copy> Lasso<T> {
    pub fn get(&self, i: usize) -> T {
        match self.prefix.get(i) {
            Some(&x) => x,
            None => self.cycle[(i - self.prefix.len()) % self.cycle.len()],
        }
    }

    /// Length after which scanning another two cycles settles every
    /// question about the tail.
    pub fn horizon(&self) -> usize {
        self.prefix.len() + 2 * self.cycle.len()
    }
}
