//! The level-by-level recursion on binary strings that produces an acyclic
//! bipartite relation with infinite sections but no injective choice
//! function on a comeager set.
//!
//! At level `n` the state holds `R_n ⊆ S_n ⊆ 2^n × 2^n`. Odd steps copy `R`
//! to both equal-bit children and add one pair `(u·0, v·1)`; even steps copy
//! and forbid all partners of one `u·0` except `v·1`. `S` is never stored:
//! it is the full product cut down by the accumulated [`Constraint`]s.

mod schedule;
mod word;

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::{self, Write};

pub use schedule::{dense_schedule, DenseSchedule, Scheduled};
pub use word::{Word, MAX_WORD_LEN};

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;

/// Highest level the exhaustive checks are meant for.
pub const MAX_LEVEL: usize = 20;

/// Levels up to this one also list `S` explicitly in dumps.
pub const DUMP_S_LEVEL: usize = 6;

/// Pairs `(u, v)` with `p ⊑ u` are in `S` only when `q ⊑ v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint {
    pub p: Word,
    pub q: Word,
}

impl Constraint {
    pub fn allows(&self, u: &Word, v: &Word) -> bool {
        !self.p.is_prefix_of(u) || self.q.is_prefix_of(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSystem {
    n: usize,
    r: Vec<(Word, Word)>,
    constraints: Vec<Constraint>,
    /// `(u_{2k}, v_{2k})` for each odd step taken.
    u_history: Vec<(Word, Word)>,
    /// `(v_{2k+1}, u_{2k+1})` for each even step taken.
    v_history: Vec<(Word, Word)>,
    u_schedule: DenseSchedule,
    v_schedule: DenseSchedule,
}

impl Default for LevelSystem {
    fn default() -> Self {
        Self::init()
    }
}

impl LevelSystem {
    /// Level 0: `R = ∅`, `S = {(ε, ε)}`.
    pub fn init() -> Self {
        LevelSystem {
            n: 0,
            r: Vec::new(),
            constraints: Vec::new(),
            u_history: Vec::new(),
            v_history: Vec::new(),
            u_schedule: DenseSchedule::default(),
            v_schedule: DenseSchedule::default(),
        }
    }

    pub fn level(&self) -> usize {
        self.n
    }

    /// `R_n`, sorted.
    pub fn r(&self) -> &[(Word, Word)] {
        &self.r
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn u_history(&self) -> &[(Word, Word)] {
        &self.u_history
    }

    pub fn v_history(&self) -> &[(Word, Word)] {
        &self.v_history
    }

    pub fn in_s(&self, u: &Word, v: &Word) -> bool {
        u.len() == self.n && v.len() == self.n && self.constraints.iter().all(|c| c.allows(u, v))
    }

    /// `S_n` listed explicitly, sorted.
    pub fn s_pairs(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for u in Word::all(self.n) {
            for v in Word::all(self.n) {
                if self.in_s(&u, &v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn first_projection(&self) -> HashSet<Word> {
        self.r.iter().map(|(u, _)| *u).collect()
    }

    fn doubled(&self) -> Vec<(Word, Word)> {
        let mut out: Vec<(Word, Word)> = self
            .r
            .iter()
            .flat_map(|(u, v)| [false, true].map(|i| (u.push(i), v.push(i))))
            .collect();
        out.sort();
        out
    }

    /// Least `v` with `(u, v) ∈ S`: the longest constraint target forced
    /// by `u`, padded with zeros.
    fn least_partner(&self, u: &Word) -> Option<Word> {
        let q = self
            .constraints
            .iter()
            .filter(|c| c.p.is_prefix_of(u))
            .map(|c| c.q)
            .max_by_key(Word::len)
            .unwrap_or(Word::EMPTY);
        let v = q.padded(self.n);
        self.in_s(u, &v).then_some(v)
    }

    /// Least `u` of length `n` avoiding the `forbidden` prefixes and `pi0`.
    fn least_free(&self, forbidden: &[Word], pi0: &HashSet<Word>) -> Option<Word> {
        fn go(w: Word, n: usize, forbidden: &[Word], pi0: &HashSet<Word>) -> Option<Word> {
            if forbidden.iter().any(|p| *p == w) {
                return None;
            }
            if w.len() == n {
                return (!pi0.contains(&w)).then_some(w);
            }
            go(w.push(false), n, forbidden, pi0).or_else(|| go(w.push(true), n, forbidden, pi0))
        }
        go(Word::EMPTY, self.n, forbidden, pi0)
    }

    fn forbidden_for(&self, v: &Word) -> Vec<Word> {
        self.constraints
            .iter()
            .filter(|c| !c.q.is_prefix_of(v))
            .map(|c| c.p)
            .collect()
    }

    /// One step of the recursion, odd or even according to the level.
    pub fn step(&mut self) -> Result<()> {
        if self.n >= MAX_LEVEL {
            return Err(Error::Precondition(format!("levels above {MAX_LEVEL} are not supported")));
        }
        if self.n % 2 == 0 {
            let u = self
                .u_schedule
                .next(self.n)
                .ok_or_else(|| Error::InvariantViolation("u schedule exhausted".into()))?
                .word();
            let v = self
                .least_partner(&u)
                .ok_or_else(|| Error::InvariantViolation(format!("no partner for {u} at level {}", self.n)))?;
            let mut r = self.doubled();
            r.push((u.push(false), v.push(true)));
            r.sort();
            self.r = r;
            self.u_history.push((u, v));
        } else {
            let v = self
                .v_schedule
                .next(self.n)
                .ok_or_else(|| Error::InvariantViolation("v schedule exhausted".into()))?
                .word();
            let u = self
                .least_free(&self.forbidden_for(&v), &self.first_projection())
                .ok_or_else(|| Error::InvariantViolation(format!("no free partner for {v} at level {}", self.n)))?;
            self.r = self.doubled();
            self.constraints.push(Constraint {
                p: u.push(false),
                q: v.push(true),
            });
            self.v_history.push((v, u));
        }
        self.n += 1;
        Ok(())
    }

    /// One odd and one even step from an even level.
    pub fn advance(&mut self) -> Result<()> {
        if self.n % 2 == 1 {
            return Err(Error::Precondition(format!("advance starts at even levels, not {}", self.n)));
        }
        self.step()?;
        self.step()
    }

    /// Some `u` with no partner in `S`.
    pub fn condition_one_failure(&self) -> Option<Word> {
        Word::all(self.n).find(|u| self.least_partner(u).is_none())
    }

    /// Some `v` with no partner in `S` outside the first projection of `R`.
    /// Columns with the same set of met constraint targets share an answer.
    pub fn condition_two_failure(&self) -> Option<Word> {
        let pi0 = self.first_projection();
        let mut memo: HashMap<u64, bool> = HashMap::new();
        Word::all(self.n).find(|v| {
            let key = self
                .constraints
                .iter()
                .enumerate()
                .filter(|(_, c)| c.q.is_prefix_of(v))
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            !*memo
                .entry(key)
                .or_insert_with(|| self.least_free(&self.forbidden_for(v), &pi0).is_some())
        })
    }

    pub fn r_outside_s(&self) -> Option<(Word, Word)> {
        self.r.iter().find(|(u, v)| !self.in_s(u, v)).copied()
    }

    /// `R ⊆ S` and both conditions; the first failure is an invariant violation.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        if let Some((u, v)) = self.r_outside_s() {
            return Err(Error::InvariantViolation(format!("({u}, {v}) is in R but not S at level {n}")));
        }
        if let Some(u) = self.condition_one_failure() {
            return Err(Error::InvariantViolation(format!("{u} has no S-partner at level {n}")));
        }
        if let Some(v) = self.condition_two_failure() {
            return Err(Error::InvariantViolation(format!("{v} has no free S-partner at level {n}")));
        }
        Ok(())
    }

    /// Both conditions by direct search over the explicit `S`.
    pub fn conditions_brute_force(&self) -> (bool, bool) {
        let s = self.s_pairs();
        let pi0 = self.first_projection();
        let one = Word::all(self.n).all(|u| s.iter().any(|(a, _)| *a == u));
        let two = Word::all(self.n).all(|v| s.iter().any(|(a, b)| *b == v && !pi0.contains(a)));
        (one, two)
    }

    /// Writes this level in the dump format.
    pub fn dump(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "level {}", self.n)?;
        if self.n > 0 {
            let k = (self.n - 1) / 2;
            if self.n % 2 == 1 {
                let (u, v) = self.u_history[k];
                writeln!(out, "u {u} {v}")?;
            } else {
                let (v, u) = self.v_history[k];
                writeln!(out, "v {v} {u}")?;
            }
        }
        for (u, v) in &self.r {
            writeln!(out, "R {u} {v}")?;
        }
        for c in &self.constraints {
            writeln!(out, "C {} {}", c.p, c.q)?;
        }
        if self.n <= DUMP_S_LEVEL {
            for (u, v) in self.s_pairs() {
                writeln!(out, "S {u} {v}")?;
            }
        }
        Ok(())
    }
}

/// Levels `0..=levels` in order.
pub fn build(levels: usize) -> Result<Vec<LevelSystem>> {
    let mut ls = LevelSystem::init();
    let mut out = vec![ls.clone()];
    for _ in 0..levels {
        ls.step()?;
        out.push(ls.clone());
    }
    Ok(out)
}

/// Dumps levels `0..=levels`.
pub fn write_dump(levels: usize, out: &mut dyn Write) -> Result<()> {
    let mut ls = LevelSystem::init();
    let io = |e: io::Error| Error::Precondition(format!("write failed: {e}"));
    ls.dump(out).map_err(io)?;
    for _ in 0..levels {
        ls.step()?;
        ls.dump(out).map_err(io)?;
    }
    Ok(())
}

/// A side of the bipartite graph `G_R`: rows are first coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Row(Word),
    Column(Word),
}

/// Whether `G_R` is a forest; on failure, the edges of a cycle in order.
pub fn check_acyclic(ls: &LevelSystem) -> std::result::Result<(), Vec<(Word, Word)>> {
    let size = 1usize << ls.level();
    let node = |s: Side| match s {
        Side::Row(w) => w.bits() as usize,
        Side::Column(w) => size + w.bits() as usize,
    };
    let mut parent: Vec<usize> = (0..2 * size).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut adjacency: HashMap<usize, Vec<(usize, (Word, Word))>> = HashMap::new();
    for &(u, v) in ls.r() {
        let (a, b) = (node(Side::Row(u)), node(Side::Column(v)));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            // path from a to b through earlier edges closes the cycle
            let mut back: HashMap<usize, (usize, (Word, Word))> = HashMap::new();
            let mut queue = VecDeque::from([a]);
            back.insert(a, (a, (u, v)));
            while let Some(x) = queue.pop_front() {
                if x == b {
                    break;
                }
                for &(y, e) in adjacency.get(&x).into_iter().flatten() {
                    if !back.contains_key(&y) {
                        back.insert(y, (x, e));
                        queue.push_back(y);
                    }
                }
            }
            let mut cycle = vec![(u, v)];
            let mut x = b;
            while x != a {
                let (prev, e) = back[&x];
                cycle.push(e);
                x = prev;
            }
            return Err(cycle);
        }
        parent[ra] = rb;
        adjacency.entry(a).or_default().push((b, (u, v)));
        adjacency.entry(b).or_default().push((a, (u, v)));
    }
    Ok(())
}

/// `G_R` as a finite graph: rows `0..2^n`, columns `2^n..2^(n+1)`.
pub fn window_graph(ls: &LevelSystem) -> FiniteGraph {
    let size = 1usize << ls.level();
    let edges = ls.r().iter().map(|(u, v)| (u.bits() as usize, size + v.bits() as usize));
    FiniteGraph::new(2 * size, edges).expect("R pairs are in range")
}

/// Prefixes with an extension whose section has at least `k` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionReport {
    pub level: usize,
    pub k: usize,
    /// Every prefix of length at most this passes; `None` if even `ε` fails.
    pub row_depth: Option<usize>,
    pub column_depth: Option<usize>,
    /// Failing prefixes one past the passing depth, at most [`Self::FAILING_CAP`].
    pub failing_rows: Vec<Word>,
    pub failing_columns: Vec<Word>,
    rows: HashSet<Word>,
    columns: HashSet<Word>,
}

impl SectionReport {
    pub const FAILING_CAP: usize = 16;

    pub fn depth(&self) -> Option<usize> {
        self.row_depth.min(self.column_depth)
    }

    /// The lag `c` with every prefix of length `≤ n - c` passing.
    pub fn lag(&self) -> Option<usize> {
        self.depth().map(|d| self.level - d)
    }

    pub fn row_passes(&self, w: &Word) -> bool {
        self.rows.contains(w)
    }

    pub fn column_passes(&self, w: &Word) -> bool {
        self.columns.contains(w)
    }
}

pub fn section_report(ls: &LevelSystem, k: usize) -> SectionReport {
    let n = ls.level();
    let mut row_count: HashMap<Word, usize> = HashMap::new();
    let mut column_count: HashMap<Word, usize> = HashMap::new();
    for (u, v) in ls.r() {
        *row_count.entry(*u).or_default() += 1;
        *column_count.entry(*v).or_default() += 1;
    }
    let passing = |count: &HashMap<Word, usize>| -> HashSet<Word> {
        let mut out = HashSet::new();
        for x in Word::all(n) {
            if count.get(&x).copied().unwrap_or(0) >= k {
                for d in 0..=n {
                    if !out.insert(x.prefix(d)) && d > 0 {
                        continue;
                    }
                }
            }
        }
        out
    };
    let depth_and_failures = |set: &HashSet<Word>| -> (Option<usize>, Vec<Word>) {
        let mut depth = None;
        for d in 0..=n {
            let failing: Vec<Word> = Word::all(d).filter(|w| !set.contains(w)).take(SectionReport::FAILING_CAP).collect();
            if !failing.is_empty() {
                return (depth, failing);
            }
            depth = Some(d);
        }
        (depth, Vec::new())
    };
    let rows = passing(&row_count);
    let columns = passing(&column_count);
    let (row_depth, failing_rows) = depth_and_failures(&rows);
    let (column_depth, failing_columns) = depth_and_failures(&columns);
    SectionReport {
        level: n,
        k,
        row_depth,
        column_depth,
        failing_rows,
        failing_columns,
        rows,
        columns,
    }
}
