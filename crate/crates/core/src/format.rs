//! Line-based text formats.
//!
//! ```text
//! graph 3          tree
//! e 0 1            state body branch 2
//! e 1 2            state top branch 3
//!                  root top
//!                  trans top 0 body
//! ```
//!
//! `#` starts a comment. Tree transitions left unspecified loop back to the
//! declaring state. Matchings are written as `m <a> <b>` lines, tree
//! vertices as `/`-joined index paths with the root written `/`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{AutomaticTree, FiniteGraph, TreeVertex};
use crate::matching::Matching;

/// Whitespace-separated tokens of one line, with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &content[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &content[s..]));
    }
    out
}

fn number(line: usize, (column, tok): (usize, &str)) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, column, format!("expected a natural number, found `{tok}`")))
}

fn expect_len(line: usize, toks: &[(usize, &str)], n: usize, shape: &str) -> Result<()> {
    if toks.len() != n {
        let column = toks.get(n).or(toks.last()).map_or(1, |t| t.0);
        return Err(Error::parse(line, column, format!("expected `{shape}`")));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<FiniteGraph> {
    let mut vertex_count = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokens(line);
        let Some(&(column, keyword)) = toks.first() else {
            continue;
        };
        match (keyword, vertex_count) {
            ("graph", None) => {
                expect_len(lineno, &toks, 2, "graph <vertex_count>")?;
                vertex_count = Some(number(lineno, toks[1])?);
            }
            ("graph", Some(_)) => return Err(Error::parse(lineno, column, "duplicate header")),
            (_, None) => {
                return Err(Error::parse(lineno, column, "expected the `graph <n>` header"))
            }
            ("e", Some(n)) => {
                expect_len(lineno, &toks, 3, "e <a> <b>")?;
                let a = number(lineno, toks[1])?;
                let b = number(lineno, toks[2])?;
                if a >= b {
                    return Err(Error::parse(lineno, toks[2].0, "edge endpoints must satisfy a < b"));
                }
                if b >= n {
                    return Err(Error::parse(lineno, toks[2].0, format!("vertex {b} out of range")));
                }
                edges.push((a, b));
            }
            (other, Some(_)) => {
                return Err(Error::parse(lineno, column, format!("unknown directive `{other}`")))
            }
        }
    }
    let n = vertex_count.ok_or_else(|| Error::parse(1, 1, "missing `graph <n>` header"))?;
    FiniteGraph::new(n, edges)
}

pub fn write_graph(g: &FiniteGraph) -> String {
    let mut out = format!("graph {}\n", g.vertex_count());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "e {a} {b}");
    }
    out
}

pub fn parse_tree(text: &str) -> Result<AutomaticTree> {
    let mut header = false;
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut rows: Vec<Vec<Option<usize>>> = Vec::new();
    let mut root = None;
    let mut pending = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokens(line);
        let Some(&(column, keyword)) = toks.first() else {
            continue;
        };
        if !header {
            if keyword != "tree" || toks.len() != 1 {
                return Err(Error::parse(lineno, column, "expected the `tree` header"));
            }
            header = true;
            continue;
        }
        match keyword {
            "state" => {
                expect_len(lineno, &toks, 4, "state <name> branch <k>")?;
                if toks[2].1 != "branch" {
                    return Err(Error::parse(lineno, toks[2].0, "expected `branch`"));
                }
                let name = toks[1].1.to_string();
                if ids.contains_key(&name) {
                    return Err(Error::parse(lineno, toks[1].0, format!("duplicate state `{name}`")));
                }
                let k = number(lineno, toks[3])?;
                ids.insert(name.clone(), names.len());
                names.push(name);
                rows.push(vec![None; k]);
            }
            "root" => {
                expect_len(lineno, &toks, 2, "root <name>")?;
                if root.is_some() {
                    return Err(Error::parse(lineno, column, "duplicate root"));
                }
                root = Some((lineno, toks[1]));
            }
            "trans" => {
                expect_len(lineno, &toks, 4, "trans <state> <i> <state>")?;
                let i = number(lineno, toks[2])?;
                pending.push((lineno, toks[1], i, toks[2].0, toks[3]));
            }
            other => {
                return Err(Error::parse(lineno, column, format!("unknown directive `{other}`")))
            }
        }
    }
    if !header {
        return Err(Error::parse(1, 1, "missing `tree` header"));
    }
    let lookup = |lineno: usize, (column, name): (usize, &str)| {
        ids.get(name)
            .copied()
            .ok_or_else(|| Error::parse(lineno, column, format!("unknown state `{name}`")))
    };
    for (lineno, from, i, icol, to) in pending {
        let q = lookup(lineno, from)?;
        let r = lookup(lineno, to)?;
        let slot = rows[q].get_mut(i).ok_or_else(|| {
            Error::parse(lineno, icol, format!("index {i} exceeds the branching of `{}`", from.1))
        })?;
        if slot.replace(r).is_some() {
            return Err(Error::parse(lineno, from.0, "duplicate transition"));
        }
    }
    let (lineno, root_tok) = root.ok_or_else(|| Error::parse(1, 1, "missing `root` line"))?;
    let root = lookup(lineno, root_tok)?;
    let step = rows
        .into_iter()
        .enumerate()
        .map(|(q, row)| row.into_iter().map(|r| r.unwrap_or(q)).collect())
        .collect();
    AutomaticTree::new(names, step, root)
}

pub fn write_tree(t: &AutomaticTree) -> String {
    let mut out = String::from("tree\n");
    for q in 0..t.state_count() {
        let _ = writeln!(out, "state {} branch {}", t.state_name(q), t.branch(q));
    }
    let _ = writeln!(out, "root {}", t.state_name(t.root_state()));
    for q in 0..t.state_count() {
        for i in 0..t.branch(q) {
            let r = t.step(q, i);
            if r != q {
                let _ = writeln!(out, "trans {} {i} {}", t.state_name(q), t.state_name(r));
            }
        }
    }
    out
}

pub fn parse_tree_vertex(s: &str) -> Result<TreeVertex> {
    let s = s.trim();
    if s == "/" {
        return Ok(TreeVertex::root());
    }
    s.trim_start_matches('/')
        .split('/')
        .map(|x| {
            x.parse()
                .map_err(|_| Error::InvalidEnd(format!("`{s}` is not a tree vertex")))
        })
        .collect::<Result<Vec<usize>>>()
        .map(TreeVertex::new)
}

pub fn write_matching(m: &Matching) -> String {
    let mut out = String::new();
    for (a, b) in m.pairs() {
        let _ = writeln!(out, "m {a} {b}");
    }
    out
}

/// Reads `m <a> <b>` lines back, ignoring every other directive.
pub fn parse_matching(text: &str) -> Result<Matching> {
    let mut m = Matching::new();
    for (lineno, line) in text.lines().enumerate() {
        let toks = tokens(line);
        if toks.first().map(|t| t.1) != Some("m") {
            continue;
        }
        expect_len(lineno + 1, &toks, 3, "m <a> <b>")?;
        let a = number(lineno + 1, toks[1])?;
        let b = number(lineno + 1, toks[2])?;
        m.insert(a, b)
            .map_err(|e| Error::parse(lineno + 1, toks[1].0, e.to_string()))?;
    }
    Ok(m)
}

/// Tree-vertex pairs as `m <a> <b>` lines, in the given order.
pub fn write_tree_pairs(pairs: &[(TreeVertex, TreeVertex)]) -> String {
    let mut out = String::new();
    for (a, b) in pairs {
        let _ = writeln!(out, "m {a} {b}");
    }
    out
}

pub fn parse_tree_pairs(text: &str) -> Result<Vec<(TreeVertex, TreeVertex)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let toks = tokens(line);
        if toks.first().map(|t| t.1) != Some("m") {
            continue;
        }
        expect_len(lineno + 1, &toks, 3, "m <a> <b>")?;
        let a = parse_tree_vertex(toks[1].1).map_err(|e| Error::parse(lineno + 1, toks[1].0, e.to_string()))?;
        let b = parse_tree_vertex(toks[2].1).map_err(|e| Error::parse(lineno + 1, toks[2].0, e.to_string()))?;
        out.push((a, b));
    }
    Ok(out)
}

/// An orientation as `f <x> <y>` lines, one per vertex `0..n`.
pub fn parse_orientation(text: &str) -> Result<Vec<usize>> {
    let mut values: Vec<Option<usize>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokens(line);
        let Some(&(column, keyword)) = toks.first() else {
            continue;
        };
        if keyword != "f" {
            return Err(Error::parse(lineno, column, format!("unknown directive `{keyword}`")));
        }
        expect_len(lineno, &toks, 3, "f <x> <y>")?;
        let x = number(lineno, toks[1])?;
        let y = number(lineno, toks[2])?;
        if values.len() <= x {
            values.resize(x + 1, None);
        }
        if values[x].replace(y).is_some() {
            return Err(Error::parse(lineno, toks[1].0, format!("f({x}) given twice")));
        }
    }
    values
        .iter()
        .enumerate()
        .map(|(x, y)| y.ok_or_else(|| Error::parse(1, 1, format!("f({x}) is missing"))))
        .collect()
}

pub fn write_orientation(f: &[usize]) -> String {
    let mut out = String::new();
    for (x, y) in f.iter().enumerate() {
        let _ = writeln!(out, "f {x} {y}");
    }
    out
}
