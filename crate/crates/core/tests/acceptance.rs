//! Acceptance suite: one line per criterion, then a nonzero exit if any
//! criterion failed. Every check is exact; the only tolerances are the
//! runtime targets, which count toward the verdict.

use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use perfmatch::baire::{self, VertexSet};
use perfmatch::counterexample::{self, dense_schedule, section_report, Word};
use perfmatch::derivative::derive;
use perfmatch::generate::{enumerate_trees, seeded_forests};
use perfmatch::graph::has_bad_ray;
use perfmatch::matcher::{self, BSet};
use perfmatch::subdivision::{matching_to_orientation, orientation_to_matching, subdivide};
use perfmatch::{catalog, oracle, AutomaticTree, Error, FiniteGraph, TreeVertex};

const BUDGET: usize = 1 << 16;
const FOREST_SEED: u64 = 0x5eed;
const SHOWN_FAILURES: usize = 5;

type Failures = Vec<String>;

struct Criterion {
    id: usize,
    title: &'static str,
    target: Duration,
    run: fn(&mut Failures, &mut Vec<String>),
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "derivative decides perfect matchability of forests",
            target: Duration::from_secs(30),
            run: derivative_completeness,
        },
        Criterion {
            id: 2,
            title: "rooted matching is total on battery windows",
            target: Duration::from_secs(10),
            run: rooted_totality,
        },
        Criterion {
            id: 3,
            title: "end-guided matching leaves B empty without bad rays",
            target: Duration::from_secs(30),
            run: ends_final_clause,
        },
        Criterion {
            id: 4,
            title: "line-and-point graph matches orientations",
            target: Duration::from_secs(10),
            run: subdivision_equivalence,
        },
        Criterion {
            id: 5,
            title: "closure, buffer and sweep invariants",
            target: Duration::from_secs(30),
            run: baire_machinery,
        },
        Criterion {
            id: 6,
            title: "counterexample recursion to level 16",
            target: Duration::from_secs(60),
            run: counterexample_recursion,
        },
        Criterion {
            id: 7,
            title: "CLI outputs are byte-identical across runs",
            target: Duration::from_secs(120),
            run: determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let mut failures = Vec::new();
        let mut notes = Vec::new();
        let start = Instant::now();
        (c.run)(&mut failures, &mut notes);
        let elapsed = start.elapsed();
        if elapsed > c.target {
            failures.push(format!("runtime {:.2} s is over the target", elapsed.as_secs_f64()));
        }
        let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {} {verdict} {} ({:.2} s, target < {} s)",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.target.as_secs()
        );
        for n in &notes {
            println!("    {n}");
        }
        for f in failures.iter().take(SHOWN_FAILURES) {
            println!("    failure: {f}");
        }
        if failures.len() > SHOWN_FAILURES {
            println!("    ... {} more failures", failures.len() - SHOWN_FAILURES);
        }
        if !failures.is_empty() {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn check_forest(g: &FiniteGraph, label: &str, failures: &mut Failures) {
    let expected = match oracle::has_perfect_matching(g) {
        Ok(b) => b,
        Err(e) => return failures.push(format!("{label}: oracle failed: {e}")),
    };
    match derive(g) {
        Ok(_) if !expected => failures.push(format!("{label}: derive succeeded, oracle says no matching")),
        Ok(r) if !r.forced.is_perfect(g) => failures.push(format!("{label}: forced matching is not perfect")),
        Ok(_) => {}
        Err(c) if expected => failures.push(format!("{label}: derive reports `{c}`, oracle finds a matching")),
        Err(_) => {}
    }
}

fn derivative_completeness(failures: &mut Failures, notes: &mut Vec<String>) {
    let mut trees = 0;
    for n in 1..=10 {
        for (i, g) in enumerate_trees(n).iter().enumerate() {
            check_forest(g, &format!("tree {i} on {n} vertices"), failures);
            trees += 1;
        }
    }
    let forests = seeded_forests(FOREST_SEED, 1000, 16);
    for (i, g) in forests.iter().enumerate() {
        check_forest(g, &format!("random forest {i}"), failures);
    }
    notes.push(format!("{trees} trees up to 10 vertices, {} seeded forests up to 16", forests.len()));
}

fn rooted_totality(failures: &mut Failures, notes: &mut Vec<String>) {
    let mut names = Vec::new();
    for nt in catalog::battery() {
        let result = matcher::rooted_matching(&nt.tree)
            .and_then(|m| m.check_window(&nt.tree, 10, BUDGET, &|_| false));
        if let Err(e) = result {
            failures.push(format!("{}: {e}", nt.name));
        }
        names.push(nt.name);
    }
    notes.push(format!("depth 10 on {}", names.join(", ")));
}

fn ends_final_clause(failures: &mut Failures, notes: &mut Vec<String>) {
    let mut covered = Vec::new();
    for nt in catalog::battery() {
        if has_bad_ray(&nt.tree) {
            continue;
        }
        for ends in &nt.ends {
            let shown: Vec<String> = ends.iter().map(ToString::to_string).collect();
            let label = format!("{} with {}", nt.name, shown.join(" "));
            match matcher::match_ends(&nt.tree, ends, 10, BUDGET) {
                Ok(out) => {
                    if out.b_set != BSet::Empty {
                        failures.push(format!("{label}: B is {:?}", out.b_set));
                    }
                    if let Err(e) = out.oracle.check_window(&nt.tree, 10, BUDGET, &|_| false) {
                        failures.push(format!("{label}: {e}"));
                    }
                }
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
        covered.push(nt.name);
    }
    notes.push(format!("no bad ray: {}", covered.join(", ")));

    let line = catalog::line();
    let ends = ["|0".parse().unwrap(), "1|0".parse().unwrap()];
    match matcher::match_ends_unchecked(&line, &ends, BUDGET) {
        Ok(out) => {
            if out.b_set != BSet::Line {
                failures.push(format!("line: B is {:?}", out.b_set));
            }
            for depth in [2, 5, 10] {
                match matcher::verify_conclusions(&line, &out, depth, BUDGET) {
                    Ok(c) if c.two_regular && c.one_component && c.no_odd_pair && c.perfect_off_b => {}
                    Ok(c) => failures.push(format!("line at depth {depth}: {c:?}")),
                    Err(e) => failures.push(format!("line at depth {depth}: {e}")),
                }
            }
        }
        Err(e) => failures.push(format!("line: {e}")),
    }
    notes.push("bare line with two ends: B is the line, checked at depths 2, 5, 10".into());
}

fn subdivision_equivalence(failures: &mut Failures, notes: &mut Vec<String>) {
    for n in 3..=12 {
        let g = FiniteGraph::cycle(n);
        let sub = subdivide(&g);
        let matchings = match oracle::enumerate_perfect_matchings(&sub.graph) {
            Ok(m) => m,
            Err(e) => {
                failures.push(format!("C{n}: {e}"));
                continue;
            }
        };
        if matchings.len() != 2 {
            failures.push(format!("C{n}: {} perfect matchings", matchings.len()));
        }
        for m in &matchings {
            let back = matching_to_orientation(&g, m).and_then(|f| orientation_to_matching(&g, &f));
            if back.as_ref() != Ok(m) {
                failures.push(format!("C{n}: matching does not survive the round trip"));
            }
        }
        let forward: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        let backward: Vec<usize> = (0..n).map(|x| (x + n - 1) % n).collect();
        for f in [forward, backward] {
            let back = orientation_to_matching(&g, &f).and_then(|m| matching_to_orientation(&g, &m));
            if back.as_ref() != Ok(&f) {
                failures.push(format!("C{n}: orientation does not survive the round trip"));
            }
        }
    }
    let mut trees = 0;
    for n in 1..=8 {
        for g in enumerate_trees(n) {
            let sub = subdivide(&g).graph;
            trees += 1;
            if sub.vertex_count() % 2 == 0 {
                failures.push(format!("tree on {n} vertices: even subdivision"));
            }
            match (oracle::has_perfect_matching(&sub), oracle::enumerate_perfect_matchings(&sub)) {
                (Ok(false), Ok(all)) if all.is_empty() => {}
                other => failures.push(format!("tree on {n} vertices: oracle says {other:?}")),
            }
        }
    }
    notes.push(format!("cycles C3..C12, {trees} trees up to 8 vertices"));
}

fn check_closures(t: &AutomaticTree, name: &str, failures: &mut Failures) -> usize {
    let none = VertexSet::new();
    let mut count = 0;
    for x in t.vertices_to_depth(3, BUDGET).unwrap() {
        let label = format!("{name} from {x}");
        let (s, pairs) = match baire::closure(t, &x, 256) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        count += 1;
        let list: Vec<TreeVertex> = s.iter().cloned().collect();
        if s.len() % 2 == 1 || 2 * pairs.len() != s.len() {
            failures.push(format!("{label}: |S| = {} with {} pairs", s.len(), pairs.len()));
        }
        let covered: HashSet<&TreeVertex> = pairs.iter().flat_map(|(a, b)| [a, b]).collect();
        if covered.len() != s.len() || pairs.iter().any(|(a, b)| !a.is_adjacent(b)) {
            failures.push(format!("{label}: pairs are not a perfect matching of S"));
        }
        if oracle::has_perfect_matching(&baire::induced(&list)) != Ok(true) {
            failures.push(format!("{label}: oracle finds no perfect matching of S"));
        }
        match baire::remainder_min_degree(t, &s, 6, BUDGET) {
            Ok(d) if d >= 2 => {}
            other => failures.push(format!("{label}: remainder degree {other:?}")),
        }
        match baire::buffer(t, &s, BUDGET) {
            Ok((tset, _)) => {
                let edge = baire::boundary(t, &none, &s).unwrap();
                if !tset.is_superset(&s) || !tset.is_superset(&edge) {
                    failures.push(format!("{label}: T misses S or its boundary"));
                }
            }
            Err(e) => failures.push(format!("{label}: buffer: {e}")),
        }
    }
    count
}

fn check_sweeps(t: &AutomaticTree, name: &str, failures: &mut Failures) -> usize {
    let window = t.vertices_to_depth(3, BUDGET).unwrap();
    let mut removed = VertexSet::new();
    let mut rounds = 0;
    while window.iter().any(|v| !removed.contains(v)) && rounds < 16 {
        let seeds: Vec<TreeVertex> = window.iter().filter(|v| !removed.contains(*v)).cloned().collect();
        let sweep = match baire::sweep_step(t, &removed, &seeds, BUDGET) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{name} round {rounds}: {e}"));
                return rounds;
            }
        };
        if let Err(e) = baire::verify_sweep(t, &removed, &sweep, 7, 12, BUDGET) {
            failures.push(format!("{name} round {rounds}: {e}"));
        }
        removed = sweep.removed;
        rounds += 1;
    }
    if window.iter().any(|v| !removed.contains(v)) {
        failures.push(format!("{name}: window not emptied in {rounds} rounds"));
    }
    rounds
}

fn baire_machinery(failures: &mut Failures, notes: &mut Vec<String>) {
    for (name, t) in [("three-regular", catalog::three_regular()), ("odd-comb", catalog::odd_comb())] {
        let closures = check_closures(&t, name, failures);
        let rounds = check_sweeps(&t, name, failures);
        notes.push(format!("{name}: {closures} closures, window emptied in {rounds} sweeps"));
    }
    let line = catalog::line();
    for budget in [16, 64, 256, 1024] {
        match baire::closure(&line, &TreeVertex::root(), budget) {
            Err(Error::BudgetExceeded { frontier, .. }) if !frontier.is_empty() => {}
            other => failures.push(format!("line with budget {budget}: {:?}", other.map(|r| r.0.len()))),
        }
    }
    notes.push("bare line: closure exceeds budgets 16, 64, 256, 1024 with a frontier".into());
}

fn counterexample_recursion(failures: &mut Failures, notes: &mut Vec<String>) {
    let levels = match counterexample::build(16) {
        Ok(l) => l,
        Err(e) => return failures.push(e.to_string()),
    };
    for ls in &levels {
        let n = ls.level();
        if let Some((u, v)) = ls.r_outside_s() {
            failures.push(format!("level {n}: ({u}, {v}) in R but not S"));
        }
        if let Some(u) = ls.condition_one_failure() {
            failures.push(format!("level {n}: condition (1) fails at {u}"));
        }
        if let Some(v) = ls.condition_two_failure() {
            failures.push(format!("level {n}: condition (2) fails at {v}"));
        }
        if let Err(cycle) = counterexample::check_acyclic(ls) {
            failures.push(format!("level {n}: cycle of length {}", cycle.len()));
        }
        if n <= 10 && ls.conditions_brute_force() != (true, true) {
            failures.push(format!("level {n}: brute force disagrees"));
        }
    }
    for pair in levels.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        let (a, b) = (prev.r().len(), next.r().len());
        if prev.level() % 2 == 0 {
            if b != 2 * a + 1 {
                failures.push(format!("level {}: |R| = {b} after {a}", next.level()));
            }
            let (u, v) = next.u_history()[prev.level() / 2];
            if !prev.in_s(&u, &v) || next.r().binary_search(&(u.push(false), v.push(true))).is_err() {
                failures.push(format!("level {}: added pair is not (u0, v1) over S", next.level()));
            }
        } else if b != 2 * a {
            failures.push(format!("level {}: |R| = {b} after {a}", next.level()));
        }
    }
    if counterexample::build(16).ok().as_ref() != Some(&levels) {
        failures.push("a second run differs".into());
    }
    let us = dense_schedule(0, 200);
    let vs = dense_schedule(1, 200);
    for len in 0..=6 {
        for w in Word::all(len) {
            if !us.iter().any(|s| s.extends(&w)) {
                failures.push(format!("no scheduled u extends {w}"));
            }
            if !vs.iter().any(|s| s.extends(&w)) {
                failures.push(format!("no scheduled v extends {w}"));
            }
        }
    }
    let first = levels
        .iter()
        .find(|ls| section_report(ls, 1).depth().is_some_and(|d| d >= 1))
        .map(|ls| ls.level());
    let last = section_report(&levels[16], 1);
    notes.push(format!(
        "|R_16| = {}; sections of size 1 reach every length-1 prefix from level {:?}; lag at level 16 is {:?}",
        levels[16].r().len(),
        first,
        last.lag()
    ));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Exit code, stdout and the `--out` file of one invocation.
fn invoke(args: &[String], out: &Path) -> (Option<i32>, Vec<u8>, Vec<u8>) {
    let _ = fs::remove_file(out);
    let o = Command::new(env!("CARGO_BIN_EXE_perfmatch"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .output()
        .expect("the binary runs");
    (o.status.code(), o.stdout, fs::read(out).unwrap_or_default())
}

fn determinism(failures: &mut Failures, notes: &mut Vec<String>) {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<String>>();
    let mut runs: Vec<Vec<String>> = Vec::new();

    for (i, g) in enumerate_trees(8).iter().enumerate().step_by(3) {
        let path = write(d, &format!("t{i}.g"), &perfmatch::format::write_graph(g));
        runs.push(owned(&["derivative", "--graph", &path]));
    }
    for nt in catalog::battery() {
        runs.push(owned(&["match-rooted", "--preset", nt.name, "--depth", "10"]));
        for ends in &nt.ends {
            let mut args = owned(&["match-ends", "--preset", nt.name, "--depth", "8"]);
            for e in ends {
                args.push("--end".into());
                args.push(e.to_string());
            }
            runs.push(args);
        }
    }
    for n in 3..=12 {
        let g = write(d, &format!("c{n}.g"), &perfmatch::format::write_graph(&FiniteGraph::cycle(n)));
        let f: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        let f = write(d, &format!("c{n}.f"), &perfmatch::format::write_orientation(&f));
        runs.push(owned(&["subdivide", "--graph", &g]));
        runs.push(owned(&["subdivide", "--graph", &g, "--orientation", &f]));
    }
    for name in ["three-regular", "odd-comb", "line"] {
        runs.push(owned(&["baire-sweep", "--preset", name, "--depth", "3", "--budget", "256"]));
    }
    runs.push(owned(&["counterexample", "--levels", "16"]));

    let out = d.join("out.txt");
    let mut codes = [0usize; 4];
    for args in &runs {
        let first = invoke(args, &out);
        let second = invoke(args, &out);
        if first != second {
            failures.push(format!("`{}` differs between runs", args.join(" ")));
        }
        match first.0 {
            Some(c @ 0..=3) => codes[c as usize] += 1,
            other => failures.push(format!("`{}` exited with {other:?}", args.join(" "))),
        }
        if first.0 == Some(2) {
            failures.push(format!("`{}` was rejected as input", args.join(" ")));
        }
    }
    notes.push(format!(
        "{} invocations run twice; exit codes 0/1/2/3: {}/{}/{}/{}",
        runs.len(),
        codes[0],
        codes[1],
        codes[2],
        codes[3]
    ));
}
