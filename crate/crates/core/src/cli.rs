//! The `perfmatch` command line.
//!
//! Data goes to `--out` or stdout and never carries timings, so reruns are
//! byte-identical. A one-line run report goes to stderr.
//!
//! Exit codes: 0 ok, 1 conflict or failed check, 2 usage or input error,
//! 3 budget exceeded.

use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::baire::{self, VertexSet};
use crate::catalog;
use crate::counterexample;
use crate::derivative::derive;
use crate::error::Error;
use crate::format;
use crate::graph::{AutomaticTree, EndDescriptor};
use crate::matcher::{self, BSet};
use crate::subdivision::{self, SubdivisionLabel};

const DEFAULT_BUDGET: usize = 1 << 16;
/// Closures store whole paths, so memory grows with the square of this.
const SWEEP_BUDGET: usize = 1 << 12;

#[derive(Debug, Parser)]
#[command(name = "perfmatch", version, about = "Perfect matchings on acyclic graphs and finite-state trees")]
pub struct Cli {
    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Skip the run report on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TreeSource {
    /// Tree file.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Built-in tree, e.g. three-regular, odd-comb, line.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Peel forced edges off a finite graph.
    Derivative {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Layered matching from the root, listed on a window.
    MatchRooted {
        #[command(flatten)]
        source: TreeSource,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Matching guided by one or more ends, e.g. `--end "|0"`.
    MatchEnds {
        #[command(flatten)]
        source: TreeSource,
        #[arg(long = "end", required = true, allow_hyphen_values = true)]
        ends: Vec<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Line-and-point graph, or the matching of an orientation file.
    Subdivide {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        orientation: Option<PathBuf>,
    },
    /// Closure/buffer sweeps seeded by every vertex of a window.
    BaireSweep {
        #[command(flatten)]
        source: TreeSource,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        rounds: usize,
        /// Depth of the window the sweeps are verified on; default depth + 4.
        #[arg(long)]
        check_depth: Option<usize>,
        #[arg(long, default_value_t = SWEEP_BUDGET)]
        budget: usize,
    },
    /// Level dump of the binary-string recursion.
    Counterexample {
        #[arg(long, default_value_t = 16)]
        levels: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Derivative { .. } => "derivative",
            Command::MatchRooted { .. } => "match-rooted",
            Command::MatchEnds { .. } => "match-ends",
            Command::Subdivide { .. } => "subdivide",
            Command::BaireSweep { .. } => "baire-sweep",
            Command::Counterexample { .. } => "counterexample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Conflict,
    BudgetExceeded,
    InvariantViolation,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Conflict | Outcome::InvariantViolation => 1,
            Outcome::BudgetExceeded => 3,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Ok => "ok",
            Outcome::Conflict => "conflict",
            Outcome::BudgetExceeded => "budget-exceeded",
            Outcome::InvariantViolation => "invariant-violation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub subcommand: &'static str,
    /// SHA-256 of the input bytes, hex.
    pub digest: String,
    pub outcome: Outcome,
    pub vertices: usize,
    pub iterations: usize,
    pub runtime_ms: u128,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "report {} input {} outcome {} vertices {} iterations {} runtime-ms {}",
            self.subcommand, self.digest, self.outcome, self.vertices, self.iterations, self.runtime_ms
        )
    }
}

/// Input-side failure: exit 2.
struct InputError(String);

/// What a subcommand produced: data, counters, and how it ended.
struct Produced {
    data: String,
    digest: String,
    vertices: usize,
    iterations: usize,
    failure: Option<(Outcome, String)>,
}

impl Produced {
    fn new(digest: String) -> Self {
        Produced {
            data: String::new(),
            digest,
            vertices: 0,
            iterations: 0,
            failure: None,
        }
    }

    /// Sorts a library error into input errors and run outcomes.
    fn fail(mut self, e: Error) -> Result<Self, InputError> {
        let outcome = match e {
            Error::BudgetExceeded { .. } => Outcome::BudgetExceeded,
            Error::InvariantViolation(_) => Outcome::InvariantViolation,
            Error::Precondition(_) | Error::NotAcyclic => Outcome::Conflict,
            _ => return Err(InputError(e.to_string())),
        };
        if let Error::BudgetExceeded { frontier, .. } = &e {
            for v in frontier.iter().take(8) {
                let _ = match v.depth() {
                    d if d > 16 => writeln!(self.data, "frontier depth {d}"),
                    _ => writeln!(self.data, "frontier {v}"),
                };
            }
        }
        self.failure = Some((outcome, e.to_string()));
        Ok(self)
    }
}

fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn input<T>(r: crate::Result<T>, what: &str) -> Result<T, InputError> {
    r.map_err(|e| InputError(format!("{what}: {e}")))
}

fn load_tree(source: &TreeSource) -> Result<(AutomaticTree, String), InputError> {
    match (&source.tree, &source.preset) {
        (Some(path), _) => {
            let text = read(path)?;
            Ok((input(format::parse_tree(&text), &path.display().to_string())?, digest(text.as_bytes())))
        }
        (None, Some(name)) => {
            let t = catalog::by_name(name).ok_or_else(|| InputError(format!("unknown preset `{name}`")))?;
            let d = digest(format::write_tree(&t).as_bytes());
            Ok((t, d))
        }
        (None, None) => Err(InputError("one of --tree and --preset is required".into())),
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let produced = match execute(&cli.command) {
        Ok(p) => p,
        Err(InputError(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            return 2;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &produced.data).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(produced.data.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(message) = written {
        let _ = writeln!(stderr, "error: {message}");
        return 2;
    }
    let outcome = match &produced.failure {
        Some((outcome, message)) => {
            if message.starts_with(&outcome.to_string()) {
                let _ = writeln!(stderr, "{message}");
            } else {
                let _ = writeln!(stderr, "{outcome}: {message}");
            }
            *outcome
        }
        None => Outcome::Ok,
    };
    if !cli.quiet {
        let report = RunReport {
            subcommand: cli.command.name(),
            digest: produced.digest,
            outcome,
            vertices: produced.vertices,
            iterations: produced.iterations,
            runtime_ms: start.elapsed().as_millis(),
        };
        let _ = writeln!(stderr, "{report}");
    }
    outcome.exit_code()
}

fn execute(command: &Command) -> Result<Produced, InputError> {
    match command {
        Command::Derivative { graph } => run_derivative(graph),
        Command::MatchRooted { source, depth, budget } => run_rooted(source, *depth, *budget),
        Command::MatchEnds {
            source,
            ends,
            depth,
            budget,
        } => run_ends(source, ends, *depth, *budget),
        Command::Subdivide { graph, orientation } => run_subdivide(graph, orientation.as_deref()),
        Command::BaireSweep {
            source,
            depth,
            rounds,
            check_depth,
            budget,
        } => run_sweep(source, *depth, *rounds, check_depth.unwrap_or(depth + 4), *budget),
        Command::Counterexample { levels } => run_counterexample(*levels),
    }
}

fn join(vs: impl IntoIterator<Item = impl fmt::Display>) -> String {
    vs.into_iter().map(|v| format!(" {v}")).collect()
}

fn run_derivative(path: &Path) -> Result<Produced, InputError> {
    let text = read(path)?;
    let g = input(format::parse_graph(&text), &path.display().to_string())?;
    let mut p = Produced::new(digest(text.as_bytes()));
    p.vertices = g.vertex_count();
    let (trace, tail) = match derive(&g) {
        Ok(r) => {
            let mut tail = format!("core{}\n", join(&r.core));
            tail.push_str(&format::write_matching(&r.forced));
            (r.trace, Ok(tail))
        }
        Err(conflict) => (conflict.trace().to_vec(), Err(conflict.to_string())),
    };
    p.iterations = trace.len();
    let _ = writeln!(p.data, "stages {}", trace.len());
    for (i, set) in trace.iter().enumerate() {
        let _ = writeln!(p.data, "stage {i}{}", join(set));
    }
    match tail {
        Ok(tail) => p.data.push_str(&tail),
        Err(conflict) => {
            let _ = writeln!(p.data, "{conflict}");
            p.failure = Some((Outcome::Conflict, conflict));
        }
    }
    Ok(p)
}

fn run_rooted(source: &TreeSource, depth: usize, budget: usize) -> Result<Produced, InputError> {
    let (t, d) = load_tree(source)?;
    let p = Produced::new(d);
    let result = (|| {
        let oracle = matcher::rooted_matching(&t)?;
        oracle.check_window(&t, depth, budget, &|_| false)?;
        let pairs = oracle.window_pairs(&t, depth, budget)?;
        Ok::<_, Error>((t.vertices_to_depth(depth, budget)?.len(), pairs))
    })();
    match result {
        Ok((count, pairs)) => {
            let mut p = p;
            p.vertices = count;
            p.iterations = depth;
            p.data = format::write_tree_pairs(&pairs);
            Ok(p)
        }
        Err(e) => p.fail(e),
    }
}

fn run_ends(source: &TreeSource, ends: &[String], depth: usize, budget: usize) -> Result<Produced, InputError> {
    let (t, d) = load_tree(source)?;
    let ends: Vec<EndDescriptor> = ends
        .iter()
        .map(|s| input(s.parse(), &format!("end `{s}`")))
        .collect::<Result<_, _>>()?;
    let mut p = Produced::new(digest(
        format!("{d}{}", ends.iter().map(|e| format!(" {e}")).collect::<String>()).as_bytes(),
    ));
    let result = (|| {
        let out = matcher::match_ends(&t, &ends, depth, budget)?;
        let window = t.vertices_to_depth(depth, budget)?;
        let pairs = out.oracle.window_pairs(&t, depth, budget)?;
        Ok::<_, Error>((out, window, pairs))
    })();
    let (out, window, pairs) = match result {
        Ok(r) => r,
        Err(e) => return p.fail(e),
    };
    p.vertices = window.len();
    p.iterations = out.ends.len();
    let b = match out.b_set {
        BSet::Empty => "empty",
        BSet::InjectivePart => "injective-part",
        BSet::Line => "line",
    };
    let _ = writeln!(p.data, "b {b}");
    for v in window.iter().filter(|v| out.in_b(v)) {
        let _ = writeln!(p.data, "B {v}");
    }
    p.data.push_str(&format::write_tree_pairs(&pairs));
    Ok(p)
}

fn run_subdivide(graph: &Path, orientation: Option<&Path>) -> Result<Produced, InputError> {
    let text = read(graph)?;
    let g = input(format::parse_graph(&text), &graph.display().to_string())?;
    let sub = subdivision::subdivide(&g);
    let mut bytes = text.into_bytes();
    let mut p;
    match orientation {
        None => {
            p = Produced::new(digest(&bytes));
            for (id, label) in sub.labels.iter().enumerate() {
                let _ = match label {
                    SubdivisionLabel::Point(x) => writeln!(p.data, "# {id} point {x}"),
                    SubdivisionLabel::Edge(a, b) => writeln!(p.data, "# {id} edge {a} {b}"),
                };
            }
            p.data.push_str(&format::write_graph(&sub.graph));
        }
        Some(path) => {
            let ftext = read(path)?;
            bytes.extend_from_slice(ftext.as_bytes());
            p = Produced::new(digest(&bytes));
            let f = input(format::parse_orientation(&ftext), &path.display().to_string())?;
            match subdivision::orientation_to_matching(&g, &f) {
                Ok(m) => {
                    let _ = writeln!(p.data, "# aperiodic {}", subdivision::is_aperiodic(&f));
                    p.data.push_str(&format::write_matching(&m));
                }
                Err(e) => return p.fail(e),
            }
        }
    }
    p.vertices = sub.graph.vertex_count();
    p.iterations = 1;
    Ok(p)
}

fn run_sweep(
    source: &TreeSource,
    depth: usize,
    rounds: usize,
    check_depth: usize,
    budget: usize,
) -> Result<Produced, InputError> {
    let (t, d) = load_tree(source)?;
    let mut p = Produced::new(digest(format!("{d} {depth} {rounds} {check_depth}").as_bytes()));
    let window = match t.vertices_to_depth(depth, budget) {
        Ok(w) => w,
        Err(e) => return p.fail(e),
    };
    let mut removed = VertexSet::new();
    for round in 0..rounds {
        let seeds: Vec<_> = window.iter().filter(|v| !removed.contains(*v)).cloned().collect();
        if seeds.is_empty() {
            break;
        }
        let sweep = match baire::sweep_step(&t, &removed, &seeds, budget)
            .and_then(|s| baire::verify_sweep(&t, &removed, &s, check_depth, 12, budget).map(|()| s))
        {
            Ok(s) => s,
            Err(e) => return p.fail(e),
        };
        p.iterations += 1;
        let _ = writeln!(p.data, "round {round} seeds {} kept {}", seeds.len(), sweep.kept.len());
        for &i in &sweep.kept {
            let pair = &sweep.pairs[i];
            p.vertices += pair.s.len();
            let _ = writeln!(
                p.data,
                "pair {} s {} t {} radius {}",
                pair.seed,
                pair.s.len(),
                pair.t.len(),
                pair.radius
            );
        }
        p.data.push_str(&format::write_tree_pairs(&sweep.matching));
        removed = sweep.removed;
    }
    let left = window.iter().filter(|v| !removed.contains(*v)).count();
    let _ = writeln!(p.data, "remaining {left}");
    Ok(p)
}

fn run_counterexample(levels: usize) -> Result<Produced, InputError> {
    if levels > counterexample::MAX_LEVEL {
        return Err(InputError(format!("--levels is at most {}", counterexample::MAX_LEVEL)));
    }
    let mut p = Produced::new(digest(format!("levels {levels}").as_bytes()));
    let mut out = Vec::new();
    let mut ls = counterexample::LevelSystem::init();
    let result = (|| {
        ls.check_invariants()?;
        ls.dump(&mut out).map_err(|e| Error::Precondition(e.to_string()))?;
        for _ in 0..levels {
            ls.step()?;
            ls.check_invariants()?;
            if let Err(cycle) = counterexample::check_acyclic(&ls) {
                return Err(Error::InvariantViolation(format!("R contains a cycle of length {}", cycle.len())));
            }
            ls.dump(&mut out).map_err(|e| Error::Precondition(e.to_string()))?;
        }
        Ok(())
    })();
    p.data = String::from_utf8(out).expect("dump is ascii");
    p.iterations = ls.level();
    p.vertices = 2 << ls.level();
    match result {
        Ok(()) => Ok(p),
        Err(e) => p.fail(e),
    }
}
