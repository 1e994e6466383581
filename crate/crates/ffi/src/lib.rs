//! C interface to `perfmatch`.
//!
//! Graphs and trees are opaque handles created by the `*_parse` functions
//! and released with the matching `*_free`. Results that are text come back
//! as owned, NUL-terminated strings in the library's line formats; release
//! them with [`pm_string_free`]. Every call returns a [`PmStatus`]; on
//! anything but `PM_OK`, [`pm_last_error`] describes the failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use perfmatch::counterexample;
use perfmatch::derivative::derive;
use perfmatch::format;
use perfmatch::graph::has_bad_ray;
use perfmatch::{catalog, matcher, oracle, AutomaticTree, EndDescriptor, Error, FiniteGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmStatus {
    PmOk = 0,
    /// No perfect matching, or a construction's precondition failed.
    PmConflict = 1,
    PmParse = 2,
    PmBudget = 3,
    PmInvalidArgument = 4,
    PmPrecondition = 5,
    PmInternal = 6,
}

/// A finite simple graph.
pub struct PmGraph(FiniteGraph);

/// A finite-state rooted tree.
pub struct PmTree(AutomaticTree);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PmStatus {
    match e {
        Error::Parse { .. } | Error::InvalidTree(_) | Error::InvalidEnd(_) => PmStatus::PmParse,
        Error::BudgetExceeded { .. } => PmStatus::PmBudget,
        Error::Precondition(_) | Error::NotAcyclic => PmStatus::PmPrecondition,
        Error::VertexOutOfRange(_) | Error::InvalidEdge(..) | Error::InvalidTreeVertex(_) => PmStatus::PmInvalidArgument,
        Error::InvariantViolation(_) => PmStatus::PmInternal,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<PmStatus, (PmStatus, String)>) -> PmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PmStatus::PmInternal
        }
    }
}

fn lib(e: Error) -> (PmStatus, String) {
    (status_of(&e), e.to_string())
}

fn invalid(what: &str) -> (PmStatus, String) {
    (PmStatus::PmInvalidArgument, what.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (PmStatus, String)> {
    if p.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> Result<(), (PmStatus, String)> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    *out = CString::new(s).map_err(|_| invalid("interior NUL"))?.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread. Owned by the library
/// and valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn pm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn pm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph file's contents.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_graph_parse(text: *const c_char, out: *mut *mut PmGraph) -> PmStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let g = format::parse_graph(read_str(text)?).map_err(lib)?;
        *out = Box::into_raw(Box::new(PmGraph(g)));
        Ok(PmStatus::PmOk)
    })
}

/// # Safety
/// `g` must be null or a handle from [`pm_graph_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn pm_graph_free(g: *mut PmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_graph_vertex_count(g: *const PmGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Parses a tree file's contents.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_tree_parse(text: *const c_char, out: *mut *mut PmTree) -> PmStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let t = format::parse_tree(read_str(text)?).map_err(lib)?;
        *out = Box::into_raw(Box::new(PmTree(t)));
        Ok(PmStatus::PmOk)
    })
}

/// A built-in tree such as `three-regular` or `odd-comb`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_tree_preset(name: *const c_char, out: *mut *mut PmTree) -> PmStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let name = read_str(name)?;
        let t = catalog::by_name(name).ok_or_else(|| invalid(&format!("unknown preset `{name}`")))?;
        *out = Box::into_raw(Box::new(PmTree(t)));
        Ok(PmStatus::PmOk)
    })
}

/// # Safety
/// `t` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn pm_tree_free(t: *mut PmTree) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

unsafe fn graph<'a>(g: *const PmGraph) -> Result<&'a FiniteGraph, (PmStatus, String)> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| invalid("null graph"))
}

unsafe fn tree<'a>(t: *const PmTree) -> Result<&'a AutomaticTree, (PmStatus, String)> {
    t.as_ref().map(|t| &t.0).ok_or_else(|| invalid("null tree"))
}

/// Forced matching of the derivative as `m a b` lines. On a conflict the
/// status is `PM_CONFLICT`, `*out` stays untouched and the conflict is in
/// [`pm_last_error`].
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_derive(g: *const PmGraph, out: *mut *mut c_char) -> PmStatus {
    guard(|| {
        let g = graph(g)?;
        match derive(g) {
            Ok(r) => {
                give_string(out, format::write_matching(&r.forced))?;
                Ok(PmStatus::PmOk)
            }
            Err(conflict) => Err((PmStatus::PmConflict, conflict.to_string())),
        }
    })
}

/// Exhaustive check, for graphs the oracle accepts.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_has_perfect_matching(g: *const PmGraph, out: *mut bool) -> PmStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        *out = oracle::has_perfect_matching(g).map_err(lib)?;
        Ok(PmStatus::PmOk)
    })
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_has_bad_ray(t: *const PmTree, out: *mut bool) -> PmStatus {
    guard(|| {
        let t = tree(t)?;
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        *out = has_bad_ray(t);
        Ok(PmStatus::PmOk)
    })
}

/// Layered matching pairs meeting the window of depth `depth`.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_rooted_matching(
    t: *const PmTree,
    depth: usize,
    budget: usize,
    out: *mut *mut c_char,
) -> PmStatus {
    guard(|| {
        let t = tree(t)?;
        let oracle = matcher::rooted_matching(t).map_err(lib)?;
        oracle.check_window(t, depth, budget, &|_| false).map_err(lib)?;
        let pairs = oracle.window_pairs(t, depth, budget).map_err(lib)?;
        give_string(out, format::write_tree_pairs(&pairs))?;
        Ok(PmStatus::PmOk)
    })
}

/// End-guided matching. `ends` holds whitespace-separated descriptors such
/// as `|0 1|0`. The text starts with `b empty`, `b line` or
/// `b injective-part`, then the window's matching lines.
///
/// # Safety
/// `t` must be a live handle, `ends` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_match_ends(
    t: *const PmTree,
    ends: *const c_char,
    depth: usize,
    budget: usize,
    out: *mut *mut c_char,
) -> PmStatus {
    guard(|| {
        let t = tree(t)?;
        let ends: Vec<EndDescriptor> = read_str(ends)?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(lib)?;
        let result = matcher::match_ends(t, &ends, depth, budget).map_err(lib)?;
        let b = match result.b_set {
            matcher::BSet::Empty => "empty",
            matcher::BSet::InjectivePart => "injective-part",
            matcher::BSet::Line => "line",
        };
        let pairs = result.oracle.window_pairs(t, depth, budget).map_err(lib)?;
        give_string(out, format!("b {b}\n{}", format::write_tree_pairs(&pairs)))?;
        Ok(PmStatus::PmOk)
    })
}

/// Level dump of levels `0..=levels`, each checked on the way.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_counterexample(levels: usize, out: *mut *mut c_char) -> PmStatus {
    guard(|| {
        let mut ls = counterexample::LevelSystem::init();
        let mut buf = Vec::new();
        ls.dump(&mut buf).map_err(|e| invalid(&e.to_string()))?;
        for _ in 0..levels {
            ls.step().map_err(lib)?;
            ls.check_invariants().map_err(lib)?;
            ls.dump(&mut buf).map_err(|e| invalid(&e.to_string()))?;
        }
        give_string(out, String::from_utf8(buf).map_err(|_| invalid("dump is not UTF-8"))?)?;
        Ok(PmStatus::PmOk)
    })
}
