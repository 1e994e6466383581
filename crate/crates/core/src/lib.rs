//! Perfect matchings on acyclic graphs.
//!
//! The crate works with two kinds of input: finite simple graphs, and
//! rooted, locally finite, possibly infinite trees presented by a
//! finite-state branching machine ([`graph::AutomaticTree`]). On top of
//! those it provides
//!
//! * brute-force ground truth for finite matchings ([`oracle`]),
//! * the degree derivative that peels off forced edges ([`derivative`]),
//! * constructive perfect matchings of infinite trees, rooted or guided by
//!   a finite selection of ends ([`matcher`]),
//! * the line-and-point graph and its orientation correspondence
//!   ([`subdivision`]),
//! * the closure/buffer sweep that extends matchings while keeping the
//!   remainder free of bad rays ([`baire`]),
//! * the level-by-level recursion on binary strings behind the locally
//!   countable counterexample ([`counterexample`]).
//!
//! Everything is deterministic: every choice is resolved by a
//! minimal-index rule, so repeated runs agree bit for bit.

pub mod baire;
pub mod catalog;
pub mod cli;
pub mod counterexample;
pub mod derivative;
pub mod error;
pub mod format;
pub mod generate;
pub mod graph;
pub mod matcher;
pub mod matching;
pub mod oracle;
pub mod subdivision;

pub use error::{Error, Result};
pub use graph::{AutomaticTree, EndDescriptor, FiniteGraph, TreeVertex};
pub use matching::{Matching, MatchingOracle};
