//! Finite graphs, automatic trees, end descriptors and the structural
//! predicates the rest of the crate builds on.

mod ends;
mod finite;
mod ray;
mod tree;

pub use ends::{ends_equivalent, EndDescriptor, Lasso};
pub use finite::FiniteGraph;
pub use ray::has_bad_ray;
pub use tree::{AutomaticTree, TreeVertex, Window};
