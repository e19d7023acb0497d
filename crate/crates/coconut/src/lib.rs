//! Arithmetical structures on finite connected graphs, specialized to
//! coconut tree graphs `CT(p,s)`: construction, validation, smoothing and
//! subdivision transforms, Euclidean-chain constructions, closed-form
//! counting, and brute-force enumeration oracles.
//!
//! An arithmetical structure on a graph is a pair of positive integer
//! vectors `(d, r)` with `(diag(d) - A) r = 0` and `gcd(r) = 1`;
//! equivalently, each vertex's r-value divides the sum of its neighbors'.

pub mod chains;
pub mod counting;
pub mod enumerate;
pub mod graph;
pub mod structures;
pub mod transforms;

pub use graph::{build_coconut_tree, build_cycle, build_path, CoconutShape, Graph};
pub use structures::{ArithStructure, Int};
