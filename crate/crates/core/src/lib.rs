//! Disjoint paths, vertex connectivity and linkages in semicomplete digraphs.

pub mod acceptance;
pub mod bitset;
pub mod certificate;
pub mod counterexample;
pub mod digraph;
pub mod dot;
pub mod dominators;
pub mod error;
pub mod flow;
pub mod generators;
pub mod io;
pub mod linker;
pub mod oracle;
pub mod report;
pub mod rng;

pub use bitset::BitSet;
pub use digraph::{reduce_to_minimal_path, Digraph, Path, PathSystem, Subgraph, TieRule};
pub use error::{Error, Result};
