//! File formats, Graphviz export, multi-threaded scans and the `ultratree`
//! command built on [`ultratree_core`].

pub mod cli;
pub mod dot;
pub mod format;
pub mod scan;

pub use format::{parse_space, parse_symbolic, parse_tree, space_to_string, symbolic_to_string, tree_to_string};
