//! Ultrametrics generated by vertex-labeled trees.
//!
//! A labeling `l: V(T) → [0, ∞)` of a tree induces the distance
//! `d_l(u, v) = max { l(w) : w on the path from u to v }` for `u ≠ v`. This
//! crate builds that space for finite trees, answers path-maximum queries in
//! logarithmic time, computes hulls, decides the topology (complete,
//! discrete, totally bounded, compact) of spaces generated by symbolically
//! described infinite trees, and searches for labeled trees representing a
//! given finite ultrametric space.
//!
//! All arithmetic is exact; there are no floating-point values anywhere.
#![no_std]

extern crate alloc;

pub mod hull;
pub mod pathmax;
pub mod rational;
pub mod space;
pub mod symbolic;
pub mod tree;

pub use hull::{attachment_point, hull, hull_minimality_check, CombReport, Hull};
pub use pathmax::PathMaxIndex;
pub use rational::{ParseRationalError, Rational};
pub use space::{
    balls, conjecture_predicate, conjecture_scan, enumerate_spaces, isometric, representable, validate_space, Ball,
    ConjectureCheck, Hierarchy, LabelMode, RepresentOpts, ScanRecord, ScanReport, SpaceError, UltraSpace,
};
pub use symbolic::{classify, LabelSeq, SymbolicError, SymbolicTree, Verdict};
pub use tree::{build_tree, is_isomorphic_labeled, LabeledTree, Path, TreeError};
