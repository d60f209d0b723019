//! Countable labeled trees given by a finite description: finite trees,
//! rays and stars with label sequences, and gluings of these, including
//! infinite families glued along a ray or a star.

mod classify;
pub mod examples;
mod resolve;
mod seq;
mod tree;
mod truncate;
mod witness;

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::rational::Rational;
use crate::tree::TreeError;

pub use classify::{
    certificate_budget, classify, count_geq, free_predicates, isolated_points, validate, FreeTreeReport,
    IsolatedPoint, Judgement, Verdict, Witness,
};
pub use resolve::{canonical, label_at, representatives, resolve, LeafSet, VertexView};
pub use seq::{nth_prime, Count, CustomSeq, LabelSeq, Prog, Scalar, SeqError, SeqStats, ZeroPattern};
pub use tree::{Address, Attachment, Family, Sites, Step, SymbolicTree};
pub use truncate::{truncate, Truncation};
pub use witness::{compact_labeling_witness, discrete_tb_labeling_witness};

/// A glued anchor whose label differs from the label of its site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMismatch {
    pub site: String,
    pub anchor: String,
    pub base_label: Rational,
    pub anchor_label: Rational,
}

/// A family member whose labels exceed the declared envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeBreach {
    pub k: u64,
    pub sup: Rational,
    pub envelope: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    Seq(SeqError),
    Tree(TreeError),
    InvalidAddress(String),
    UnknownAddress(String),
    InvalidFamily(String),
    DuplicateSite(String),
    GlueLabelMismatch(Box<LabelMismatch>),
    /// Two adjacent vertices both labeled 0.
    DegenerateLabeling(String),
    EnvelopeViolation(Box<EnvelopeBreach>),
    PreconditionFailed(String),
    Unsupported(String),
    Undecidable(String),
    ZeroBudget,
}

impl fmt::Display for SymbolicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicError::Seq(e) => write!(f, "{e}"),
            SymbolicError::Tree(e) => write!(f, "{e}"),
            SymbolicError::InvalidAddress(a) => write!(f, "malformed address {a:?}"),
            SymbolicError::UnknownAddress(a) => write!(f, "no vertex at address {a}"),
            SymbolicError::InvalidFamily(m) => write!(f, "invalid family: {m}"),
            SymbolicError::DuplicateSite(a) => write!(f, "two attachments share the site {a}"),
            SymbolicError::GlueLabelMismatch(m) => write!(
                f,
                "glued vertices disagree: site {} has label {}, anchor {} has label {}",
                m.site, m.base_label, m.anchor, m.anchor_label
            ),
            SymbolicError::DegenerateLabeling(e) => write!(f, "degenerate labeling: edge {e} has both ends labeled 0"),
            SymbolicError::EnvelopeViolation(b) => {
                write!(f, "member {} has a label {} above its envelope {}", b.k, b.sup, b.envelope)
            }
            SymbolicError::PreconditionFailed(m) => write!(f, "precondition failed: {m}"),
            SymbolicError::Unsupported(m) => write!(f, "unsupported: {m}"),
            SymbolicError::Undecidable(m) => write!(f, "undecidable from the description: {m}"),
            SymbolicError::ZeroBudget => write!(f, "budget must be at least 1"),
        }
    }
}

impl core::error::Error for SymbolicError {}

impl From<SeqError> for SymbolicError {
    fn from(e: SeqError) -> Self {
        SymbolicError::Seq(e)
    }
}

impl From<TreeError> for SymbolicError {
    fn from(e: TreeError) -> Self {
        SymbolicError::Tree(e)
    }
}
