//! The constructor algebra for countable labeled trees.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::seq::{LabelSeq, Prog, Scalar, SeqError};
use super::SymbolicError;
use crate::rational::Rational;
use crate::tree::LabeledTree;

/// One step of a [`Address`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    /// A vertex of a finite tree.
    Vertex(String),
    /// The `n`-th vertex of a ray.
    Ray(u64),
    Center,
    /// The `n`-th leaf of a star.
    Leaf(u64),
    /// Into the base of a gluing.
    Base,
    /// Into the `i`-th attachment (0-based) of a finite gluing.
    Att(usize),
    /// Into the `k`-th member (1-based) of a glued family.
    Member(u64),
}

/// Path of constructor steps selecting one vertex, written `step/step/…`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(pub Vec<Step>);

impl Address {
    pub fn new(steps: Vec<Step>) -> Self {
        Address(steps)
    }

    pub fn prefixed(&self, step: Step) -> Address {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(step);
        v.extend(self.0.iter().cloned());
        Address(v)
    }

    pub fn join(&self, rest: &Address) -> Address {
        let mut v = self.0.clone();
        v.extend(rest.0.iter().cloned());
        Address(v)
    }

    pub fn split_first(&self) -> Option<(&Step, Address)> {
        self.0.split_first().map(|(h, t)| (h, Address(t.to_vec())))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Vertex(id) => write!(f, "v:{id}"),
            Step::Ray(n) => write!(f, "ray:{n}"),
            Step::Center => write!(f, "center"),
            Step::Leaf(n) => write!(f, "leaf:{n}"),
            Step::Base => write!(f, "base"),
            Step::Att(i) => write!(f, "att:{i}"),
            Step::Member(k) => write!(f, "member:{k}"),
        }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, ".");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "/")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Address {
    type Err = SymbolicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SymbolicError::InvalidAddress(s.to_string());
        if s == "." {
            return Ok(Address::default());
        }
        let mut steps = Vec::new();
        for part in s.split('/') {
            let num = |t: &str| t.parse::<u64>().ok().filter(|&n| n >= 1).ok_or_else(bad);
            let step = match part.split_once(':') {
                None if part == "center" => Step::Center,
                None if part == "base" => Step::Base,
                Some(("v", id)) if !id.is_empty() => Step::Vertex(id.to_string()),
                Some(("ray", n)) => Step::Ray(num(n)?),
                Some(("leaf", n)) => Step::Leaf(num(n)?),
                Some(("member", n)) => Step::Member(num(n)?),
                Some(("att", n)) => Step::Att(n.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            };
            steps.push(step);
        }
        Ok(Address(steps))
    }
}

/// Which base vertices of a family host members: the `k`-th member is glued
/// at base index `offset + (k - 1) · step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sites {
    All,
    Even,
    Odd,
    Progression { offset: u64, step: u64 },
}

impl Sites {
    pub fn prog(&self) -> Prog {
        match *self {
            Sites::All => Prog { offset: 1, step: 1 },
            Sites::Even => Prog { offset: 2, step: 2 },
            Sites::Odd => Prog { offset: 1, step: 2 },
            Sites::Progression { offset, step } => Prog { offset, step },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    /// Vertex of the base shared with the attached tree.
    pub site: Address,
    /// The same vertex, addressed inside the attached tree.
    pub anchor: Address,
    pub tree: SymbolicTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    /// A ray or a star; members are glued at ray vertices or leaves.
    pub base: SymbolicTree,
    pub sites: Sites,
    /// Member `k` is this tree with every indexed parameter evaluated at `k`.
    pub template: SymbolicTree,
    /// Defaults to the template's root vertex.
    pub anchor: Option<Address>,
    /// `envelope.term(k)` bounds every label of member `k`.
    pub envelope: LabelSeq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolicTree {
    Finite { tree: LabeledTree, scale: Option<Scalar> },
    Ray(LabelSeq),
    Star { center: Scalar, leaves: LabelSeq },
    GlueFinite { base: Box<SymbolicTree>, attachments: Vec<Attachment> },
    GlueFamily(Box<Family>),
}

impl SymbolicTree {
    pub fn finite(tree: LabeledTree) -> Self {
        SymbolicTree::Finite { tree, scale: None }
    }

    pub fn star(center: Rational, leaves: LabelSeq) -> Self {
        SymbolicTree::Star { center: Scalar::Lit(center), leaves }
    }

    /// The vertex families are anchored at unless told otherwise.
    pub fn root_address(&self) -> Address {
        match self {
            SymbolicTree::Finite { tree, .. } => Address(alloc::vec![Step::Vertex(tree.id(0).to_string())]),
            SymbolicTree::Ray(_) => Address(alloc::vec![Step::Ray(1)]),
            SymbolicTree::Star { .. } => Address(alloc::vec![Step::Center]),
            SymbolicTree::GlueFinite { base, .. } => base.root_address().prefixed(Step::Base),
            SymbolicTree::GlueFamily(f) => f.base.root_address().prefixed(Step::Base),
        }
    }

    /// Evaluates indexed parameters at `k`, leaving nested family templates
    /// (a separate index scope) untouched.
    pub fn instantiate(&self, k: u64) -> Result<SymbolicTree, SeqError> {
        Ok(match self {
            SymbolicTree::Finite { tree, scale } => SymbolicTree::Finite {
                tree: tree.clone(),
                scale: scale.as_ref().map(|s| s.at(k)).transpose()?,
            },
            SymbolicTree::Ray(s) => SymbolicTree::Ray(s.instantiate(k)?),
            SymbolicTree::Star { center, leaves } => {
                SymbolicTree::Star { center: center.at(k)?, leaves: leaves.instantiate(k)? }
            }
            SymbolicTree::GlueFinite { base, attachments } => SymbolicTree::GlueFinite {
                base: Box::new(base.instantiate(k)?),
                attachments: attachments
                    .iter()
                    .map(|a| {
                        Ok(Attachment { site: a.site.clone(), anchor: a.anchor.clone(), tree: a.tree.instantiate(k)? })
                    })
                    .collect::<Result<_, SeqError>>()?,
            },
            SymbolicTree::GlueFamily(f) => SymbolicTree::GlueFamily(Box::new(Family {
                base: f.base.instantiate(k)?,
                sites: f.sites,
                template: f.template.clone(),
                anchor: f.anchor.clone(),
                envelope: f.envelope.instantiate(k)?,
            })),
        })
    }

    /// True when no indexed parameter occurs outside family templates.
    pub fn is_concrete(&self) -> bool {
        match self {
            SymbolicTree::Finite { scale, .. } => scale.as_ref().is_none_or(Scalar::is_concrete),
            SymbolicTree::Ray(s) => s.is_concrete(),
            SymbolicTree::Star { center, leaves } => center.is_concrete() && leaves.is_concrete(),
            SymbolicTree::GlueFinite { base, attachments } => {
                base.is_concrete() && attachments.iter().all(|a| a.tree.is_concrete())
            }
            SymbolicTree::GlueFamily(f) => f.base.is_concrete() && f.envelope.is_concrete(),
        }
    }

    /// Indexed parameter sequences in the current scope.
    pub(crate) fn indexed_params(&self) -> Vec<LabelSeq> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut Vec<LabelSeq>) {
        let scalar = |s: &Scalar, out: &mut Vec<LabelSeq>| {
            if let Scalar::Indexed(p) = s {
                out.push((**p).clone());
            }
        };
        let seq = |s: &LabelSeq, out: &mut Vec<LabelSeq>| out.extend(s.indexed_params().into_iter().cloned());
        match self {
            SymbolicTree::Finite { scale, .. } => {
                if let Some(s) = scale {
                    scalar(s, out);
                }
            }
            SymbolicTree::Ray(s) => seq(s, out),
            SymbolicTree::Star { center, leaves } => {
                scalar(center, out);
                seq(leaves, out);
            }
            SymbolicTree::GlueFinite { base, attachments } => {
                base.collect_params(out);
                attachments.iter().for_each(|a| a.tree.collect_params(out));
            }
            SymbolicTree::GlueFamily(f) => {
                f.base.collect_params(out);
                seq(&f.envelope, out);
            }
        }
    }

    /// Multiplies every label by `c`.
    pub fn scaled(&self, c: &Scalar) -> Result<SymbolicTree, SymbolicError> {
        Ok(match self {
            SymbolicTree::Finite { tree, scale } => SymbolicTree::Finite {
                tree: tree.clone(),
                scale: Some(match scale {
                    None => c.clone(),
                    Some(s) => s.mul(c)?,
                }),
            },
            SymbolicTree::Ray(s) => SymbolicTree::Ray(s.scaled(c)?),
            SymbolicTree::Star { center, leaves } => {
                SymbolicTree::Star { center: center.mul(c)?, leaves: leaves.scaled(c)? }
            }
            SymbolicTree::GlueFinite { base, attachments } => SymbolicTree::GlueFinite {
                base: Box::new(base.scaled(c)?),
                attachments: attachments
                    .iter()
                    .map(|a| Ok(Attachment { site: a.site.clone(), anchor: a.anchor.clone(), tree: a.tree.scaled(c)? }))
                    .collect::<Result<_, SymbolicError>>()?,
            },
            SymbolicTree::GlueFamily(f) => {
                let Scalar::Lit(_) = c else {
                    return Err(SymbolicError::Unsupported(String::from(
                        "an indexed scale applied to a nested family",
                    )));
                };
                SymbolicTree::GlueFamily(Box::new(Family {
                    base: f.base.scaled(c)?,
                    sites: f.sites,
                    template: f.template.scaled(c)?,
                    anchor: f.anchor.clone(),
                    envelope: f.envelope.scaled(c)?,
                }))
            }
        })
    }

    pub fn has_ray(&self) -> bool {
        match self {
            SymbolicTree::Finite { .. } | SymbolicTree::Star { .. } => false,
            SymbolicTree::Ray(_) => true,
            SymbolicTree::GlueFinite { base, attachments } => {
                base.has_ray() || attachments.iter().any(|a| a.tree.has_ray())
            }
            SymbolicTree::GlueFamily(f) => f.base.has_ray() || f.template.has_ray(),
        }
    }

    pub fn has_star(&self) -> bool {
        match self {
            SymbolicTree::Finite { .. } | SymbolicTree::Ray(_) => false,
            SymbolicTree::Star { .. } => true,
            SymbolicTree::GlueFinite { base, attachments } => {
                base.has_star() || attachments.iter().any(|a| a.tree.has_star())
            }
            SymbolicTree::GlueFamily(f) => f.base.has_star() || f.template.has_star(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            SymbolicTree::Finite { .. } => true,
            SymbolicTree::Ray(_) | SymbolicTree::Star { .. } | SymbolicTree::GlueFamily(_) => false,
            SymbolicTree::GlueFinite { base, attachments } => {
                base.is_finite() && attachments.iter().all(|a| a.tree.is_finite())
            }
        }
    }
}

impl Family {
    pub fn anchor(&self) -> Address {
        self.anchor.clone().unwrap_or_else(|| self.template.root_address())
    }

    /// Base-relative address of the `k`-th site.
    pub fn site(&self, k: u64) -> Address {
        let n = self.sites.prog().nth(k - 1);
        match self.base {
            SymbolicTree::Ray(_) => Address(alloc::vec![Step::Ray(n)]),
            _ => Address(alloc::vec![Step::Leaf(n)]),
        }
    }

    /// Member index hosted at a base-relative address, if any.
    pub fn member_at(&self, site: &Address) -> Option<u64> {
        let n = match (&self.base, site.0.as_slice()) {
            (SymbolicTree::Ray(_), [Step::Ray(n)]) => *n,
            (SymbolicTree::Star { .. }, [Step::Leaf(n)]) => *n,
            _ => return None,
        };
        self.sites.prog().position(n)
    }

    pub fn member(&self, k: u64) -> Result<SymbolicTree, SymbolicError> {
        Ok(self.template.instantiate(k)?)
    }

    pub(crate) fn base_seq(&self) -> &LabelSeq {
        match &self.base {
            SymbolicTree::Ray(s) => s,
            SymbolicTree::Star { leaves, .. } => leaves,
            _ => unreachable!("validated family base"),
        }
    }
}

impl fmt::Display for SymbolicTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicTree::Finite { tree, scale } => {
                write!(f, "finite({} vertices", tree.len())?;
                if let Some(s) = scale {
                    write!(f, ", scale {s}")?;
                }
                write!(f, ")")
            }
            SymbolicTree::Ray(s) => write!(f, "ray({s})"),
            SymbolicTree::Star { center, leaves } => write!(f, "star(center {center}, leaves {leaves})"),
            SymbolicTree::GlueFinite { base, attachments } => {
                write!(f, "glue({base}")?;
                for a in attachments {
                    write!(f, "; {} <- {} of {}", a.site, a.anchor, a.tree)?;
                }
                write!(f, ")")
            }
            SymbolicTree::GlueFamily(fam) => write!(
                f,
                "family({}; sites {:?}; template {}; envelope {})",
                fam.base, fam.sites, fam.template, fam.envelope
            ),
        }
    }
}

pub(crate) fn describe_edge(a: &Address, b: &Address) -> String {
    format!("{a} -- {b}")
}
