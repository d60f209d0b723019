//! Vertex lookup inside symbolic trees.
//!
//! A glued vertex has one address in the base and one in the attached tree;
//! the base address is canonical. Resolving a vertex yields its label, its
//! explicit neighbours and the infinite leaf sets around it, with the effect
//! of every enclosing gluing merged in.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::seq::{LabelSeq, ZeroPattern};
use super::tree::{Address, Family, Step, SymbolicTree};
use super::SymbolicError;
use crate::rational::Rational;

/// Infinitely many leaves `star/leaf:1, star/leaf:2, …` around a centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafSet {
    pub star: Address,
    pub labels: LabelSeq,
    /// Some leaf of the set has infinite degree after gluing.
    pub hosts_infinite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexView {
    pub address: Address,
    pub label: Rational,
    pub neighbors: Vec<Address>,
    pub leaf_sets: Vec<LeafSet>,
}

impl VertexView {
    pub fn infinite_degree(&self) -> bool {
        !self.leaf_sets.is_empty()
    }

    fn prefixed(mut self, step: Step) -> Self {
        self.address = self.address.prefixed(step.clone());
        for n in &mut self.neighbors {
            *n = n.prefixed(step.clone());
        }
        for ls in &mut self.leaf_sets {
            ls.star = ls.star.prefixed(step.clone());
        }
        self
    }
}

fn unknown(addr: &Address) -> SymbolicError {
    SymbolicError::UnknownAddress(addr.to_string())
}

/// Canonical form of `addr` in `t`; fails if it names no vertex.
pub fn canonical(t: &SymbolicTree, addr: &Address) -> Result<Address, SymbolicError> {
    let steps = addr.0.as_slice();
    match (t, steps) {
        (SymbolicTree::Finite { tree, .. }, [Step::Vertex(id)]) if tree.contains(id) => Ok(addr.clone()),
        (SymbolicTree::Ray(_), [Step::Ray(n)]) if *n >= 1 => Ok(addr.clone()),
        (SymbolicTree::Star { .. }, [Step::Center]) => Ok(addr.clone()),
        (SymbolicTree::Star { .. }, [Step::Leaf(n)]) if *n >= 1 => Ok(addr.clone()),
        (SymbolicTree::GlueFinite { base, attachments }, [first, rest @ ..]) => {
            let rest = Address(rest.to_vec());
            match first {
                Step::Base => Ok(canonical(base, &rest)?.prefixed(Step::Base)),
                Step::Att(i) if *i < attachments.len() => {
                    let a = &attachments[*i];
                    let c = canonical(&a.tree, &rest)?;
                    if c == canonical(&a.tree, &a.anchor)? {
                        Ok(canonical(base, &a.site)?.prefixed(Step::Base))
                    } else {
                        Ok(c.prefixed(Step::Att(*i)))
                    }
                }
                _ => Err(unknown(addr)),
            }
        }
        (SymbolicTree::GlueFamily(f), [first, rest @ ..]) => {
            let rest = Address(rest.to_vec());
            match first {
                Step::Base => Ok(canonical(&f.base, &rest)?.prefixed(Step::Base)),
                Step::Member(k) if *k >= 1 => {
                    let m = f.member(*k)?;
                    let c = canonical(&m, &rest)?;
                    if c == canonical(&m, &f.anchor())? {
                        Ok(f.site(*k).prefixed(Step::Base))
                    } else {
                        Ok(c.prefixed(Step::Member(*k)))
                    }
                }
                _ => Err(unknown(addr)),
            }
        }
        _ => Err(unknown(addr)),
    }
}

pub fn resolve(t: &SymbolicTree, addr: &Address) -> Result<VertexView, SymbolicError> {
    let c = canonical(t, addr)?;
    resolve_canonical(t, &c)
}

/// Label of a vertex, ignoring everything but the vertex itself.
pub fn label_at(t: &SymbolicTree, addr: &Address) -> Result<Rational, SymbolicError> {
    Ok(resolve(t, addr)?.label)
}

fn merge(into: &mut VertexView, other: VertexView) {
    into.neighbors.extend(other.neighbors);
    into.leaf_sets.extend(other.leaf_sets);
}

fn canonicalize_neighbors(t: &SymbolicTree, v: &mut VertexView) -> Result<(), SymbolicError> {
    for n in &mut v.neighbors {
        *n = canonical(t, n)?;
    }
    Ok(())
}

pub(crate) fn family_anchor_infinite(f: &Family) -> Result<bool, SymbolicError> {
    Ok(resolve(&f.member(1)?, &f.anchor())?.infinite_degree())
}

fn resolve_canonical(t: &SymbolicTree, addr: &Address) -> Result<VertexView, SymbolicError> {
    let leaf = |label: Rational, neighbors: Vec<Address>| VertexView {
        address: addr.clone(),
        label,
        neighbors,
        leaf_sets: Vec::new(),
    };
    match (t, addr.0.as_slice()) {
        (SymbolicTree::Finite { tree, scale }, [Step::Vertex(id)]) => {
            let v = tree.index_of(id)?;
            let mut label = tree.label(v).clone();
            if let Some(s) = scale {
                label = &label * s.value()?;
            }
            let nb = tree.neighbors(v).iter().map(|&w| Address(vec![Step::Vertex(tree.id(w).into())])).collect();
            Ok(leaf(label, nb))
        }
        (SymbolicTree::Ray(s), [Step::Ray(n)]) => {
            let mut nb = Vec::new();
            if *n > 1 {
                nb.push(Address(vec![Step::Ray(n - 1)]));
            }
            nb.push(Address(vec![Step::Ray(n + 1)]));
            Ok(leaf(s.term(*n)?, nb))
        }
        (SymbolicTree::Star { center, leaves }, [Step::Center]) => Ok(VertexView {
            address: addr.clone(),
            label: center.value()?.clone(),
            neighbors: Vec::new(),
            leaf_sets: vec![LeafSet { star: Address::default(), labels: leaves.clone(), hosts_infinite: false }],
        }),
        (SymbolicTree::Star { leaves, .. }, [Step::Leaf(n)]) => {
            Ok(leaf(leaves.term(*n)?, vec![Address(vec![Step::Center])]))
        }
        (SymbolicTree::GlueFinite { base, attachments }, [Step::Base, rest @ ..]) => {
            let rest = Address(rest.to_vec());
            let mut v = resolve_canonical(base, &rest)?.prefixed(Step::Base);
            for (i, a) in attachments.iter().enumerate() {
                let site = canonical(base, &a.site)?;
                let anchor_view = || -> Result<VertexView, SymbolicError> {
                    let mut av = resolve(&a.tree, &a.anchor)?.prefixed(Step::Att(i));
                    canonicalize_neighbors(t, &mut av)?;
                    Ok(av)
                };
                if site == rest {
                    merge(&mut v, anchor_view()?);
                }
                // A leaf of one of this vertex's stars may have become infinite.
                if let Some((Step::Leaf(_), _)) = site.0.split_last() {
                    let star = Address(site.0[..site.0.len() - 1].to_vec()).prefixed(Step::Base);
                    for ls in v.leaf_sets.iter_mut().filter(|ls| ls.star == star) {
                        if resolve(&a.tree, &a.anchor)?.infinite_degree() {
                            ls.hosts_infinite = true;
                        }
                    }
                }
            }
            Ok(v)
        }
        (SymbolicTree::GlueFinite { attachments, .. }, [Step::Att(i), rest @ ..]) => {
            let a = &attachments[*i];
            let mut v = resolve_canonical(&a.tree, &Address(rest.to_vec()))?.prefixed(Step::Att(*i));
            canonicalize_neighbors(t, &mut v)?;
            Ok(v)
        }
        (SymbolicTree::GlueFamily(f), [Step::Base, rest @ ..]) => {
            let rest = Address(rest.to_vec());
            let mut v = resolve_canonical(&f.base, &rest)?.prefixed(Step::Base);
            if let Some(k) = f.member_at(&rest) {
                let m = f.member(k)?;
                let mut av = resolve(&m, &f.anchor())?.prefixed(Step::Member(k));
                canonicalize_neighbors(t, &mut av)?;
                merge(&mut v, av);
            }
            if matches!(f.base, SymbolicTree::Star { .. }) && rest.0 == [Step::Center] && family_anchor_infinite(f)? {
                for ls in &mut v.leaf_sets {
                    ls.hosts_infinite = true;
                }
            }
            Ok(v)
        }
        (SymbolicTree::GlueFamily(f), [Step::Member(k), rest @ ..]) => {
            let m = f.member(*k)?;
            let mut v = resolve_canonical(&m, &Address(rest.to_vec()))?.prefixed(Step::Member(*k));
            canonicalize_neighbors(t, &mut v)?;
            Ok(v)
        }
        _ => Err(unknown(addr)),
    }
}

/// Number of leading terms after which a sequence's zero pattern has
/// repeated twice; small fallback when the pattern is not determined.
pub(crate) fn seq_window(s: &LabelSeq) -> u64 {
    match s.zero_pattern() {
        Ok(z) => z.pre + 2 * z.period + 2,
        Err(_) => 8,
    }
}

/// Members `1..=K` realise every behaviour of the family: the template
/// depends on the member index only through its indexed parameters, whose
/// zero patterns (and the site spacing along the base) repeat within it.
pub(crate) fn family_window(f: &Family) -> Result<u64, SymbolicError> {
    let params = f.template.indexed_params();
    let pats = params.iter().map(LabelSeq::zero_pattern).collect::<Result<Vec<ZeroPattern>, _>>()?;
    let (pre, per) = ZeroPattern::span(&pats);
    let k = (pre + 2 * per + 1).max(2);
    Ok(k + seq_window(f.base_seq()) / f.sites.prog().step + 2)
}

/// Finite set of canonical vertex addresses containing a representative of
/// every vertex class of `t`.
pub fn representatives(t: &SymbolicTree) -> Result<Vec<Address>, SymbolicError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |a: Address, out: &mut Vec<Address>| {
        if seen.insert(a.clone()) {
            out.push(a);
        }
    };
    match t {
        SymbolicTree::Finite { tree, .. } => {
            for id in tree.ids() {
                push(Address(vec![Step::Vertex(id.clone())]), &mut out);
            }
        }
        SymbolicTree::Ray(s) => {
            for n in 1..=seq_window(s) {
                push(Address(vec![Step::Ray(n)]), &mut out);
            }
        }
        SymbolicTree::Star { leaves, .. } => {
            push(Address(vec![Step::Center]), &mut out);
            for n in 1..=seq_window(leaves) {
                push(Address(vec![Step::Leaf(n)]), &mut out);
            }
        }
        SymbolicTree::GlueFinite { base, attachments } => {
            for a in representatives(base)? {
                push(a.prefixed(Step::Base), &mut out);
            }
            for (i, att) in attachments.iter().enumerate() {
                push(canonical(base, &att.site)?.prefixed(Step::Base), &mut out);
                for a in representatives(&att.tree)? {
                    push(canonical(t, &a.prefixed(Step::Att(i)))?, &mut out);
                }
            }
        }
        SymbolicTree::GlueFamily(f) => {
            for a in representatives(&f.base)? {
                push(a.prefixed(Step::Base), &mut out);
            }
            for k in 1..=family_window(f)? {
                let site = f.site(k);
                if let [Step::Ray(n)] = site.0.as_slice() {
                    if *n > 1 {
                        push(Address(vec![Step::Base, Step::Ray(n - 1)]), &mut out);
                    }
                    push(Address(vec![Step::Base, Step::Ray(n + 1)]), &mut out);
                }
                push(site.prefixed(Step::Base), &mut out);
                for a in representatives(&f.member(k)?)? {
                    push(canonical(t, &a.prefixed(Step::Member(k)))?, &mut out);
                }
            }
        }
    }
    Ok(out)
}
