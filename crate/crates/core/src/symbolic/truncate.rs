//! Finite materialization of symbolic trees.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::classify::validate;
use super::resolve::canonical;
use super::tree::{Address, Step, SymbolicTree};
use super::{LabelMismatch, SymbolicError};
use crate::rational::Rational;
use crate::tree::{build_tree, LabeledTree};

/// A finite subtree; vertex ids are the canonical addresses, as strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub tree: LabeledTree,
    pub addresses: BTreeMap<String, Address>,
}

#[derive(Default)]
struct Part {
    verts: Vec<(Address, Rational)>,
    edges: Vec<(Address, Address)>,
}

impl Part {
    fn absorb(&mut self, other: Part, step: Step, anchor: &Address, site: &Address) -> Result<(), SymbolicError> {
        let map = |a: Address| if &a == anchor { site.clone() } else { a.prefixed(step.clone()) };
        let mut found = false;
        for (a, l) in other.verts {
            if &a == anchor {
                found = true;
                let base_label = &self.verts.iter().find(|(v, _)| v == site).expect("site materialized").1;
                if base_label != &l {
                    return Err(SymbolicError::GlueLabelMismatch(Box::new(LabelMismatch {
                        site: site.to_string(),
                        anchor: anchor.prefixed(step).to_string(),
                        base_label: base_label.clone(),
                        anchor_label: l,
                    })));
                }
                continue;
            }
            self.verts.push((map(a), l));
        }
        debug_assert!(found, "anchor materialized");
        self.edges.extend(other.edges.into_iter().map(|(a, b)| (map(a), map(b))));
        Ok(())
    }

    fn prefixed(self, step: Step) -> Part {
        Part {
            verts: self.verts.into_iter().map(|(a, l)| (a.prefixed(step.clone()), l)).collect(),
            edges: self.edges.into_iter().map(|(a, b)| (a.prefixed(step.clone()), b.prefixed(step.clone()))).collect(),
        }
    }

    fn contains(&self, a: &Address) -> bool {
        self.verts.iter().any(|(v, _)| v == a)
    }
}

fn one(step: Step) -> Address {
    Address(alloc::vec![step])
}

/// Budget large enough to materialize `addr` (canonical in `t`).
fn reach(t: &SymbolicTree, addr: &Address) -> u64 {
    match (t, addr.0.as_slice()) {
        (SymbolicTree::GlueFinite { base, .. }, [Step::Base, rest @ ..]) => reach(base, &Address(rest.to_vec())),
        (SymbolicTree::GlueFamily(f), [Step::Base, rest @ ..]) => reach(&f.base, &Address(rest.to_vec())),
        (_, [Step::Ray(n)] | [Step::Leaf(n)]) => *n,
        _ => 1,
    }
}

fn part(t: &SymbolicTree, b: u64) -> Result<Part, SymbolicError> {
    let mut p = Part::default();
    match t {
        SymbolicTree::Finite { tree, scale } => {
            let s = match scale {
                Some(s) => s.value()?.clone(),
                None => Rational::one(),
            };
            for (i, id) in tree.ids().iter().enumerate() {
                p.verts.push((one(Step::Vertex(id.clone())), tree.label(i) * &s));
            }
            for (u, v) in tree.edge_ids() {
                p.edges.push((one(Step::Vertex(u)), one(Step::Vertex(v))));
            }
        }
        SymbolicTree::Ray(s) => {
            for n in 1..=b {
                p.verts.push((one(Step::Ray(n)), s.term(n)?));
                if n > 1 {
                    p.edges.push((one(Step::Ray(n - 1)), one(Step::Ray(n))));
                }
            }
        }
        SymbolicTree::Star { center, leaves } => {
            p.verts.push((one(Step::Center), center.value()?.clone()));
            for n in 1..=b {
                p.verts.push((one(Step::Leaf(n)), leaves.term(n)?));
                p.edges.push((one(Step::Center), one(Step::Leaf(n))));
            }
        }
        SymbolicTree::GlueFinite { base, attachments } => {
            p = part(base, b)?.prefixed(Step::Base);
            for (i, a) in attachments.iter().enumerate() {
                let site = canonical(base, &a.site)?.prefixed(Step::Base);
                if !p.contains(&site) {
                    continue;
                }
                let anchor = canonical(&a.tree, &a.anchor)?;
                let inner = part(&a.tree, b.max(reach(&a.tree, &anchor)))?;
                p.absorb(inner, Step::Att(i), &anchor, &site)?;
            }
        }
        SymbolicTree::GlueFamily(f) => {
            p = part(&f.base, b)?.prefixed(Step::Base);
            for k in 1..=b {
                let site = f.site(k).prefixed(Step::Base);
                if !p.contains(&site) {
                    break;
                }
                let m = f.member(k)?;
                let anchor = canonical(&m, &f.anchor())?;
                let inner = part(&m, b.max(reach(&m, &anchor)))?;
                p.absorb(inner, Step::Member(k), &anchor, &site)?;
            }
        }
    }
    Ok(p)
}

/// Rays keep their first `budget` vertices, stars their first `budget`
/// leaves, families their first `budget` members (those whose site is
/// kept), each truncated the same way.
pub fn truncate(t: &SymbolicTree, budget: u64) -> Result<Truncation, SymbolicError> {
    if budget == 0 {
        return Err(SymbolicError::ZeroBudget);
    }
    validate(t)?;
    let p = part(t, budget)?;
    let mut addresses = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut ids = Vec::with_capacity(p.verts.len());
    for (a, l) in p.verts {
        let id = a.to_string();
        labels.insert(id.clone(), l);
        addresses.insert(id.clone(), a);
        ids.push(id);
    }
    let edges = p.edges.into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    Ok(Truncation { tree: build_tree(ids, edges, labels)?, addresses })
}
