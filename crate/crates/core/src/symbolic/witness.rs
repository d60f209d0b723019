//! Labelings of a free tree that make the generated space compact, or
//! discrete and totally bounded.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::classify::{free_predicates, plain, sup_label};
use super::resolve::{canonical, label_at, resolve};
use super::seq::{LabelSeq, Scalar};
use super::tree::{Address, Attachment, Family, Step, SymbolicTree};
use super::SymbolicError;
use crate::rational::Rational;

/// Zeros on the vertices of infinite degree, `1/n` along every ray and every
/// leaf set, 1 on finite pieces; attachments are rescaled to agree with the
/// label of their site.
pub fn compact_labeling_witness(t: &SymbolicTree) -> Result<SymbolicTree, SymbolicError> {
    let fp = free_predicates(t)?;
    if !fp.rayless {
        return Err(SymbolicError::PreconditionFailed(String::from("rayless")));
    }
    if fp.has_adjacent_infinite_degree_pair {
        return Err(SymbolicError::PreconditionFailed(String::from(
            "no two adjacent vertices of infinite degree",
        )));
    }
    relabel(t, &BTreeSet::new())
}

/// Positive labels tending to 0: `1/n` along rays, constants on finite
/// pieces, rescaled so that family members shrink with their sites.
pub fn discrete_tb_labeling_witness(t: &SymbolicTree) -> Result<SymbolicTree, SymbolicError> {
    if !free_predicates(t)?.locally_finite {
        return Err(SymbolicError::PreconditionFailed(String::from("locally_finite")));
    }
    relabel(t, &BTreeSet::new())
}

fn under(zeros: &BTreeSet<Address>, step: &Step) -> BTreeSet<Address> {
    zeros
        .iter()
        .filter_map(|a| match a.split_first() {
            Some((s, rest)) if s == step => Some(rest),
            _ => None,
        })
        .collect()
}

fn infinite_anchor(t: &SymbolicTree, anchor: &Address) -> Result<bool, SymbolicError> {
    Ok(resolve(&plain(t)?, anchor)?.infinite_degree())
}

/// Scale factor taking label `x` to `y`.
fn ratio(y: &Rational, x: &Rational, what: &Address) -> Result<Rational, SymbolicError> {
    if x.is_zero() {
        return Err(SymbolicError::Unsupported(alloc::format!(
            "a vertex of infinite degree glued to the positive site {what}"
        )));
    }
    Ok(y / x)
}

/// `zeros`: vertices of finite pieces that must be labeled 0.
fn relabel(t: &SymbolicTree, zeros: &BTreeSet<Address>) -> Result<SymbolicTree, SymbolicError> {
    let harmonic = || LabelSeq::harmonic(Rational::one());
    Ok(match t {
        SymbolicTree::Finite { tree, .. } => {
            let labels: Vec<Rational> = tree
                .ids()
                .iter()
                .map(|id| {
                    if zeros.contains(&Address(alloc::vec![Step::Vertex(id.clone())])) {
                        Rational::zero()
                    } else {
                        Rational::one()
                    }
                })
                .collect();
            SymbolicTree::finite(tree.relabeled(labels)?)
        }
        SymbolicTree::Ray(_) => SymbolicTree::Ray(harmonic()),
        SymbolicTree::Star { .. } => SymbolicTree::star(Rational::zero(), harmonic()),
        SymbolicTree::GlueFinite { base, attachments } => {
            let mut base_zeros = under(zeros, &Step::Base);
            for a in attachments {
                if infinite_anchor(&a.tree, &a.anchor)? {
                    base_zeros.insert(canonical(base, &a.site)?);
                }
            }
            let new_base = relabel(base, &base_zeros)?;
            let mut new_atts = Vec::with_capacity(attachments.len());
            for (i, a) in attachments.iter().enumerate() {
                let site = canonical(base, &a.site)?;
                let anchor = canonical(&a.tree, &a.anchor)?;
                let y = label_at(&new_base, &site)?;
                let mut att_zeros = under(zeros, &Step::Att(i));
                if y.is_zero() {
                    att_zeros.insert(anchor.clone());
                }
                let mut tree = relabel(&a.tree, &att_zeros)?;
                let x = label_at(&tree, &anchor)?;
                if x != y {
                    tree = tree.scaled(&Scalar::Lit(ratio(&y, &x, &site)?))?;
                }
                new_atts.push(Attachment { site: a.site.clone(), anchor: a.anchor.clone(), tree });
            }
            SymbolicTree::GlueFinite { base: Box::new(new_base), attachments: new_atts }
        }
        SymbolicTree::GlueFamily(f) => {
            let base = relabel(&f.base, &BTreeSet::new())?;
            let template = relabel(&f.template, &BTreeSet::new())?;
            let anchor = canonical(&template, &f.anchor())?;
            let x = label_at(&template, &anchor)?;
            let p = f.sites.prog();
            let base_seq = match &base {
                SymbolicTree::Ray(s) => s.clone(),
                SymbolicTree::Star { leaves, .. } => leaves.clone(),
                _ => return Err(SymbolicError::InvalidFamily(String::from("the base must be a ray or a star"))),
            };
            let site_labels = LabelSeq::subsequence(base_seq, p.offset, p.step);
            let first = f.site(1).prefixed(Step::Base);
            let unit = ratio(&Rational::one(), &x, &first)?;
            let sup = sup_label(&template)?;
            SymbolicTree::GlueFamily(Box::new(Family {
                base,
                sites: f.sites,
                template: template.scaled(&Scalar::indexed(site_labels.scaled(&Scalar::Lit(unit.clone()))?))?,
                anchor: f.anchor.clone(),
                envelope: site_labels.scaled(&Scalar::Lit(&sup * &unit))?,
            }))
        }
    })
}
