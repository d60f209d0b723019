//! Validation, topological classification and level-set counts.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::resolve::{canonical, family_window, label_at, representatives, resolve, LeafSet, VertexView};
use super::seq::{Count, LabelSeq, Scalar, SeqError};
use super::tree::{describe_edge, Address, Family, Step, SymbolicTree};
use super::{EnvelopeBreach, LabelMismatch, SymbolicError};
use crate::rational::Rational;
use crate::tree::LabeledTree;

/// Members beyond the periodicity window that are still checked directly.
const SPOT_CHECK: u64 = 64;
const ENVELOPE_CHECK: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A ray starting at `start` whose labels are `labels`.
    Ray { start: Address, labels: LabelSeq, limsup: Rational },
    /// A vertex labeled 0 with infinitely many neighbours whose labels have infimum 0.
    Accumulation { vertex: Address, leaves: Address, labels: LabelSeq },
    /// Infinitely many vertices with label at least `epsilon`, found along `at`.
    InfiniteLevelSet { at: Address, epsilon: Rational, labels: LabelSeq },
    /// A vertex of infinite degree with a positive label.
    InfiniteDegree { vertex: Address, label: Rational },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Ray { start, labels, limsup } => write!(f, "ray from {start} with labels {labels} (limsup {limsup})"),
            Witness::Accumulation { vertex, leaves, labels } => {
                write!(f, "{vertex} is a limit of the leaves of {leaves} with labels {labels}")
            }
            Witness::InfiniteLevelSet { at, epsilon, labels } => {
                write!(f, "infinitely many labels >= {epsilon} at {at} ({labels})")
            }
            Witness::InfiniteDegree { vertex, label } => write!(f, "{vertex} has infinite degree and label {label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgement {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Judgement {
    fn from_witness(w: Option<Witness>) -> Self {
        Judgement { holds: w.is_none(), witness: w }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub complete: Judgement,
    pub discrete: Judgement,
    pub totally_bounded: Judgement,
    pub discrete_and_tb: bool,
    pub compact: Judgement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeTreeReport {
    pub rayless: bool,
    pub locally_finite: bool,
    pub finite: bool,
    pub has_adjacent_infinite_degree_pair: bool,
    pub countable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedPoint {
    pub vertex: Address,
    pub label: Rational,
    pub isolated: bool,
    /// For an accumulation point: leaves converging to it.
    pub approach: Option<LeafSet>,
    /// The first few of those leaves, all isolated.
    pub approach_prefix: Vec<Address>,
}

/// One constructor occurrence, with the address of the constructor.
enum Piece {
    Finite { at: Address, tree: LabeledTree, scale: Rational },
    Ray { at: Address, labels: LabelSeq },
    Star { at: Address, center: Rational, leaves: LabelSeq },
    Envelope { at: Address, family: Box<Family> },
}

fn sub(at: &Address, step: Step) -> Address {
    let mut v = at.0.clone();
    v.push(step);
    Address(v)
}

fn lit(s: &Scalar) -> Result<Rational, SymbolicError> {
    Ok(s.value()?.clone())
}

fn pieces(t: &SymbolicTree, at: &Address, out: &mut Vec<Piece>) -> Result<(), SymbolicError> {
    match t {
        SymbolicTree::Finite { tree, scale } => out.push(Piece::Finite {
            at: at.clone(),
            tree: tree.clone(),
            scale: scale.as_ref().map(lit).transpose()?.unwrap_or_else(Rational::one),
        }),
        SymbolicTree::Ray(s) => out.push(Piece::Ray { at: at.clone(), labels: s.clone() }),
        SymbolicTree::Star { center, leaves } => {
            out.push(Piece::Star { at: at.clone(), center: lit(center)?, leaves: leaves.clone() })
        }
        SymbolicTree::GlueFinite { base, attachments } => {
            pieces(base, &sub(at, Step::Base), out)?;
            for (i, a) in attachments.iter().enumerate() {
                pieces(&a.tree, &sub(at, Step::Att(i)), out)?;
            }
        }
        SymbolicTree::GlueFamily(f) => {
            pieces(&f.base, &sub(at, Step::Base), out)?;
            out.push(Piece::Envelope { at: at.clone(), family: f.clone() });
            for k in 1..=family_window(f)? {
                pieces(&f.member(k)?, &sub(at, Step::Member(k)), out)?;
            }
        }
    }
    Ok(())
}

fn nonnegative(v: &Rational, what: &str) -> Result<(), SymbolicError> {
    if v.is_negative() {
        return Err(SeqError::InvalidParameter(format!("{what} is negative")).into());
    }
    Ok(())
}

/// Largest label of a tree; for families, the envelope's supremum stands in
/// for the members beyond the base.
pub(crate) fn sup_label(t: &SymbolicTree) -> Result<Rational, SymbolicError> {
    let seq_sup = |s: &LabelSeq| {
        s.stats()?.sup.ok_or_else(|| SymbolicError::Undecidable(format!("supremum of {s}")))
    };
    Ok(match t {
        SymbolicTree::Finite { tree, scale } => {
            let m = tree.labels().iter().max().cloned().unwrap_or_else(Rational::zero);
            match scale {
                Some(s) => &m * s.value()?,
                None => m,
            }
        }
        SymbolicTree::Ray(s) => seq_sup(s)?,
        SymbolicTree::Star { center, leaves } => lit(center)?.max(seq_sup(leaves)?),
        SymbolicTree::GlueFinite { base, attachments } => {
            let mut m = sup_label(base)?;
            for a in attachments {
                m = m.max(sup_label(&a.tree)?);
            }
            m
        }
        SymbolicTree::GlueFamily(f) => sup_label(&f.base)?.max(seq_sup(&f.envelope)?),
    })
}

/// Checks parameters, addresses, label agreement at glued vertices and
/// family envelopes.
pub fn validate(t: &SymbolicTree) -> Result<(), SymbolicError> {
    if !t.is_concrete() {
        return Err(SeqError::Unbound.into());
    }
    check(t)
}

fn check(t: &SymbolicTree) -> Result<(), SymbolicError> {
    match t {
        SymbolicTree::Finite { scale, .. } => {
            if let Some(s) = scale {
                nonnegative(s.value()?, "scale")?;
            }
        }
        SymbolicTree::Ray(s) => s.validate()?,
        SymbolicTree::Star { center, leaves } => {
            nonnegative(center.value()?, "star center label")?;
            leaves.validate()?;
        }
        SymbolicTree::GlueFinite { base, attachments } => {
            check(base)?;
            let mut seen = BTreeSet::new();
            for a in attachments {
                check(&a.tree)?;
                let site = canonical(base, &a.site)?;
                let anchor = canonical(&a.tree, &a.anchor)?;
                if !seen.insert(site.clone()) {
                    return Err(SymbolicError::DuplicateSite(site.to_string()));
                }
                agree(&site, label_at(base, &site)?, &anchor, label_at(&a.tree, &anchor)?)?;
            }
        }
        SymbolicTree::GlueFamily(f) => check_family(f)?,
    }
    Ok(())
}

fn agree(site: &Address, base_label: Rational, anchor: &Address, anchor_label: Rational) -> Result<(), SymbolicError> {
    if base_label != anchor_label {
        return Err(SymbolicError::GlueLabelMismatch(Box::new(LabelMismatch {
            site: site.to_string(),
            anchor: anchor.to_string(),
            base_label,
            anchor_label,
        })));
    }
    Ok(())
}

fn check_family(f: &Family) -> Result<(), SymbolicError> {
    if !matches!(f.base, SymbolicTree::Ray(_) | SymbolicTree::Star { .. }) {
        return Err(SymbolicError::InvalidFamily(String::from("the base must be a ray or a star")));
    }
    let p = f.sites.prog();
    if p.offset == 0 || p.step == 0 {
        return Err(SymbolicError::InvalidFamily(String::from("site progression needs offset and step >= 1")));
    }
    check(&f.base)?;
    f.envelope.validate()?;
    for s in f.template.indexed_params() {
        if !s.is_concrete() {
            return Err(SeqError::InvalidParameter(String::from("nested indexed parameter")).into());
        }
        s.validate()?;
    }
    let window = family_window(f)?;
    let anchor = f.anchor();
    for k in 1..=window.max(SPOT_CHECK) {
        let m = f.member(k)?;
        if k <= window {
            check(&m)?;
        }
        let a = canonical(&m, &anchor)?;
        let site = f.site(k);
        agree(&site.prefixed(Step::Base), label_at(&f.base, &site)?, &a.prefixed(Step::Member(k)), label_at(&m, &a)?)?;
        if k <= window.max(ENVELOPE_CHECK) {
            let sup = sup_label(&m)?;
            let envelope = f.envelope.term(k)?;
            if sup > envelope {
                return Err(SymbolicError::EnvelopeViolation(Box::new(EnvelopeBreach { k, sup, envelope })));
            }
        }
    }
    Ok(())
}

fn degenerate_edge(ps: &[Piece]) -> Result<Option<String>, SymbolicError> {
    for p in ps {
        match p {
            Piece::Finite { at, tree, scale } => {
                for (u, v) in tree.edges() {
                    if (tree.label(u) * scale).is_zero() && (tree.label(v) * scale).is_zero() {
                        let a = sub(at, Step::Vertex(tree.id(u).into()));
                        let b = sub(at, Step::Vertex(tree.id(v).into()));
                        return Ok(Some(describe_edge(&a, &b)));
                    }
                }
            }
            Piece::Ray { at, labels } => {
                let z = labels.zero_pattern()?;
                if let Some(n) = (1..=z.pre + z.period + 1).find(|&n| z.zero_at(n) && z.zero_at(n + 1)) {
                    return Ok(Some(describe_edge(&sub(at, Step::Ray(n)), &sub(at, Step::Ray(n + 1)))));
                }
            }
            Piece::Star { at, center, leaves } => {
                if center.is_zero() {
                    if let Some(n) = leaves.zero_pattern()?.first_zero() {
                        return Ok(Some(describe_edge(&sub(at, Step::Center), &sub(at, Step::Leaf(n)))));
                    }
                }
            }
            Piece::Envelope { .. } => {}
        }
    }
    Ok(None)
}

/// Validates `t` and rejects labelings with an edge between two zeros.
fn prepare(t: &SymbolicTree) -> Result<Vec<Piece>, SymbolicError> {
    validate(t)?;
    let mut ps = Vec::new();
    pieces(t, &Address::default(), &mut ps)?;
    if let Some(e) = degenerate_edge(&ps)? {
        return Err(SymbolicError::DegenerateLabeling(e));
    }
    Ok(ps)
}

fn views(t: &SymbolicTree) -> Result<Vec<VertexView>, SymbolicError> {
    representatives(t)?.iter().map(|a| resolve(t, a)).collect()
}

fn accumulation(v: &VertexView) -> Result<Option<&LeafSet>, SymbolicError> {
    if !v.label.is_zero() {
        return Ok(None);
    }
    for ls in &v.leaf_sets {
        if ls.labels.stats()?.inf.is_zero() {
            return Ok(Some(ls));
        }
    }
    Ok(None)
}

fn adjacent_infinite(t: &SymbolicTree, vs: &[VertexView]) -> Result<bool, SymbolicError> {
    for v in vs.iter().filter(|v| v.infinite_degree()) {
        if v.leaf_sets.iter().any(|ls| ls.hosts_infinite) {
            return Ok(true);
        }
        for n in &v.neighbors {
            if resolve(t, n)?.infinite_degree() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Member `k` of the family has label supremum exactly `envelope(k)` on
/// every checked member.
fn envelope_tight(f: &Family) -> Result<bool, SymbolicError> {
    for k in 1..=family_window(f)?.max(ENVELOPE_CHECK) {
        if sup_label(&f.member(k)?)? != f.envelope.term(k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A witness that some `V_ε` is infinite, if one exists.
fn infinite_level_set(t: &SymbolicTree, ps: &[Piece]) -> Result<Option<Witness>, SymbolicError> {
    let two = Rational::from(2u64);
    for p in ps {
        let (at, labels) = match p {
            Piece::Ray { at, labels } => (canonical(t, &sub(at, Step::Ray(1)))?, labels),
            Piece::Star { at, leaves, .. } => (canonical(t, &sub(at, Step::Center))?, leaves),
            Piece::Envelope { at, family } => {
                let st = family.envelope.stats()?;
                if st.vanishes {
                    continue;
                }
                if !envelope_tight(family)? {
                    return Err(SymbolicError::Undecidable(format!(
                        "the envelope {} of the family at {at} does not vanish and is not attained",
                        family.envelope
                    )));
                }
                // sup of member k exceeds limsup/2 infinitely often, at distinct vertices.
                return Ok(Some(Witness::InfiniteLevelSet {
                    at: at.clone(),
                    epsilon: &st.limsup / &two,
                    labels: family.envelope.clone(),
                }));
            }
            Piece::Finite { .. } => continue,
        };
        let st = labels.stats()?;
        if !st.vanishes {
            return Ok(Some(Witness::InfiniteLevelSet { at, epsilon: &st.limsup / &two, labels: labels.clone() }));
        }
    }
    Ok(None)
}

pub fn classify(t: &SymbolicTree) -> Result<Verdict, SymbolicError> {
    let ps = prepare(t)?;
    let vs = views(t)?;

    let mut rays = Vec::new();
    for p in &ps {
        if let Piece::Ray { at, labels } = p {
            let start = canonical(t, &sub(at, Step::Ray(1)))?;
            rays.push(Witness::Ray { start, labels: labels.clone(), limsup: labels.stats()?.limsup });
        }
    }
    let not_complete = rays.iter().find(|w| matches!(w, Witness::Ray { limsup, .. } if limsup.is_zero())).cloned();

    let mut not_discrete = None;
    for v in &vs {
        if let Some(ls) = accumulation(v)? {
            not_discrete =
                Some(Witness::Accumulation { vertex: v.address.clone(), leaves: ls.star.clone(), labels: ls.labels.clone() });
            break;
        }
    }

    let level = infinite_level_set(t, &ps)?;
    let positive_infinite = vs
        .iter()
        .find(|v| v.infinite_degree() && v.label.is_positive())
        .map(|v| Witness::InfiniteDegree { vertex: v.address.clone(), label: v.label.clone() });
    let not_tb = level.clone().or(positive_infinite);
    let totally_bounded = Judgement::from_witness(not_tb.clone());
    let compact = Judgement::from_witness(rays.first().cloned().or(not_tb));

    Ok(Verdict {
        complete: Judgement::from_witness(not_complete),
        discrete: Judgement::from_witness(not_discrete),
        totally_bounded,
        discrete_and_tb: !t.has_star() && level.is_none(),
        compact,
    })
}

/// Every label replaced by 1; same vertices and edges.
pub(crate) fn plain(t: &SymbolicTree) -> Result<SymbolicTree, SymbolicError> {
    let one = || LabelSeq::constant(Rational::one());
    Ok(match t {
        SymbolicTree::Finite { tree, .. } => SymbolicTree::finite(tree.relabeled(vec![Rational::one(); tree.len()])?),
        SymbolicTree::Ray(_) => SymbolicTree::Ray(one()),
        SymbolicTree::Star { .. } => SymbolicTree::star(Rational::one(), one()),
        SymbolicTree::GlueFinite { base, attachments } => SymbolicTree::GlueFinite {
            base: Box::new(plain(base)?),
            attachments: attachments
                .iter()
                .map(|a| {
                    Ok(super::tree::Attachment { site: a.site.clone(), anchor: a.anchor.clone(), tree: plain(&a.tree)? })
                })
                .collect::<Result<_, SymbolicError>>()?,
        },
        SymbolicTree::GlueFamily(f) => SymbolicTree::GlueFamily(Box::new(Family {
            base: plain(&f.base)?,
            sites: f.sites,
            template: plain(&f.template)?,
            anchor: f.anchor.clone(),
            envelope: one(),
        })),
    })
}

/// Properties of the underlying unlabeled tree.
pub fn free_predicates(t: &SymbolicTree) -> Result<FreeTreeReport, SymbolicError> {
    let p = plain(t)?;
    validate(&p)?;
    let vs = views(&p)?;
    Ok(FreeTreeReport {
        rayless: !t.has_ray(),
        locally_finite: !t.has_star(),
        finite: t.is_finite(),
        has_adjacent_infinite_degree_pair: adjacent_infinite(&p, &vs)?,
        countable: true,
    })
}

const APPROACH_PREFIX: usize = 5;

/// Isolated vs. accumulation status of one representative per vertex class.
pub fn isolated_points(t: &SymbolicTree) -> Result<Vec<IsolatedPoint>, SymbolicError> {
    prepare(t)?;
    let mut out = Vec::new();
    for v in views(t)? {
        let approach = accumulation(&v)?.cloned();
        let mut approach_prefix = Vec::new();
        if let Some(ls) = &approach {
            let mut n = 1;
            while approach_prefix.len() < APPROACH_PREFIX {
                if ls.labels.term(n)?.is_positive() {
                    approach_prefix.push(canonical(t, &sub(&ls.star, Step::Leaf(n)))?);
                }
                n += 1;
            }
        }
        out.push(IsolatedPoint {
            vertex: v.address,
            label: v.label,
            isolated: approach.is_none(),
            approach,
            approach_prefix,
        });
    }
    Ok(out)
}

fn minus_one(c: Count, yes: bool) -> Count {
    match c {
        Count::Finite(n) if yes => Count::Finite(n - 1),
        c => c,
    }
}

fn member_indices(f: &Family, eps: &Rational) -> Result<Vec<u64>, SymbolicError> {
    f.envelope.indices_geq(eps).map_err(|e| match e {
        SeqError::Undetermined(m) => SymbolicError::Undecidable(format!("family envelope: {m}")),
        e => e.into(),
    })
}

fn count_in(t: &SymbolicTree, eps: &Rational) -> Result<Count, SymbolicError> {
    Ok(match t {
        SymbolicTree::Finite { tree, scale } => {
            let s = scale.as_ref().map(lit).transpose()?.unwrap_or_else(Rational::one);
            Count::Finite(tree.labels().iter().filter(|l| &(*l * &s) >= eps).count() as u64)
        }
        SymbolicTree::Ray(s) => s.count_geq(eps)?,
        SymbolicTree::Star { center, leaves } => {
            Count::Finite(u64::from(&lit(center)? >= eps)) + leaves.count_geq(eps)?
        }
        SymbolicTree::GlueFinite { base, attachments } => {
            let mut total = count_in(base, eps)?;
            for a in attachments {
                let shared = &label_at(&a.tree, &a.anchor)? >= eps;
                total = total + minus_one(count_in(&a.tree, eps)?, shared);
            }
            total
        }
        SymbolicTree::GlueFamily(f) => {
            let mut total = count_in(&f.base, eps)?;
            for k in member_indices(f, eps)? {
                let shared = &label_at(&f.base, &f.site(k))? >= eps;
                total = total + minus_one(count_in(&f.member(k)?, eps)?, shared);
            }
            total
        }
    })
}

/// `|V_ε|`: the number of vertices with label at least `eps`.
pub fn count_geq(t: &SymbolicTree, eps: &Rational) -> Result<Count, SymbolicError> {
    if !eps.is_positive() {
        return Err(SeqError::NonPositiveEpsilon.into());
    }
    validate(t)?;
    count_in(t, eps)
}

/// Smallest truncation budget that materializes the vertex `addr`.
fn site_budget(t: &SymbolicTree, addr: &Address) -> Result<u64, SymbolicError> {
    Ok(match (t, addr.0.as_slice()) {
        (_, [Step::Ray(n)] | [Step::Leaf(n)]) => *n,
        (_, [Step::Center] | [Step::Vertex(_)]) => 1,
        (SymbolicTree::GlueFinite { base, .. }, [Step::Base, rest @ ..]) => site_budget(base, &Address(rest.to_vec()))?,
        (SymbolicTree::GlueFinite { base, attachments }, [Step::Att(i), rest @ ..]) => {
            let a = &attachments[*i];
            site_budget(base, &a.site)?.max(site_budget(&a.tree, &Address(rest.to_vec()))?)
        }
        (SymbolicTree::GlueFamily(f), [Step::Base, rest @ ..]) => site_budget(&f.base, &Address(rest.to_vec()))?,
        (SymbolicTree::GlueFamily(f), [Step::Member(k), rest @ ..]) => {
            let m = f.member(*k)?;
            (*k).max(site_budget(&f.base, &f.site(*k))?).max(site_budget(&m, &Address(rest.to_vec()))?)
        }
        _ => return Err(SymbolicError::UnknownAddress(addr.to_string())),
    })
}

fn last_index(s: &LabelSeq, eps: &Rational) -> Result<Option<u64>, SymbolicError> {
    Ok(match s.count_geq(eps)? {
        Count::Infinite => None,
        Count::Finite(_) => Some(s.indices_geq(eps)?.last().copied().unwrap_or(1)),
    })
}

fn budget_in(t: &SymbolicTree, eps: &Rational) -> Result<Option<u64>, SymbolicError> {
    Ok(match t {
        SymbolicTree::Finite { .. } => Some(1),
        SymbolicTree::Ray(s) => last_index(s, eps)?,
        SymbolicTree::Star { leaves, .. } => last_index(leaves, eps)?,
        SymbolicTree::GlueFinite { base, attachments } => {
            let Some(mut b) = budget_in(base, eps)? else { return Ok(None) };
            for a in attachments {
                let shared = &label_at(&a.tree, &a.anchor)? >= eps;
                match minus_one(count_in(&a.tree, eps)?, shared) {
                    Count::Infinite => return Ok(None),
                    Count::Finite(0) => {}
                    Count::Finite(_) => {
                        let Some(inner) = budget_in(&a.tree, eps)? else { return Ok(None) };
                        b = b.max(site_budget(base, &a.site)?).max(inner);
                    }
                }
            }
            Some(b)
        }
        SymbolicTree::GlueFamily(f) => {
            let Some(mut b) = budget_in(&f.base, eps)? else { return Ok(None) };
            for k in member_indices(f, eps)? {
                let m = f.member(k)?;
                let shared = &label_at(&f.base, &f.site(k))? >= eps;
                match minus_one(count_in(&m, eps)?, shared) {
                    Count::Infinite => return Ok(None),
                    Count::Finite(0) => {}
                    Count::Finite(_) => {
                        let Some(inner) = budget_in(&m, eps)? else { return Ok(None) };
                        b = b.max(k).max(site_budget(&f.base, &f.site(k))?).max(inner);
                    }
                }
            }
            Some(b)
        }
    })
}

/// Smallest budget `b` such that `truncate(t, b)` contains all of `V_ε`;
/// `None` when `V_ε` is infinite.
pub fn certificate_budget(t: &SymbolicTree, eps: &Rational) -> Result<Option<u64>, SymbolicError> {
    if !eps.is_positive() {
        return Err(SeqError::NonPositiveEpsilon.into());
    }
    validate(t)?;
    budget_in(t, eps)
}
