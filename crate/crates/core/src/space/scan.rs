use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::represent::{representable, RepresentOpts};
use super::{conjecture_predicate, validate_space, Ball, Hierarchy, SpaceError, UltraSpace};
use crate::rational::Rational;
use crate::tree::LabeledTree;

pub const DEFAULT_MAX_POINTS: usize = 6;
pub const MAX_VALUES: usize = 4;

#[derive(Debug, Clone)]
enum Shape {
    Leaf,
    Node(usize, Vec<Shape>),
}

impl Shape {
    fn size(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(_, c) => c.iter().map(Shape::size).sum(),
        }
    }

    fn to_hierarchy(&self, values: &[Rational], next: &mut usize) -> Hierarchy {
        match self {
            Shape::Leaf => {
                *next += 1;
                Hierarchy::Leaf(*next - 1)
            }
            Shape::Node(v, c) => Hierarchy::Node {
                value: values[*v].clone(),
                children: c.iter().map(|s| s.to_hierarchy(values, next)).collect(),
            },
        }
    }
}

/// Dendrogram shapes with `size` leaves and root value index below `bound`.
fn shapes(size: usize, bound: usize) -> Vec<Shape> {
    if size == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for v in 0..bound {
        let pool: Vec<Shape> = (1..size).flat_map(|s| shapes(s, v)).collect();
        let mut picked = Vec::new();
        multisets(&pool, 0, size, &mut picked, &mut |kids| out.push(Shape::Node(v, kids.to_vec())));
    }
    out
}

fn multisets(pool: &[Shape], from: usize, left: usize, picked: &mut Vec<Shape>, emit: &mut dyn FnMut(&[Shape])) {
    if left == 0 {
        if picked.len() >= 2 {
            emit(picked);
        }
        return;
    }
    for i in from..pool.len() {
        let s = pool[i].size();
        if s <= left {
            picked.push(pool[i].clone());
            multisets(pool, i, left - s, picked, emit);
            picked.pop();
        }
    }
}

fn check_values(values: &[Rational]) -> Result<Vec<Rational>, SpaceError> {
    if values.len() > MAX_VALUES {
        return Err(SpaceError::SizeCapExceeded { size: values.len(), cap: MAX_VALUES });
    }
    if values.iter().any(|v| !v.is_positive()) {
        return Err(SpaceError::InvalidValues(String::from("distance values must be positive")));
    }
    let set: BTreeSet<Rational> = values.iter().cloned().collect();
    if set.len() != values.len() {
        return Err(SpaceError::InvalidValues(String::from("distance values must be distinct")));
    }
    Ok(set.into_iter().collect())
}

/// One representative per isometry class of ultrametric spaces on `n`
/// points (named `p1..pn`) with distances drawn from `values`, sorted by
/// canonical form.
pub fn enumerate_spaces(n: usize, values: &[Rational]) -> Result<Vec<UltraSpace>, SpaceError> {
    enumerate_spaces_capped(n, values, DEFAULT_MAX_POINTS)
}

pub fn enumerate_spaces_capped(n: usize, values: &[Rational], max_points: usize) -> Result<Vec<UltraSpace>, SpaceError> {
    if n == 0 {
        return Err(SpaceError::Empty);
    }
    if n > max_points {
        return Err(SpaceError::SizeCapExceeded { size: n, cap: max_points });
    }
    let values = check_values(values)?;
    let points: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let mut out: Vec<(String, UltraSpace)> = Vec::new();
    let mut seen = BTreeSet::new();
    for shape in shapes(n, values.len()) {
        let h = shape.to_hierarchy(&values, &mut 0);
        let key = h.canonical();
        if seen.insert(key.clone()) {
            let x = validate_space(points.clone(), h.to_matrix()).expect("dendrogram matrices are ultrametric");
            out.push((key, x));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, x)| x).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub space_id: String,
    pub canonical_hierarchy: String,
    pub space: UltraSpace,
    pub predicate: bool,
    pub failing_ball: Option<Ball>,
    pub representable: bool,
    pub witness_tree: Option<LabeledTree>,
}

impl ScanRecord {
    /// The conjecture predicts `predicate == representable`.
    pub fn agrees(&self) -> bool {
        self.predicate == self.representable
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub spaces: usize,
    pub predicate_true: usize,
    pub representable: usize,
    pub agreements: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub records: Vec<ScanRecord>,
    pub disagreements: Vec<String>,
    pub summary: ScanSummary,
}

impl ScanReport {
    /// Assembles a report from records already in canonical order.
    pub fn from_records(records: Vec<ScanRecord>) -> Self {
        let disagreements: Vec<String> =
            records.iter().filter(|r| !r.agrees()).map(|r| r.space_id.clone()).collect();
        let summary = ScanSummary {
            spaces: records.len(),
            predicate_true: records.iter().filter(|r| r.predicate).count(),
            representable: records.iter().filter(|r| r.representable).count(),
            agreements: records.len() - disagreements.len(),
            disagreements: disagreements.len(),
        };
        ScanReport { records, disagreements, summary }
    }
}

/// Evaluates the predicate and representability for one enumerated space.
pub fn scan_record(n: usize, index: usize, space: UltraSpace, opts: &RepresentOpts) -> Result<ScanRecord, SpaceError> {
    let check = conjecture_predicate(&space);
    let rep = representable(&space, opts)?;
    Ok(ScanRecord {
        space_id: format!("n{n}-{index:04}"),
        canonical_hierarchy: Hierarchy::of(&space).canonical(),
        predicate: check.holds,
        failing_ball: check.failing_ball,
        representable: rep.witness.is_some(),
        witness_tree: rep.witness,
        space,
    })
}

pub fn conjecture_scan(n: usize, values: &[Rational], opts: &RepresentOpts) -> Result<ScanReport, SpaceError> {
    let spaces = enumerate_spaces_capped(n, values, opts.cap())?;
    let records = spaces
        .into_iter()
        .enumerate()
        .map(|(i, x)| scan_record(n, i, x, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScanReport::from_records(records))
}
