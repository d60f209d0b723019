use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::UltraSpace;
use crate::rational::Rational;

/// Dendrogram of a finite ultrametric: leaves are points, internal values
/// strictly decrease from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hierarchy {
    Leaf(usize),
    Node { value: Rational, children: Vec<Hierarchy> },
}

impl Hierarchy {
    pub fn of(x: &UltraSpace) -> Hierarchy {
        let all: Vec<usize> = (0..x.len()).collect();
        build(x, &all)
    }

    /// Isometry-invariant encoding: `*` for a leaf, `v(c1,c2,…)` otherwise
    /// with children sorted.
    pub fn canonical(&self) -> String {
        match self {
            Hierarchy::Leaf(_) => "*".to_string(),
            Hierarchy::Node { value, children } => {
                let mut parts: Vec<String> = children.iter().map(Hierarchy::canonical).collect();
                parts.sort();
                format!("{value}({})", parts.join(","))
            }
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Hierarchy::Leaf(p) => out.push(*p),
            Hierarchy::Node { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Induced matrix over points `0..n`, where `n` is the number of leaves.
    pub fn to_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.leaves().len();
        let mut m = vec![vec![Rational::zero(); n]; n];
        self.fill(&mut m);
        m
    }

    fn fill(&self, m: &mut [Vec<Rational>]) {
        if let Hierarchy::Node { value, children } = self {
            let groups: Vec<Vec<usize>> = children.iter().map(Hierarchy::leaves).collect();
            for (a, ga) in groups.iter().enumerate() {
                for gb in &groups[a + 1..] {
                    for &x in ga {
                        for &y in gb {
                            m[x][y] = value.clone();
                            m[y][x] = value.clone();
                        }
                    }
                }
            }
            children.iter().for_each(|c| c.fill(m));
        }
    }
}

fn build(x: &UltraSpace, set: &[usize]) -> Hierarchy {
    if set.len() == 1 {
        return Hierarchy::Leaf(set[0]);
    }
    let top = set.iter().flat_map(|&a| set.iter().map(move |&b| x.get(a, b))).max().unwrap().clone();
    if top.is_zero() {
        return Hierarchy::Node { value: top, children: set.iter().map(|&p| Hierarchy::Leaf(p)).collect() };
    }
    // `d < top` is an equivalence relation in an ultrametric.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &p in set {
        match groups.iter_mut().find(|g| x.get(g[0], p) < &top) {
            Some(g) => g.push(p),
            None => groups.push(vec![p]),
        }
    }
    Hierarchy::Node { value: top, children: groups.iter().map(|g| build(x, g)).collect() }
}

/// Distance-preserving bijection from points of `x` to points of `y`.
pub fn isometric(x: &UltraSpace, y: &UltraSpace) -> Option<BTreeMap<String, String>> {
    if x.len() != y.len() {
        return None;
    }
    let hx = Hierarchy::of(x);
    let hy = Hierarchy::of(y);
    if hx.canonical() != hy.canonical() {
        return None;
    }
    let mut map = BTreeMap::new();
    pair(&hx, &hy, x, y, &mut map);
    Some(map)
}

fn pair(a: &Hierarchy, b: &Hierarchy, x: &UltraSpace, y: &UltraSpace, map: &mut BTreeMap<String, String>) {
    match (a, b) {
        (Hierarchy::Leaf(p), Hierarchy::Leaf(q)) => {
            map.insert(x.points()[*p].clone(), y.points()[*q].clone());
        }
        (Hierarchy::Node { children: ca, .. }, Hierarchy::Node { children: cb, .. }) => {
            let mut ka: Vec<(String, &Hierarchy)> = ca.iter().map(|c| (c.canonical(), c)).collect();
            let mut kb: Vec<(String, &Hierarchy)> = cb.iter().map(|c| (c.canonical(), c)).collect();
            ka.sort_by(|l, r| l.0.cmp(&r.0));
            kb.sort_by(|l, r| l.0.cmp(&r.0));
            for ((_, l), (_, r)) in ka.into_iter().zip(kb) {
                pair(l, r, x, y, map);
            }
        }
        _ => unreachable!("canonical forms matched"),
    }
}
