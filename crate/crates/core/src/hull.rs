//! Hulls (smallest subtrees containing a vertex set) and comb roots.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::tree::{LabeledTree, TreeError, VertexIdx};

pub const MINIMALITY_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    pub tree: LabeledTree,
    pub generators: Vec<String>,
}

/// A tooth `v` outside a connected set `S`, the unique vertex of `S` it
/// hangs from, and the path from that root to the tooth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombReport {
    pub tooth: String,
    pub root: String,
    pub path: Vec<String>,
}

fn resolve<'a, I>(t: &LabeledTree, set: I) -> Result<BTreeSet<VertexIdx>, TreeError>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut out = BTreeSet::new();
    for id in set {
        out.insert(t.index_of(id)?);
    }
    if out.is_empty() {
        return Err(TreeError::EmptySet);
    }
    Ok(out)
}

pub(crate) fn hull_vertices(t: &LabeledTree, a: &BTreeSet<VertexIdx>) -> BTreeSet<VertexIdx> {
    let anchor = *a.iter().next().unwrap();
    let parent = t.bfs_parents(anchor);
    let mut marked = vec![false; t.len()];
    marked[anchor] = true;
    for &v in a {
        let mut cur = v;
        while !marked[cur] {
            marked[cur] = true;
            cur = parent[cur];
        }
    }
    (0..t.len()).filter(|&v| marked[v]).collect()
}

/// Union of the paths from the smallest element of `A` to every other element.
pub fn hull<'a, I>(t: &LabeledTree, a: I) -> Result<Hull, TreeError>
where
    I: IntoIterator<Item = &'a str>,
{
    let a = resolve(t, a)?;
    let keep = hull_vertices(t, &a);
    Ok(Hull {
        tree: t.restrict_idx(&keep)?,
        generators: a.iter().map(|&v| t.id(v).to_string()).collect(),
    })
}

pub fn attachment_point<'a, I>(t: &LabeledTree, s: I, v: &str) -> Result<CombReport, TreeError>
where
    I: IntoIterator<Item = &'a str>,
{
    let s = resolve(t, s)?;
    t.restrict_idx(&s)?;
    let tooth = t.index_of(v)?;
    if s.contains(&tooth) {
        return Err(TreeError::VertexInSet(v.to_string()));
    }
    let mut parent = vec![usize::MAX; t.len()];
    parent[tooth] = tooth;
    let mut queue = VecDeque::from([tooth]);
    while let Some(u) = queue.pop_front() {
        if s.contains(&u) {
            let mut path = vec![t.id(u).to_string()];
            let mut cur = u;
            while cur != tooth {
                cur = parent[cur];
                path.push(t.id(cur).to_string());
            }
            return Ok(CombReport { tooth: v.to_string(), root: t.id(u).to_string(), path });
        }
        for &w in t.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    unreachable!("trees are connected")
}

/// Compares `hull` with the intersection of every subtree containing `A`,
/// enumerated exhaustively.
pub fn hull_minimality_check<'a, I>(t: &LabeledTree, a: I) -> Result<bool, TreeError>
where
    I: IntoIterator<Item = &'a str>,
{
    let n = t.len();
    if n > MINIMALITY_CAP {
        return Err(TreeError::SizeCapExceeded { size: n, cap: MINIMALITY_CAP });
    }
    let a = resolve(t, a)?;
    let free: Vec<VertexIdx> = (0..n).filter(|v| !a.contains(v)).collect();
    let mut meet: u32 = (1u32 << n) - 1;
    for mask in 0u32..(1 << free.len()) {
        let mut set: u32 = a.iter().fold(0, |acc, &v| acc | 1 << v);
        for (bit, &v) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                set |= 1 << v;
            }
        }
        if induces_connected(t, set) {
            meet &= set;
        }
    }
    let hull_mask = hull_vertices(t, &a).iter().fold(0u32, |acc, &v| acc | 1 << v);
    Ok(meet == hull_mask)
}

fn induces_connected(t: &LabeledTree, set: u32) -> bool {
    let start = set.trailing_zeros() as usize;
    let mut seen = 1u32 << start;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in t.neighbors(u) {
            if set >> w & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen == set
}
