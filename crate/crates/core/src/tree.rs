//! Finite vertex-labeled trees and the ultrametric they generate.
//!
//! The distance between distinct vertices is the largest label on the unique
//! path joining them; the diagonal is zero. The result is always a
//! pseudoultrametric and is an ultrametric exactly when every edge has an
//! endpoint with a positive label.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::Rational;
use crate::space::UltraSpace;

pub type VertexIdx = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    Empty,
    DuplicateVertex(String),
    UnknownVertex(String),
    SelfLoop(String),
    HasCycle(String, String),
    NotConnected(String),
    MissingLabel(String),
    NegativeLabel(String),
    SameVertex(String),
    EmptySet,
    NotConnectedSubset(String),
    VertexInSet(String),
    SizeCapExceeded { size: usize, cap: usize },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::Empty => write!(f, "a tree needs at least one vertex"),
            TreeError::DuplicateVertex(v) => write!(f, "duplicate vertex {v:?}"),
            TreeError::UnknownVertex(v) => write!(f, "unknown vertex {v:?}"),
            TreeError::SelfLoop(v) => write!(f, "self-loop at {v:?}"),
            TreeError::HasCycle(u, v) => write!(f, "edge {{{u}, {v}}} closes a cycle"),
            TreeError::NotConnected(v) => write!(f, "vertex {v:?} is not reachable"),
            TreeError::MissingLabel(v) => write!(f, "vertex {v:?} has no label"),
            TreeError::NegativeLabel(v) => write!(f, "vertex {v:?} has a negative label"),
            TreeError::SameVertex(v) => write!(f, "path endpoints coincide ({v:?})"),
            TreeError::EmptySet => write!(f, "vertex set must be nonempty"),
            TreeError::NotConnectedSubset(v) => {
                write!(f, "vertex set does not induce a connected subtree (at {v:?})")
            }
            TreeError::VertexInSet(v) => write!(f, "vertex {v:?} already belongs to the set"),
            TreeError::SizeCapExceeded { size, cap } => {
                write!(f, "size {size} exceeds the cap {cap}")
            }
        }
    }
}

impl core::error::Error for TreeError {}

/// Immutable finite tree with exact nonnegative vertex labels.
///
/// Vertices are stored in lexicographic order of their ids; that order is the
/// index order used by every other module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    ids: Vec<String>,
    index: BTreeMap<String, VertexIdx>,
    labels: Vec<Rational>,
    adj: Vec<Vec<VertexIdx>>,
}

/// The unique path between two distinct vertices, endpoints included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<String>,
}

/// Edges violating `max(l(u), l(v)) > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonDegeneracy {
    pub violations: Vec<(String, String)>,
}

impl NonDegeneracy {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validates and builds a labeled tree.
pub fn build_tree(
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    labels: BTreeMap<String, Rational>,
) -> Result<LabeledTree, TreeError> {
    if vertices.is_empty() {
        return Err(TreeError::Empty);
    }
    let mut ids = vertices;
    ids.sort();
    for w in ids.windows(2) {
        if w[0] == w[1] {
            return Err(TreeError::DuplicateVertex(w[0].clone()));
        }
    }
    let index: BTreeMap<String, VertexIdx> =
        ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
    for key in labels.keys() {
        if !index.contains_key(key) {
            return Err(TreeError::UnknownVertex(key.clone()));
        }
    }
    let mut label_vec = Vec::with_capacity(ids.len());
    for id in &ids {
        match labels.get(id) {
            None => return Err(TreeError::MissingLabel(id.clone())),
            Some(l) if l.is_negative() => return Err(TreeError::NegativeLabel(id.clone())),
            Some(l) => label_vec.push(l.clone()),
        }
    }

    let n = ids.len();
    let mut uf = UnionFind::new(n);
    let mut adj = vec![Vec::new(); n];
    for (a, b) in &edges {
        let u = *index.get(a).ok_or_else(|| TreeError::UnknownVertex(a.clone()))?;
        let v = *index.get(b).ok_or_else(|| TreeError::UnknownVertex(b.clone()))?;
        if u == v {
            return Err(TreeError::SelfLoop(a.clone()));
        }
        if !uf.union(u, v) {
            return Err(TreeError::HasCycle(a.clone(), b.clone()));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    if let Some(i) = (1..n).find(|&i| uf.find(i) != uf.find(0)) {
        return Err(TreeError::NotConnected(ids[i].clone()));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(LabeledTree { ids, index, labels: label_vec, adj })
}

impl LabeledTree {
    /// Convenience constructor from borrowed pieces.
    pub fn from_parts(labels: &[(&str, Rational)], edges: &[(&str, &str)]) -> Result<Self, TreeError> {
        build_tree(
            labels.iter().map(|(v, _)| v.to_string()).collect(),
            edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            labels.iter().map(|(v, l)| (v.to_string(), l.clone())).collect(),
        )
    }

    pub(crate) fn from_indexed(
        ids: Vec<String>,
        labels: Vec<Rational>,
        edges: &[(VertexIdx, VertexIdx)],
    ) -> Result<Self, TreeError> {
        let e = edges.iter().map(|&(u, v)| (ids[u].clone(), ids[v].clone())).collect();
        let l = ids.iter().cloned().zip(labels).collect();
        build_tree(ids, e, l)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: VertexIdx) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Result<VertexIdx, TreeError> {
        self.index.get(id).copied().ok_or_else(|| TreeError::UnknownVertex(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn label(&self, v: VertexIdx) -> &Rational {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[Rational] {
        &self.labels
    }

    pub fn label_of(&self, id: &str) -> Result<&Rational, TreeError> {
        Ok(&self.labels[self.index_of(id)?])
    }

    /// δ(v).
    pub fn degree(&self, v: VertexIdx) -> usize {
        self.adj[v].len()
    }

    /// Vertex set of N(v), in index order.
    pub fn neighbors(&self, v: VertexIdx) -> &[VertexIdx] {
        &self.adj[v]
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexIdx, VertexIdx)> {
        let mut out = Vec::with_capacity(self.len().saturating_sub(1));
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_ids(&self) -> Vec<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(u, v)| (self.ids[u].clone(), self.ids[v].clone()))
            .collect()
    }

    pub fn is_non_degenerate(&self) -> NonDegeneracy {
        let violations = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| self.labels[u].is_zero() && self.labels[v].is_zero())
            .map(|(u, v)| (self.ids[u].clone(), self.ids[v].clone()))
            .collect();
        NonDegeneracy { violations }
    }

    /// BFS parents from `root`; `parent[root] == root`.
    pub(crate) fn bfs_parents(&self, root: VertexIdx) -> Vec<VertexIdx> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    pub(crate) fn path_idx(&self, u: VertexIdx, v: VertexIdx) -> Vec<VertexIdx> {
        let parent = self.bfs_parents(v);
        let mut out = vec![u];
        let mut cur = u;
        while cur != v {
            cur = parent[cur];
            out.push(cur);
        }
        out
    }

    pub fn path(&self, u: &str, v: &str) -> Result<Path, TreeError> {
        let (ui, vi) = (self.index_of(u)?, self.index_of(v)?);
        if ui == vi {
            return Err(TreeError::SameVertex(u.to_string()));
        }
        let vertices = self.path_idx(ui, vi).into_iter().map(|i| self.ids[i].clone()).collect();
        Ok(Path { vertices })
    }

    pub fn dl_naive_idx(&self, u: VertexIdx, v: VertexIdx) -> Rational {
        if u == v {
            return Rational::zero();
        }
        self.path_idx(u, v)
            .into_iter()
            .map(|w| &self.labels[w])
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// d_l(u, v) by walking the unique path.
    pub fn dl_naive(&self, u: &str, v: &str) -> Result<Rational, TreeError> {
        let (ui, vi) = (self.index_of(u)?, self.index_of(v)?);
        Ok(self.dl_naive_idx(ui, vi))
    }

    /// Full matrix of d_l, one DFS per source carrying the running maximum.
    pub fn distance_matrix(&self) -> UltraSpace {
        let n = self.len();
        let mut d = vec![Rational::zero(); n * n];
        let mut stack = Vec::new();
        for s in 0..n {
            stack.clear();
            stack.push((s, usize::MAX, &self.labels[s]));
            while let Some((u, from, best)) = stack.pop() {
                if u != s {
                    d[s * n + u] = best.clone();
                }
                for &w in &self.adj[u] {
                    if w != from {
                        stack.push((w, u, Rational::max_of(best, &self.labels[w])));
                    }
                }
            }
        }
        UltraSpace::from_trusted(self.ids.clone(), d)
    }

    /// Induced subtree on `subset`, labels restricted.
    pub fn restrict<'a, I>(&self, subset: I) -> Result<LabeledTree, TreeError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut keep = BTreeSet::new();
        for id in subset {
            keep.insert(self.index_of(id)?);
        }
        self.restrict_idx(&keep)
    }

    pub(crate) fn restrict_idx(&self, keep: &BTreeSet<VertexIdx>) -> Result<LabeledTree, TreeError> {
        let Some(&first) = keep.iter().next() else {
            return Err(TreeError::EmptySet);
        };
        let mut seen = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if keep.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if let Some(&missing) = keep.iter().find(|v| !seen.contains(v)) {
            return Err(TreeError::NotConnectedSubset(self.ids[missing].clone()));
        }
        let ids: Vec<String> = keep.iter().map(|&v| self.ids[v].clone()).collect();
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let pos: BTreeMap<VertexIdx, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter_map(|(u, v)| Some((*pos.get(&u)?, *pos.get(&v)?)))
            .collect();
        LabeledTree::from_indexed(ids, labels, &edges)
    }

    /// Copy of this tree with every label replaced.
    pub fn relabeled(&self, labels: Vec<Rational>) -> Result<LabeledTree, TreeError> {
        assert_eq!(labels.len(), self.len());
        LabeledTree::from_indexed(self.ids.clone(), labels, &self.edges())
    }

    /// Vertices minimizing the largest component left after their removal.
    pub fn centroids(&self) -> Vec<VertexIdx> {
        let n = self.len();
        let parent = self.bfs_parents(0);
        let order = bfs_order(self, 0);
        let mut size = vec![1usize; n];
        for &v in order.iter().rev() {
            if v != 0 {
                size[parent[v]] += size[v];
            }
        }
        let mut out = Vec::new();
        for v in 0..n {
            let mut worst = n - size[v];
            for &w in &self.adj[v] {
                if parent[w] == v {
                    worst = worst.max(size[w]);
                }
            }
            if worst * 2 <= n {
                out.push(v);
            }
        }
        out
    }
}

pub(crate) fn bfs_order(t: &LabeledTree, root: VertexIdx) -> Vec<VertexIdx> {
    let mut seen = vec![false; t.len()];
    seen[root] = true;
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in t.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}

/// Rooted, label-aware canonical ids. Both trees share one interner so the
/// ids are directly comparable.
struct Canon {
    interner: BTreeMap<(Rational, Vec<u32>), u32>,
}

impl Canon {
    fn new() -> Self {
        Canon { interner: BTreeMap::new() }
    }

    /// Returns (canonical id per vertex, parent per vertex) for `t` rooted at `root`.
    fn rooted(&mut self, t: &LabeledTree, root: VertexIdx) -> (Vec<u32>, Vec<VertexIdx>) {
        let parent = t.bfs_parents(root);
        let order = bfs_order(t, root);
        let mut ids = vec![0u32; t.len()];
        for &v in order.iter().rev() {
            let mut kids: Vec<u32> =
                t.neighbors(v).iter().filter(|&&w| parent[w] == v && w != v).map(|&w| ids[w]).collect();
            kids.sort_unstable();
            let next = self.interner.len() as u32;
            ids[v] = *self.interner.entry((t.label(v).clone(), kids)).or_insert(next);
        }
        (ids, parent)
    }
}

/// Label-preserving tree isomorphism, as a map from ids of `t1` to ids of `t2`.
pub fn is_isomorphic_labeled(t1: &LabeledTree, t2: &LabeledTree) -> Option<BTreeMap<String, String>> {
    if t1.len() != t2.len() {
        return None;
    }
    let c1 = t1.centroids();
    let c2 = t2.centroids();
    if c1.len() != c2.len() {
        return None;
    }
    let mut canon = Canon::new();
    let (ids1, par1) = canon.rooted(t1, c1[0]);
    for &r2 in &c2 {
        let (ids2, par2) = canon.rooted(t2, r2);
        if ids1[c1[0]] != ids2[r2] {
            continue;
        }
        let mut map = BTreeMap::new();
        let mut stack = vec![(c1[0], r2)];
        while let Some((a, b)) = stack.pop() {
            map.insert(t1.id(a).to_string(), t2.id(b).to_string());
            let mut ka: Vec<VertexIdx> =
                t1.neighbors(a).iter().copied().filter(|&w| par1[w] == a && w != a).collect();
            let mut kb: Vec<VertexIdx> =
                t2.neighbors(b).iter().copied().filter(|&w| par2[w] == b && w != b).collect();
            ka.sort_by_key(|&w| ids1[w]);
            kb.sort_by_key(|&w| ids2[w]);
            stack.extend(ka.into_iter().zip(kb));
        }
        return Some(map);
    }
    None
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    pub(crate) fn star_and_path() -> (LabeledTree, LabeledTree) {
        let one = Rational::one();
        let zero = Rational::zero();
        let star = LabeledTree::from_parts(
            &[("v0", one.clone()), ("v1", zero.clone()), ("v2", zero.clone()), ("v3", zero.clone()), ("v4", zero)],
            &[("v0", "v1"), ("v0", "v2"), ("v0", "v3"), ("v0", "v4")],
        )
        .unwrap();
        let path = LabeledTree::from_parts(
            &[("v0", one.clone()), ("v1", one.clone()), ("v2", one.clone()), ("v3", one.clone()), ("v4", one)],
            &[("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v4")],
        )
        .unwrap();
        (star, path)
    }

    #[test]
    fn single_vertex_tree() {
        let t = LabeledTree::from_parts(&[("a", Rational::zero())], &[]).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.is_non_degenerate().holds());
        assert_eq!(t.dl_naive("a", "a").unwrap(), Rational::zero());
    }

    #[test]
    fn rejects_malformed_input() {
        let z = Rational::zero();
        let tri = LabeledTree::from_parts(
            &[("a", z.clone()), ("b", z.clone()), ("c", z.clone())],
            &[("a", "b"), ("b", "c"), ("c", "a")],
        );
        assert_eq!(tri.unwrap_err(), TreeError::HasCycle("c".into(), "a".into()));

        let split = LabeledTree::from_parts(&[("a", z.clone()), ("b", z.clone())], &[]);
        assert_eq!(split.unwrap_err(), TreeError::NotConnected("b".into()));

        let looped = LabeledTree::from_parts(&[("a", z.clone())], &[("a", "a")]);
        assert_eq!(looped.unwrap_err(), TreeError::SelfLoop("a".into()));

        let dup = build_tree(
            vec!["a".into(), "a".into()],
            vec![],
            BTreeMap::from([("a".to_string(), z.clone())]),
        );
        assert_eq!(dup.unwrap_err(), TreeError::DuplicateVertex("a".into()));

        let missing = build_tree(vec!["a".into(), "b".into()], vec![("a".into(), "b".into())], BTreeMap::from([("a".to_string(), z.clone())]));
        assert_eq!(missing.unwrap_err(), TreeError::MissingLabel("b".into()));

        let neg = LabeledTree::from_parts(&[("a", r(-1, 2))], &[]);
        assert_eq!(neg.unwrap_err(), TreeError::NegativeLabel("a".into()));

        let double = LabeledTree::from_parts(&[("a", z.clone()), ("b", z)], &[("a", "b"), ("b", "a")]);
        assert!(matches!(double.unwrap_err(), TreeError::HasCycle(..)));

        assert_eq!(build_tree(vec![], vec![], BTreeMap::new()).unwrap_err(), TreeError::Empty);
    }

    #[test]
    fn degeneracy_reports_zero_edges() {
        let (star, _) = star_and_path();
        assert!(star.is_non_degenerate().holds());
        let t = LabeledTree::from_parts(&[("a", Rational::zero()), ("b", Rational::zero())], &[("a", "b")]).unwrap();
        let nd = t.is_non_degenerate();
        assert!(!nd.holds());
        assert_eq!(nd.violations, vec![("a".to_string(), "b".to_string())]);
    }

    #[test]
    fn paths_and_naive_distance() {
        let t = LabeledTree::from_parts(
            &[("a", Rational::zero()), ("b", Rational::from_integer(5)), ("c", r(1, 2))],
            &[("a", "b"), ("b", "c")],
        )
        .unwrap();
        assert_eq!(t.path("a", "c").unwrap().vertices, ["a", "b", "c"]);
        assert_eq!(t.dl_naive("a", "c").unwrap(), Rational::from_integer(5));
        assert_eq!(t.path("a", "a").unwrap_err(), TreeError::SameVertex("a".into()));
        assert_eq!(t.dl_naive("a", "zz").unwrap_err(), TreeError::UnknownVertex("zz".into()));

        let (star, _) = star_and_path();
        assert_eq!(star.path("v1", "v2").unwrap().vertices, ["v1", "v0", "v2"]);
    }

    #[test]
    fn star_and_path_generate_the_same_space() {
        let (star, path) = star_and_path();
        let ds = star.distance_matrix();
        let dp = path.distance_matrix();
        assert_eq!(ds, dp);
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { Rational::zero() } else { Rational::one() };
                assert_eq!(ds.get(i, j), &expect);
            }
        }
        assert!(ds.is_proper());
        assert!(is_isomorphic_labeled(&star, &path).is_none());
    }

    #[test]
    fn two_vertex_matrix_and_pseudo_flag() {
        let t = LabeledTree::from_parts(&[("a", Rational::zero()), ("b", Rational::from_integer(3))], &[("a", "b")]).unwrap();
        let m = t.distance_matrix();
        assert_eq!(m.get(0, 1), &Rational::from_integer(3));
        let z = LabeledTree::from_parts(
            &[("a", Rational::zero()), ("b", Rational::zero()), ("c", Rational::one())],
            &[("a", "b"), ("b", "c")],
        )
        .unwrap();
        assert!(!z.distance_matrix().is_proper());
    }

    #[test]
    fn restrict_prefix_and_disconnected() {
        let t = LabeledTree::from_parts(
            &[("a", Rational::one()), ("b", Rational::zero()), ("c", Rational::from_integer(2)), ("d", r(1, 3))],
            &[("a", "b"), ("b", "c"), ("c", "d")],
        )
        .unwrap();
        let whole = t.restrict(["a", "b", "c", "d"]).unwrap();
        assert_eq!(whole, t);
        let pre = t.restrict(["a", "b", "c"]).unwrap();
        assert_eq!(pre.dl_naive("a", "c").unwrap(), t.dl_naive("a", "c").unwrap());
        assert_eq!(t.restrict(["a", "c"]).unwrap_err(), TreeError::NotConnectedSubset("c".into()));
        assert_eq!(t.restrict([]).unwrap_err(), TreeError::EmptySet);
    }

    #[test]
    fn isomorphism_under_renaming() {
        let t1 = LabeledTree::from_parts(
            &[("a", Rational::one()), ("b", Rational::zero()), ("c", r(1, 2)), ("d", r(1, 2))],
            &[("a", "b"), ("b", "c"), ("b", "d")],
        )
        .unwrap();
        let t2 = LabeledTree::from_parts(
            &[("w", r(1, 2)), ("x", Rational::zero()), ("y", Rational::one()), ("z", r(1, 2))],
            &[("x", "w"), ("x", "y"), ("x", "z")],
        )
        .unwrap();
        let map = is_isomorphic_labeled(&t1, &t2).unwrap();
        assert_eq!(map["a"], "y");
        assert_eq!(map["b"], "x");
        for (u, v) in t1.edge_ids() {
            let (fu, fv) = (&map[&u], &map[&v]);
            assert!(t2.neighbors(t2.index_of(fu).unwrap()).contains(&t2.index_of(fv).unwrap()));
        }
        let t3 = t2.relabeled(vec![r(1, 2), Rational::zero(), Rational::one(), r(1, 3)]).unwrap();
        assert!(is_isomorphic_labeled(&t1, &t3).is_none());
    }

    #[test]
    fn centroids_of_paths() {
        let z = Rational::zero();
        let p4 = LabeledTree::from_parts(
            &[("a", z.clone()), ("b", z.clone()), ("c", z.clone()), ("d", z.clone())],
            &[("a", "b"), ("b", "c"), ("c", "d")],
        )
        .unwrap();
        assert_eq!(p4.centroids(), vec![1, 2]);
        let p3 = p4.restrict(["a", "b", "c"]).unwrap();
        assert_eq!(p3.centroids(), vec![1]);
    }
}
