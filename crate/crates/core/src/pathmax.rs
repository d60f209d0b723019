//! Path-maximum queries by binary lifting.
//!
//! The tree is rooted at its lexicographically smallest vertex. For each
//! vertex `v` and level `k`, `up[k][v]` is the `2^k`-th ancestor and
//! `mx[k][v]` the largest label rank on the upward segment from `v`
//! (inclusive) to that ancestor (exclusive). Labels are compared through
//! their rank among the distinct labels, so the tables hold `u32`s.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;
use crate::space::UltraSpace;
use crate::tree::{bfs_order, LabeledTree, TreeError, VertexIdx};

pub const DEFAULT_ALL_PAIRS_CAP: usize = 2000;

#[derive(Debug, Clone)]
pub struct PathMaxIndex<'a> {
    tree: &'a LabeledTree,
    root: VertexIdx,
    depth: Vec<u32>,
    rank: Vec<u32>,
    values: Vec<Rational>,
    up: Vec<Vec<VertexIdx>>,
    mx: Vec<Vec<u32>>,
}

impl<'a> PathMaxIndex<'a> {
    pub fn build(tree: &'a LabeledTree) -> Self {
        let n = tree.len();
        let values: Vec<Rational> = tree.labels().iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let rank: Vec<u32> =
            tree.labels().iter().map(|l| values.binary_search(l).unwrap() as u32).collect();

        let root = 0;
        let parent = tree.bfs_parents(root);
        let mut depth = vec![0u32; n];
        for &w in &bfs_order(tree, root)[1..] {
            depth[w] = depth[parent[w]] + 1;
        }

        let levels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up = vec![parent];
        let mut mx = vec![rank.clone()];
        for k in 1..levels {
            let (pu, pm) = (&up[k - 1], &mx[k - 1]);
            let nu: Vec<VertexIdx> = (0..n).map(|v| pu[pu[v]]).collect();
            let nm: Vec<u32> = (0..n).map(|v| pm[v].max(pm[pu[v]])).collect();
            up.push(nu);
            mx.push(nm);
        }
        PathMaxIndex { tree, root, depth, rank, values, up, mx }
    }

    pub fn tree(&self) -> &LabeledTree {
        self.tree
    }

    pub fn root(&self) -> &str {
        self.tree.id(self.root)
    }

    pub fn query_idx(&self, u: VertexIdx, v: VertexIdx) -> Rational {
        if u == v {
            return Rational::zero();
        }
        self.values[self.query_rank(u, v) as usize].clone()
    }

    fn query_rank(&self, mut u: VertexIdx, mut v: VertexIdx) -> u32 {
        if self.depth[u] < self.depth[v] {
            core::mem::swap(&mut u, &mut v);
        }
        let mut acc = 0u32;
        let mut diff = self.depth[u] - self.depth[v];
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                acc = acc.max(self.mx[k][u]);
                u = self.up[k][u];
            }
            diff >>= 1;
            k += 1;
        }
        if u == v {
            return acc.max(self.rank[u]);
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][u] != self.up[k][v] {
                acc = acc.max(self.mx[k][u]).max(self.mx[k][v]);
                u = self.up[k][u];
                v = self.up[k][v];
            }
        }
        let lca = self.up[0][u];
        acc.max(self.rank[u]).max(self.rank[v]).max(self.rank[lca])
    }

    pub fn query(&self, u: &str, v: &str) -> Result<Rational, TreeError> {
        Ok(self.query_idx(self.tree.index_of(u)?, self.tree.index_of(v)?))
    }

    /// Full distance matrix through the index; refuses trees above `cap` vertices.
    pub fn all_pairs(&self, cap: usize) -> Result<UltraSpace, TreeError> {
        let n = self.tree.len();
        if n > cap {
            return Err(TreeError::SizeCapExceeded { size: n, cap });
        }
        let mut d = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                d.push(self.query_idx(u, v));
            }
        }
        Ok(UltraSpace::from_trusted(self.tree.ids().to_vec(), d))
    }
}
