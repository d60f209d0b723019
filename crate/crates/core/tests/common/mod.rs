//! Random inputs and brute-force oracles shared by the integration tests.
//! None of these call back into the library's algorithms.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use ultratree_core::{build_tree, LabeledTree, Rational, UltraSpace};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn values(list: &[(i64, i64)]) -> Vec<Rational> {
    list.iter().map(|&(n, d)| r(n, d)).collect()
}

/// Uniform random recursive tree on `n` shuffled ids with labels from `vals`.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, vals: &[Rational]) -> LabeledTree {
    let mut names: Vec<String> = (0..n).map(|i| format!("v{i:03}")).collect();
    names.shuffle(rng);
    let edges: Vec<(String, String)> =
        (1..n).map(|i| (names[rng.gen_range(0..i)].clone(), names[i].clone())).collect();
    let labels: BTreeMap<String, Rational> =
        names.iter().map(|v| (v.clone(), vals.choose(rng).unwrap().clone())).collect();
    build_tree(names, edges, labels).unwrap()
}

/// Like [`random_tree`], then every edge with two zero labels gets its
/// second endpoint raised to the smallest positive value.
pub fn random_nondegenerate<R: Rng>(rng: &mut R, n: usize, vals: &[Rational]) -> LabeledTree {
    let t = random_tree(rng, n, vals);
    let lift = vals.iter().filter(|v| v.is_positive()).min().unwrap().clone();
    let mut labels: BTreeMap<String, Rational> =
        t.ids().iter().map(|v| (v.clone(), t.label_of(v).unwrap().clone())).collect();
    for (u, v) in t.edge_ids() {
        if labels[&u].is_zero() && labels[&v].is_zero() {
            labels.insert(v, lift.clone());
        }
    }
    build_tree(t.ids().to_vec(), t.edge_ids(), labels).unwrap()
}

pub fn adjacency(t: &LabeledTree) -> BTreeMap<String, Vec<String>> {
    let mut adj: BTreeMap<String, Vec<String>> = t.ids().iter().map(|v| (v.clone(), Vec::new())).collect();
    for (u, v) in t.edge_ids() {
        adj.get_mut(&u).unwrap().push(v.clone());
        adj.get_mut(&v).unwrap().push(u);
    }
    adj
}

/// Vertices from `u` to `v` by depth-first search.
pub fn dfs_path(adj: &BTreeMap<String, Vec<String>>, u: &str, v: &str) -> Vec<String> {
    fn go(adj: &BTreeMap<String, Vec<String>>, cur: &str, prev: Option<&str>, goal: &str, acc: &mut Vec<String>) -> bool {
        acc.push(cur.to_string());
        if cur == goal {
            return true;
        }
        for w in &adj[cur] {
            if Some(w.as_str()) != prev && go(adj, w, Some(cur), goal, acc) {
                return true;
            }
        }
        acc.pop();
        false
    }
    let mut acc = Vec::new();
    assert!(go(adj, u, None, v, &mut acc));
    acc
}

pub fn path_max(t: &LabeledTree, adj: &BTreeMap<String, Vec<String>>, u: &str, v: &str) -> Rational {
    if u == v {
        return Rational::zero();
    }
    dfs_path(adj, u, v).iter().map(|w| t.label_of(w).unwrap().clone()).max().unwrap()
}

pub fn edges_nondegenerate(t: &LabeledTree) -> bool {
    t.edge_ids().iter().all(|(u, v)| t.label_of(u).unwrap().is_positive() || t.label_of(v).unwrap().is_positive())
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Label- and edge-preserving bijection search.
pub fn brute_isomorphic(a: &LabeledTree, b: &LabeledTree) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ea: BTreeSet<(usize, usize)> = a.edges().into_iter().collect();
    let eb: BTreeSet<(usize, usize)> = b.edges().into_iter().collect();
    permutations(a.len()).into_iter().any(|p| {
        (0..a.len()).all(|v| a.label(v) == b.label(p[v]))
            && ea.iter().all(|&(u, v)| {
                let (x, y) = (p[u].min(p[v]), p[u].max(p[v]));
                eb.contains(&(x, y))
            })
    })
}

/// Intersection of every connected vertex set containing `a`.
pub fn brute_hull(t: &LabeledTree, a: &BTreeSet<String>) -> BTreeSet<String> {
    let n = t.len();
    let adj = adjacency(t);
    let mut meet: BTreeSet<String> = t.ids().iter().cloned().collect();
    for mask in 0u32..(1 << n) {
        let set: BTreeSet<String> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| t.id(i).to_string()).collect();
        if !a.is_subset(&set) {
            continue;
        }
        let start = set.iter().next().unwrap().clone();
        let mut seen = BTreeSet::from([start.clone()]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in &adj[&u] {
                if set.contains(w) && seen.insert(w.clone()) {
                    stack.push(w.clone());
                }
            }
        }
        if seen == set {
            meet = meet.intersection(&set).cloned().collect();
        }
    }
    meet
}

/// The element of `s` whose path to `v` meets `s` only once, and that path.
pub fn brute_attachment(t: &LabeledTree, s: &BTreeSet<String>, v: &str) -> (String, Vec<String>) {
    let adj = adjacency(t);
    let hits: Vec<(String, Vec<String>)> = s
        .iter()
        .map(|x| (x.clone(), dfs_path(&adj, x, v)))
        .filter(|(_, p)| p.iter().filter(|w| s.contains(*w)).count() == 1)
        .collect();
    assert_eq!(hits.len(), 1, "root is unique");
    hits.into_iter().next().unwrap()
}

/// All spanning trees of the complete graph on `0..n`, as edge lists.
pub fn all_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let m = pairs.len();
    for mask in 0u64..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut ok = true;
        let mut edges = Vec::new();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    ok = false;
                    break;
                }
                parent[a] = b;
                edges.push((u, v));
            }
        }
        if ok {
            out.push(edges);
        }
    }
    out
}

/// A tree on the points of `x` represents it iff labeling each point with
/// its distance to the nearest other point does: those are the largest
/// labels any representing labeling can use, and raising labels up to them
/// keeps every path maximum.
pub fn representable_oracle(x: &UltraSpace) -> bool {
    let n = x.len();
    if n == 1 {
        return true;
    }
    if (0..n).any(|i| (0..n).any(|j| i != j && x.get(i, j).is_zero())) {
        return false;
    }
    let top: Vec<Rational> = (0..n).map(|v| (0..n).filter(|&u| u != v).map(|u| x.get(u, v).clone()).min().unwrap()).collect();
    all_trees(n).into_iter().any(|edges| {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        (0..n).all(|s| {
            // max label on the path from s to every vertex
            let mut best = vec![None; n];
            best[s] = Some(top[s].clone());
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if best[w].is_none() {
                        let m = best[u].clone().unwrap().max(top[w].clone());
                        best[w] = Some(m);
                        stack.push(w);
                    }
                }
            }
            (0..n).all(|t| t == s || best[t].as_ref().unwrap() == x.get(s, t))
        })
    })
}

/// Bijection search for an isometry.
pub fn brute_isometric(x: &UltraSpace, y: &UltraSpace) -> bool {
    x.len() == y.len()
        && permutations(x.len())
            .into_iter()
            .any(|p| (0..x.len()).all(|i| (0..x.len()).all(|j| x.get(i, j) == y.get(p[i], p[j]))))
}

/// Every symmetric zero-diagonal matrix on `n` points with off-diagonal
/// entries from `vals` that satisfies the strong triangle inequality.
pub fn all_ultrametric_matrices(n: usize, vals: &[Rational]) -> Vec<Vec<Vec<Rational>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; pairs.len()];
    loop {
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            m[i][j] = vals[idx[k]].clone();
            m[j][i] = vals[idx[k]].clone();
        }
        let ok = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| a == b || m[a][b] <= m[a][c].clone().max(m[c][b].clone())))
        });
        if ok {
            out.push(m);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < vals.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
