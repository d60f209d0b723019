use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{SpaceError, UltraSpace};
use crate::rational::Rational;
use crate::tree::LabeledTree;

/// Candidate label set for the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelMode {
    /// `{0} ∪ attained distances`, each vertex capped at its nearest-point distance.
    Pruned,
    /// `{0} ∪ attained distances` with no per-vertex cap.
    Attained,
    /// An explicit grid, no per-vertex cap.
    Grid(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentOpts {
    pub mode: LabelMode,
    /// Overrides the default size cap (6 pruned, 5 otherwise).
    pub cap: Option<usize>,
}

impl Default for RepresentOpts {
    fn default() -> Self {
        RepresentOpts { mode: LabelMode::Pruned, cap: None }
    }
}

impl RepresentOpts {
    pub fn cap(&self) -> usize {
        self.cap.unwrap_or(match self.mode {
            LabelMode::Pruned => 6,
            _ => 5,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    /// A non-degenerately labeled tree on the points of the space whose
    /// generated ultrametric equals the space, if one exists.
    pub witness: Option<LabeledTree>,
    /// Number of trees (Prüfer sequences) examined.
    pub trees_searched: usize,
}

/// Exhaustive search over all trees on the point set and their labelings.
pub fn representable(x: &UltraSpace, opts: &RepresentOpts) -> Result<Representation, SpaceError> {
    let n = x.len();
    let cap = opts.cap();
    if n > cap {
        return Err(SpaceError::SizeCapExceeded { size: n, cap });
    }
    if !x.is_proper() {
        return Ok(Representation { witness: None, trees_searched: 0 });
    }
    if n == 1 {
        let t = LabeledTree::from_indexed(x.points().to_vec(), vec![Rational::zero()], &[]).unwrap();
        return Ok(Representation { witness: Some(t), trees_searched: 1 });
    }

    let attained: Vec<Rational> = {
        let mut s: BTreeSet<Rational> = x.distance_values().into_iter().collect();
        s.insert(Rational::zero());
        s.into_iter().collect()
    };
    let candidates: Vec<Vec<Rational>> = (0..n)
        .map(|v| match &opts.mode {
            LabelMode::Pruned => {
                let cap = (0..n).filter(|&u| u != v).map(|u| x.get(u, v)).min().unwrap();
                attained.iter().filter(|l| *l <= cap).cloned().collect()
            }
            LabelMode::Attained => attained.clone(),
            LabelMode::Grid(g) => {
                let s: BTreeSet<Rational> = g.iter().cloned().collect();
                s.into_iter().collect()
            }
        })
        .collect();

    let mut searched = 0;
    let mut seq = vec![0usize; n - 2];
    loop {
        searched += 1;
        let edges = prufer_decode(&seq, n);
        if let Some(labels) = search_labels(x, &edges, &candidates) {
            let t = LabeledTree::from_indexed(x.points().to_vec(), labels, &edges).unwrap();
            if t.is_non_degenerate().holds() && t.distance_matrix() == *x {
                return Ok(Representation { witness: Some(t), trees_searched: searched });
            }
        }
        if !next_sequence(&mut seq, n) {
            break;
        }
    }
    Ok(Representation { witness: None, trees_searched: searched })
}

/// Advances a base-`n` counter; `false` after the last sequence.
fn next_sequence(seq: &mut [usize], n: usize) -> bool {
    for k in (0..seq.len()).rev() {
        seq[k] += 1;
        if seq[k] < n {
            return true;
        }
        seq[k] = 0;
    }
    false
}

/// Edge list of the tree with Prüfer sequence `seq` on vertices `0..n`.
pub(crate) fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn search_labels(x: &UltraSpace, edges: &[(usize, usize)], candidates: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = x.len();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut labels: Vec<Option<Rational>> = vec![None; n];
    if assign(0, x, &adj, candidates, &mut labels) {
        Some(labels.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}

fn assign(
    v: usize,
    x: &UltraSpace,
    adj: &[Vec<usize>],
    candidates: &[Vec<Rational>],
    labels: &mut Vec<Option<Rational>>,
) -> bool {
    if v == labels.len() {
        return full_check(x, adj, labels);
    }
    for l in &candidates[v] {
        // Adjacent vertices are at distance max(l(u), l(v)).
        let ok = adj[v].iter().all(|&u| match &labels[u] {
            Some(lu) => Rational::max_of(lu, l) == x.get(u, v),
            None => l <= x.get(u, v),
        });
        if ok {
            labels[v] = Some(l.clone());
            if assign(v + 1, x, adj, candidates, labels) {
                return true;
            }
        }
    }
    labels[v] = None;
    false
}

/// Path maxima from every source against the target matrix.
fn full_check(x: &UltraSpace, adj: &[Vec<usize>], labels: &[Option<Rational>]) -> bool {
    let n = labels.len();
    let l = |v: usize| labels[v].as_ref().unwrap();
    for s in 0..n {
        let mut stack = vec![(s, usize::MAX, l(s).clone())];
        while let Some((u, from, best)) = stack.pop() {
            if u != s && &best != x.get(s, u) {
                return false;
            }
            for &w in &adj[u] {
                if w != from {
                    stack.push((w, u, Rational::max_of(&best, l(w)).clone()));
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::space_from_upper;

    #[test]
    fn prufer_counts() {
        for n in 3..=6 {
            let mut seq = vec![0; n - 2];
            let mut trees = BTreeSet::new();
            loop {
                let mut e: Vec<(usize, usize)> =
                    prufer_decode(&seq, n).into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
                e.sort();
                trees.insert(e);
                if !next_sequence(&mut seq, n) {
                    break;
                }
            }
            assert_eq!(trees.len(), n.pow(n as u32 - 2));
        }
    }

    #[test]
    fn four_point_space_is_not_representable() {
        let one = Rational::one();
        let two = Rational::from_integer(2);
        let x = space_from_upper(
            &["v1", "v2", "v3", "v4"],
            &[one.clone(), two.clone(), two.clone(), two.clone(), two, one],
        )
        .unwrap();
        let r = representable(&x, &RepresentOpts::default()).unwrap();
        assert!(r.witness.is_none());
        assert_eq!(r.trees_searched, 16);
    }

    #[test]
    fn equidistant_space_is_a_star() {
        let x = space_from_upper(&["v0", "v1", "v2", "v3", "v4"], &vec![Rational::one(); 10]).unwrap();
        let t = representable(&x, &RepresentOpts::default()).unwrap().witness.unwrap();
        assert_eq!(t.distance_matrix(), x);
    }

    #[test]
    fn trivial_and_capped() {
        let one = validate_one();
        let t = representable(&one, &RepresentOpts::default()).unwrap().witness.unwrap();
        assert_eq!(t.len(), 1);
        let big = space_from_upper(&["a", "b", "c", "d", "e", "f"], &vec![Rational::one(); 15]).unwrap();
        let opts = RepresentOpts { mode: LabelMode::Attained, cap: None };
        assert_eq!(representable(&big, &opts).unwrap_err(), SpaceError::SizeCapExceeded { size: 6, cap: 5 });
    }

    fn validate_one() -> UltraSpace {
        super::super::validate_space(vec!["p".into()], vec![vec![Rational::zero()]]).unwrap()
    }
}
