mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use ultratree_core::{build_tree, PathMaxIndex, Rational};

fn setup(seed: u64, n: usize) -> ultratree_core::LabeledTree {
    let mut rng = StdRng::seed_from_u64(seed);
    random_tree(&mut rng, n, &values(&[(0, 1), (1, 4), (1, 2), (1, 1), (3, 1)]))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn queries_match_dfs_oracle(seed in any::<u64>(), n in 1usize..60) {
        let t = setup(seed, n);
        let idx = PathMaxIndex::build(&t);
        let adj = adjacency(&t);
        for u in t.ids() {
            for v in t.ids() {
                let q = idx.query(u, v).unwrap();
                prop_assert_eq!(&q, &path_max(&t, &adj, u, v));
                if u != v {
                    prop_assert!(q >= t.label_of(u).unwrap().clone().max(t.label_of(v).unwrap().clone()));
                }
            }
        }
    }

    #[test]
    fn raising_a_label_never_lowers_a_query(seed in any::<u64>(), n in 2usize..40, pick in any::<prop::sample::Index>()) {
        let t = setup(seed, n);
        let w = t.id(pick.index(n)).to_string();
        let mut labels: BTreeMap<String, Rational> = t.ids().iter().map(|v| (v.clone(), t.label_of(v).unwrap().clone())).collect();
        *labels.get_mut(&w).unwrap() = labels[&w].clone() + Rational::one();
        let raised = build_tree(t.ids().to_vec(), t.edge_ids(), labels).unwrap();
        let (a, b) = (PathMaxIndex::build(&t), PathMaxIndex::build(&raised));
        for u in t.ids() {
            for v in t.ids() {
                prop_assert!(b.query(u, v).unwrap() >= a.query(u, v).unwrap());
            }
        }
    }
}

#[test]
fn root_is_smallest_id_and_all_pairs_matches_matrix() {
    let t = setup(3, 25);
    let idx = PathMaxIndex::build(&t);
    assert_eq!(idx.root(), t.ids()[0]);
    assert_eq!(idx.all_pairs(100).unwrap(), t.distance_matrix());
    assert!(idx.all_pairs(10).is_err());
}

#[test]
fn long_paths_and_stars() {
    let mut rng = StdRng::seed_from_u64(11);
    let n = 300;
    let ids: Vec<String> = (0..n).map(|i| format!("p{i:04}")).collect();
    let mut labels = BTreeMap::new();
    for v in &ids {
        labels.insert(v.clone(), r(rng.gen_range(0..5), 1));
    }
    let path_edges = (1..n).map(|i| (ids[i - 1].clone(), ids[i].clone())).collect();
    let star_edges = (1..n).map(|i| (ids[0].clone(), ids[i].clone())).collect();
    for edges in [path_edges, star_edges] {
        let t = build_tree(ids.clone(), edges, labels.clone()).unwrap();
        let idx = PathMaxIndex::build(&t);
        for _ in 0..2000 {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            assert_eq!(idx.query_idx(u, v), t.dl_naive_idx(u, v));
        }
    }
}
