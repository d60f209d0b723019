mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use ultratree_core::{build_tree, is_isomorphic_labeled, LabeledTree, Rational};

const VALUES: [(i64, i64); 5] = [(0, 1), (1, 3), (1, 2), (1, 1), (2, 1)];

fn tree_strategy(max_n: usize) -> impl Strategy<Value = LabeledTree> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<prop::sample::Index>(), n),
            proptest::collection::vec(0..VALUES.len(), n),
        )
            .prop_map(move |(parents, labels)| {
                let ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
                let edges = (1..n).map(|i| (ids[parents[i].index(i)].clone(), ids[i].clone())).collect();
                let lab: BTreeMap<String, Rational> =
                    ids.iter().zip(&labels).map(|(v, &k)| (v.clone(), r(VALUES[k].0, VALUES[k].1))).collect();
                build_tree(ids, edges, lab).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn generated_distance_is_a_pseudo_ultrametric(t in tree_strategy(14)) {
        let d = t.distance_matrix();
        let n = t.len();
        for u in 0..n {
            prop_assert!(d.get(u, u).is_zero());
            for v in 0..n {
                prop_assert_eq!(d.get(u, v), d.get(v, u));
                for w in 0..n {
                    prop_assert!(d.get(u, v) <= d.get(u, w).max(d.get(w, v)));
                }
            }
        }
    }

    #[test]
    fn ultrametric_iff_nondegenerate(t in tree_strategy(14)) {
        let d = t.distance_matrix();
        let n = t.len();
        let proper = (0..n).all(|u| (0..n).all(|v| u == v || d.get(u, v).is_positive()));
        prop_assert_eq!(proper, edges_nondegenerate(&t));
        prop_assert_eq!(t.is_non_degenerate().holds(), edges_nondegenerate(&t));
    }

    #[test]
    fn distances_match_dfs_oracle(t in tree_strategy(14)) {
        let adj = adjacency(&t);
        for u in t.ids() {
            for v in t.ids() {
                prop_assert_eq!(t.dl_naive(u, v).unwrap(), path_max(&t, &adj, u, v));
            }
        }
    }

    #[test]
    fn restriction_preserves_distances(t in tree_strategy(12), pick in any::<prop::sample::Index>()) {
        // a connected subset: the ball of hops around one vertex
        let adj = adjacency(&t);
        let c = t.id(pick.index(t.len())).to_string();
        let mut keep = vec![c.clone()];
        keep.extend(adj[&c].iter().cloned());
        let sub = t.restrict(keep.iter().map(String::as_str)).unwrap();
        for u in sub.ids() {
            for v in sub.ids() {
                prop_assert_eq!(sub.dl_naive(u, v).unwrap(), t.dl_naive(u, v).unwrap());
            }
        }
    }

    #[test]
    fn isomorphic_copies_are_detected(t in tree_strategy(10), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = StdRng::seed_from_u64(seed);
        let mut names: Vec<String> = (0..t.len()).map(|i| format!("y{i}")).collect();
        names.shuffle(&mut rng);
        let rename: BTreeMap<&str, &str> = t.ids().iter().map(String::as_str).zip(names.iter().map(String::as_str)).collect();
        let labels = t.ids().iter().map(|v| (rename[v.as_str()].to_string(), t.label_of(v).unwrap().clone())).collect();
        let edges = t.edge_ids().into_iter().map(|(u, v)| (rename[u.as_str()].to_string(), rename[v.as_str()].to_string())).collect();
        let copy = build_tree(names.clone(), edges, labels).unwrap();
        let map = is_isomorphic_labeled(&t, &copy).expect("renamed copy is isomorphic");
        let (d1, d2) = (t.distance_matrix(), copy.distance_matrix());
        for u in t.ids() {
            prop_assert_eq!(t.label_of(u).unwrap(), copy.label_of(&map[u]).unwrap());
            for v in t.ids() {
                prop_assert_eq!(d1.distance(u, v).unwrap(), d2.distance(&map[u], &map[v]).unwrap());
            }
        }
    }
}

#[test]
fn isomorphism_agrees_with_bijection_search() {
    let mut rng = StdRng::seed_from_u64(7);
    let vals = values(&[(0, 1), (1, 1)]);
    let mut positives = 0;
    for _ in 0..400 {
        let n = 1 + rand::Rng::gen_range(&mut rng, 0..7);
        let a = random_tree(&mut rng, n, &vals);
        let b = random_tree(&mut rng, n, &vals);
        let fast = is_isomorphic_labeled(&a, &b);
        let slow = brute_isomorphic(&a, &b);
        assert_eq!(fast.is_some(), slow, "{a:?} vs {b:?}");
        if let Some(map) = fast {
            positives += 1;
            for (u, v) in a.edge_ids() {
                assert!(b.neighbors(b.index_of(&map[&u]).unwrap()).contains(&b.index_of(&map[&v]).unwrap()));
            }
        }
    }
    assert!(positives > 20, "too few isomorphic pairs sampled: {positives}");
}
