mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use ultratree_core::{attachment_point, hull, hull_minimality_check, LabeledTree};

fn setup(seed: u64, n: usize) -> (LabeledTree, StdRng) {
    let mut rng = StdRng::seed_from_u64(seed);
    let t = random_tree(&mut rng, n, &values(&[(0, 1), (1, 1)]));
    (t, rng)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hull_equals_intersection_of_subtrees(seed in any::<u64>(), n in 1usize..=10, k in 1usize..=4) {
        let (t, mut rng) = setup(seed, n);
        let a: BTreeSet<String> = t.ids().iter().cloned().choose_multiple(&mut rng, k.min(n)).into_iter().collect();
        let h = hull(&t, a.iter().map(String::as_str)).unwrap();
        let got: BTreeSet<String> = h.tree.ids().iter().cloned().collect();
        prop_assert_eq!(&got, &brute_hull(&t, &a));
        prop_assert!(hull_minimality_check(&t, a.iter().map(String::as_str)).unwrap());
        prop_assert!(a.is_subset(&got));
        prop_assert_eq!(h.tree.edges().len() + 1, h.tree.len());
        for v in 0..h.tree.len() {
            if h.tree.degree(v) <= 1 && h.tree.len() > 1 {
                prop_assert!(a.contains(h.tree.id(v)), "hull leaf outside the generating set");
            }
        }
    }

    #[test]
    fn attachment_matches_brute_force(seed in any::<u64>(), n in 2usize..=12) {
        let (t, mut rng) = setup(seed, n);
        // a connected S: a random hull, and a tooth outside it
        let g = rng.gen_range(1..=n.min(3));
        let gens: Vec<String> = t.ids().iter().cloned().choose_multiple(&mut rng, g);
        let s: BTreeSet<String> = hull(&t, gens.iter().map(String::as_str)).unwrap().tree.ids().iter().cloned().collect();
        let outside: Vec<&String> = t.ids().iter().filter(|v| !s.contains(*v)).collect();
        prop_assume!(!outside.is_empty());
        let v = outside[rng.gen_range(0..outside.len())];
        let rep = attachment_point(&t, s.iter().map(String::as_str), v).unwrap();
        let (root, path) = brute_attachment(&t, &s, v);
        prop_assert_eq!(rep.root, root);
        prop_assert_eq!(rep.path, path);
    }
}
