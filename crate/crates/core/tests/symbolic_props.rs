mod common;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use ultratree_core::symbolic::{
    certificate_budget, classify, compact_labeling_witness, count_geq, discrete_tb_labeling_witness,
    free_predicates, representatives, resolve, truncate, Attachment, Count, Family, LabelSeq, Scalar, Sites,
    SymbolicError, SymbolicTree,
};
use ultratree_core::{LabeledTree, Rational};

const HORIZON: u64 = 600;

fn pick<R: Rng>(rng: &mut R, vals: &[(i64, i64)]) -> Rational {
    let &(n, d) = vals.choose(rng).unwrap();
    r(n, d)
}

fn random_seq<R: Rng>(rng: &mut R, depth: u32) -> LabelSeq {
    let top = if depth == 0 { 5 } else { 7 };
    match rng.gen_range(0..top) {
        0 => LabelSeq::constant(pick(rng, &[(0, 1), (1, 2), (1, 1)])),
        1 => LabelSeq::harmonic(pick(rng, &[(1, 2), (1, 1), (2, 1)])),
        2 => LabelSeq::geometric(pick(rng, &[(1, 1), (3, 1)]), pick(rng, &[(1, 2), (2, 3)])),
        3 => LabelSeq::prime_harmonic(pick(rng, &[(1, 1), (2, 1)])),
        4 => LabelSeq::FiniteSupport((0..rng.gen_range(0..4)).map(|_| pick(rng, &[(0, 1), (1, 3), (1, 1)])).collect()),
        5 => {
            let period = rng.gen_range(2..=3);
            LabelSeq::Modulated { period, seqs: (0..period).map(|_| random_seq(rng, depth - 1)).collect() }
        }
        _ => LabelSeq::subsequence(random_seq(rng, depth - 1), rng.gen_range(1..=3), rng.gen_range(1..=3)),
    }
}

/// A sequence with no zero terms.
fn positive_seq<R: Rng>(rng: &mut R) -> LabelSeq {
    match rng.gen_range(0..5) {
        0 => LabelSeq::constant(pick(rng, &[(1, 2), (1, 1)])),
        1 => LabelSeq::harmonic(pick(rng, &[(1, 2), (1, 1)])),
        2 => LabelSeq::geometric(Rational::one(), r(1, 2)),
        3 => LabelSeq::prime_harmonic(Rational::one()),
        _ => LabelSeq::Modulated { period: 2, seqs: vec![LabelSeq::harmonic(Rational::one()), LabelSeq::constant(r(1, 3))] },
    }
}

fn small_finite<R: Rng>(rng: &mut R) -> LabeledTree {
    let n = rng.gen_range(1..=4);
    random_nondegenerate(rng, n, &values(&[(0, 1), (1, 2), (1, 1)]))
}

fn base_piece<R: Rng>(rng: &mut R) -> SymbolicTree {
    match rng.gen_range(0..3) {
        0 => SymbolicTree::finite(small_finite(rng)),
        1 => SymbolicTree::Ray(random_seq(rng, 1)),
        _ => {
            let center = pick(rng, &[(0, 1), (1, 1)]);
            let leaves = if center.is_zero() { positive_seq(rng) } else { random_seq(rng, 1) };
            SymbolicTree::star(center, leaves)
        }
    }
}

/// Something anchored at its first vertex, carrying label `y` there.
fn attachment_with_label<R: Rng>(rng: &mut R, y: &Rational) -> (SymbolicTree, &'static str) {
    match rng.gen_range(0..3) {
        0 => {
            let leaves = if y.is_zero() { positive_seq(rng) } else { random_seq(rng, 1) };
            (SymbolicTree::star(y.clone(), leaves), "center")
        }
        1 => {
            let t = LabeledTree::from_parts(&[("a", y.clone()), ("b", Rational::one())], &[("a", "b")]).unwrap();
            (SymbolicTree::finite(t), "v:a")
        }
        _ => (
            SymbolicTree::Ray(LabelSeq::Modulated {
                period: 2,
                seqs: vec![LabelSeq::constant(y.clone()), LabelSeq::harmonic(Rational::one())],
            }),
            "ray:1",
        ),
    }
}

fn family<R: Rng>(rng: &mut R) -> SymbolicTree {
    match rng.gen_range(0..3) {
        // stars hanging from the zeros of a ray
        0 => {
            let a = pick(rng, &[(1, 2), (1, 1)]);
            let leaves = if rng.gen_bool(0.5) {
                LabelSeq::Harmonic(Scalar::indexed(LabelSeq::harmonic(a.clone())))
            } else {
                LabelSeq::Geometric { a: Scalar::indexed(LabelSeq::harmonic(a.clone())), r: Scalar::Lit(r(1, 2)) }
            };
            SymbolicTree::GlueFamily(Box::new(Family {
                base: SymbolicTree::Ray(LabelSeq::Modulated {
                    period: 2,
                    seqs: vec![random_positive_or_decay(rng), LabelSeq::constant(Rational::zero())],
                }),
                sites: Sites::Even,
                template: SymbolicTree::Star { center: Scalar::Lit(Rational::zero()), leaves },
                anchor: None,
                envelope: LabelSeq::harmonic(a),
            }))
        }
        // stars glued at their first leaf to the leaves of a star
        1 => {
            let base_seq = positive_seq(rng);
            SymbolicTree::GlueFamily(Box::new(Family {
                base: SymbolicTree::star(Rational::zero(), base_seq.clone()),
                sites: Sites::All,
                template: SymbolicTree::Star {
                    center: Scalar::Lit(Rational::zero()),
                    leaves: LabelSeq::Geometric { a: Scalar::indexed(base_seq.clone()), r: Scalar::Lit(r(1, 2)) },
                },
                anchor: Some("leaf:1".parse().unwrap()),
                envelope: base_seq,
            }))
        }
        // scaled copies of a finite tree along a ray
        _ => {
            let base_seq = positive_seq(rng);
            let (offset, step) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
            let path = LabeledTree::from_parts(&[("a", Rational::one()), ("b", r(1, 2))], &[("a", "b")]).unwrap();
            let sites = LabelSeq::subsequence(base_seq.clone(), offset, step);
            SymbolicTree::GlueFamily(Box::new(Family {
                base: SymbolicTree::Ray(base_seq),
                sites: Sites::Progression { offset, step },
                template: SymbolicTree::Finite { tree: path, scale: Some(Scalar::indexed(sites.clone())) },
                anchor: None,
                envelope: sites,
            }))
        }
    }
}

fn random_positive_or_decay<R: Rng>(rng: &mut R) -> LabelSeq {
    if rng.gen_bool(0.5) {
        positive_seq(rng)
    } else {
        LabelSeq::harmonic(Rational::one())
    }
}

fn random_symbolic(seed: u64) -> SymbolicTree {
    let mut rng = StdRng::seed_from_u64(seed);
    match rng.gen_range(0..3) {
        0 => base_piece(&mut rng),
        1 => family(&mut rng),
        _ => {
            let base = if rng.gen_bool(0.7) { base_piece(&mut rng) } else { family(&mut rng) };
            let reps = representatives(&base).unwrap();
            let mut attachments = Vec::new();
            let mut used = std::collections::BTreeSet::new();
            for _ in 0..rng.gen_range(1..=2) {
                let site = reps.choose(&mut rng).unwrap().clone();
                if !used.insert(site.clone()) {
                    continue;
                }
                let y = resolve(&base, &site).unwrap().label;
                let (tree, anchor) = attachment_with_label(&mut rng, &y);
                attachments.push(Attachment { site, anchor: anchor.parse().unwrap(), tree });
            }
            SymbolicTree::GlueFinite { base: Box::new(base), attachments }
        }
    }
}

fn level(t: &LabeledTree, eps: &Rational) -> u64 {
    t.labels().iter().filter(|l| *l >= eps).count() as u64
}

fn eps_grid() -> Vec<Rational> {
    values(&[(1, 1), (1, 2), (1, 4), (1, 8)])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sequence_metadata_matches_terms(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = random_seq(&mut rng, 2);
        let st = s.stats().unwrap();
        let terms: Vec<Rational> = (1..=HORIZON).map(|n| s.term(n).unwrap()).collect();
        let z = s.zero_pattern().unwrap();
        for (i, t) in terms.iter().enumerate() {
            prop_assert!(&st.inf <= t);
            if let Some(sup) = &st.sup {
                prop_assert!(t <= sup);
            }
            prop_assert_eq!(z.zero_at(i as u64 + 1), t.is_zero());
        }
        let tail = &terms[HORIZON as usize / 2..];
        if st.vanishes {
            prop_assert!(st.limsup.is_zero());
        } else {
            // some late term comes close to the limsup
            prop_assert!(tail.iter().any(|t| t.clone() + r(1, 50) >= st.limsup));
        }
        for eps in eps_grid() {
            match s.count_geq(&eps).unwrap() {
                Count::Finite(c) => {
                    prop_assert_eq!(c, terms.iter().filter(|t| **t >= eps).count() as u64);
                    let idx: Vec<u64> = (1..=HORIZON).filter(|&n| terms[n as usize - 1] >= eps).collect();
                    prop_assert_eq!(s.indices_geq(&eps).unwrap(), idx);
                }
                Count::Infinite => prop_assert!(tail.iter().any(|t| *t >= eps)),
            }
        }
    }

    #[test]
    fn modulated_ray_is_cauchy_iff_every_class_vanishes(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let period = rng.gen_range(2..=4);
        // classes are read at global indices, so only non-nested classes are
        // compared against their own vanishing
        let seqs: Vec<LabelSeq> = (0..period).map(|_| random_seq(&mut rng, 0)).collect();
        let each = seqs.iter().all(|s| s.stats().unwrap().vanishes);
        let s = LabelSeq::Modulated { period, seqs };
        prop_assert_eq!(s.is_cauchy_ray().unwrap(), each, "{:?}", s);
    }

    #[test]
    fn verdicts_are_consistent(seed in any::<u64>()) {
        let t = random_symbolic(seed);
        let v = match classify(&t) {
            Ok(v) => v,
            Err(SymbolicError::DegenerateLabeling(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{t}: {e}"))),
        };
        if v.compact.holds {
            prop_assert!(v.complete.holds && v.totally_bounded.holds);
        }
        if v.discrete_and_tb {
            prop_assert!(v.discrete.holds && v.totally_bounded.holds);
        }
        for j in [&v.complete, &v.discrete, &v.totally_bounded, &v.compact] {
            prop_assert_eq!(j.holds, j.witness.is_none());
        }
        prop_assert_eq!(classify(&t).unwrap(), v.clone());
        let free = free_predicates(&t).unwrap();
        if free.rayless {
            prop_assert!(v.complete.holds);
        }
        if free.finite {
            prop_assert!(v.compact.holds);
        }
    }

    #[test]
    fn witness_labelings_reclassify(seed in any::<u64>()) {
        let t = random_symbolic(seed);
        let free = free_predicates(&t).unwrap();
        match compact_labeling_witness(&t) {
            Ok(w) => prop_assert!(classify(&w).unwrap().compact.holds, "{}", w),
            Err(SymbolicError::PreconditionFailed(_)) => {
                prop_assert!(!free.rayless || free.has_adjacent_infinite_degree_pair);
            }
            Err(e) => return Err(TestCaseError::fail(format!("{t}: {e}"))),
        }
        match discrete_tb_labeling_witness(&t) {
            Ok(w) => {
                let v = classify(&w).unwrap();
                prop_assert!(v.discrete_and_tb && v.discrete.holds && v.totally_bounded.holds, "{}", w);
            }
            Err(SymbolicError::PreconditionFailed(_)) => prop_assert!(!free.locally_finite),
            Err(e) => return Err(TestCaseError::fail(format!("{t}: {e}"))),
        }
    }

    #[test]
    fn truncations_converge_to_level_counts(seed in any::<u64>()) {
        let t = random_symbolic(seed);
        if classify(&t).is_err() {
            return Ok(());
        }
        for eps in eps_grid() {
            let count = match count_geq(&t, &eps) {
                Ok(c) => c,
                Err(SymbolicError::Undecidable(_)) => continue,
                Err(e) => return Err(TestCaseError::fail(format!("{t}: {e}"))),
            };
            let mut prev = 0;
            for b in [1, 2, 4, 8] {
                let l = level(&truncate(&t, b).unwrap().tree, &eps);
                prop_assert!(l >= prev);
                prev = l;
            }
            match (count, certificate_budget(&t, &eps).unwrap()) {
                (Count::Finite(c), Some(b)) => {
                    prop_assert_eq!(level(&truncate(&t, b).unwrap().tree, &eps), c);
                    prop_assert_eq!(level(&truncate(&t, b + 3).unwrap().tree, &eps), c);
                    if b > 1 {
                        prop_assert!(level(&truncate(&t, b - 1).unwrap().tree, &eps) < c);
                    }
                }
                (Count::Infinite, None) => {
                    let small = level(&truncate(&t, 6).unwrap().tree, &eps);
                    let large = level(&truncate(&t, 24).unwrap().tree, &eps);
                    prop_assert!(large > small);
                }
                (c, b) => return Err(TestCaseError::fail(format!("count {c} with budget {b:?}"))),
            }
        }
    }
}

#[test]
fn rayless_trees_are_complete_under_every_labeling() {
    // relabel the free tree of the compact example in many non-degenerate ways
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..50 {
        let base_seq = positive_seq(&mut rng);
        let outer_center = pick(&mut rng, &[(0, 1), (1, 1)]);
        let t = SymbolicTree::GlueFamily(Box::new(Family {
            base: SymbolicTree::star(outer_center, base_seq.clone()),
            sites: Sites::All,
            template: SymbolicTree::Star {
                center: Scalar::Lit(Rational::zero()),
                leaves: LabelSeq::Geometric { a: Scalar::indexed(base_seq.clone()), r: Scalar::Lit(r(1, 3)) },
            },
            anchor: Some("leaf:1".parse().unwrap()),
            envelope: base_seq,
        }));
        assert!(classify(&t).unwrap().complete.holds);
    }
}
