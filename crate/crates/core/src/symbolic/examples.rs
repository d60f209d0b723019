//! Worked examples.

use alloc::boxed::Box;
use alloc::vec;

use super::seq::{LabelSeq, Scalar};
use super::tree::{Family, Sites, SymbolicTree};
use crate::rational::Rational;
use crate::space::{space_from_upper, UltraSpace};
use crate::tree::LabeledTree;

/// Ray with labels `1/m` at odd `m` and 0 at even `m`; at every even `m` a
/// star with centre `m` (label 0) and leaf labels `1/(m·n)`.
pub fn fig10() -> SymbolicTree {
    let half = Rational::new(1, 2);
    SymbolicTree::GlueFamily(Box::new(Family {
        base: SymbolicTree::Ray(LabelSeq::Modulated {
            period: 2,
            seqs: vec![LabelSeq::harmonic(Rational::one()), LabelSeq::constant(Rational::zero())],
        }),
        sites: Sites::Even,
        template: SymbolicTree::Star {
            center: Scalar::Lit(Rational::zero()),
            leaves: LabelSeq::Harmonic(Scalar::indexed(LabelSeq::harmonic(half.clone()))),
        },
        anchor: None,
        envelope: LabelSeq::harmonic(half),
    }))
}

/// Star with centre 0 and leaves `p` labeled `1/p` over the primes; at
/// every leaf `p` a star with centre 0 and leaves `p^n` labeled `p^-n`,
/// sharing its leaf `p` with the outer star.
pub fn fig1() -> SymbolicTree {
    let ph = || LabelSeq::prime_harmonic(Rational::one());
    SymbolicTree::GlueFamily(Box::new(Family {
        base: SymbolicTree::star(Rational::zero(), ph()),
        sites: Sites::All,
        template: SymbolicTree::Star {
            center: Scalar::Lit(Rational::zero()),
            leaves: LabelSeq::Geometric { a: Scalar::indexed(ph()), r: Scalar::indexed(ph()) },
        },
        anchor: Some("leaf:1".parse().expect("valid address")),
        envelope: ph(),
    }))
}

/// A star with centre label 1 and leaf labels 0, and a path with all labels
/// 1, on the vertices `v0..v4`; both generate the same space.
pub fn star_vs_path() -> (LabeledTree, LabeledTree) {
    let one = Rational::one();
    let zero = Rational::zero();
    let ids = ["v0", "v1", "v2", "v3", "v4"];
    let star_labels: vec::Vec<(&str, Rational)> =
        ids.iter().map(|&v| (v, if v == "v0" { one.clone() } else { zero.clone() })).collect();
    let path_labels: vec::Vec<(&str, Rational)> = ids.iter().map(|&v| (v, one.clone())).collect();
    let star = LabeledTree::from_parts(&star_labels, &[("v0", "v1"), ("v0", "v2"), ("v0", "v3"), ("v0", "v4")]);
    let path = LabeledTree::from_parts(&path_labels, &[("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v4")]);
    (star.expect("valid star"), path.expect("valid path"))
}

/// `d(v1,v2) = d(v3,v4) = 1`, every other pair at distance 2.
pub fn four_point_space() -> UltraSpace {
    let (one, two) = (Rational::one(), Rational::from(2u64));
    space_from_upper(
        &["v1", "v2", "v3", "v4"],
        &[one.clone(), two.clone(), two.clone(), two.clone(), two, one],
    )
    .expect("valid ultrametric")
}
