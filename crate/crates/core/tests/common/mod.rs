#![allow(dead_code)]

use cdlab_core::shift::{ShiftFamily, ShiftOperator};
use cdlab_core::space::{IndexDomain, SeqVector};
use cdlab_core::weights::{WeightPiece, WeightRule, WeightSequence};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn domain() -> impl Strategy<Value = IndexDomain> {
    prop_oneof![Just(IndexDomain::Unilateral), Just(IndexDomain::Bilateral)]
}

pub fn complex_in(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, -3.1f64..3.1).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

/// Three pieces: constant, a short affine stretch, constant. All values
/// stay in roughly `[0.25, 3.5]` in modulus.
pub fn weights(domain: IndexDomain) -> impl Strategy<Value = WeightSequence> {
    (
        complex_in(0.3, 3.0),
        1.0f64..2.0,
        -0.05f64..0.05,
        complex_in(0.3, 3.0),
        -8i64..8,
    )
        .prop_map(move |(c1, a0, a1, c2, split)| {
            let start = match domain {
                IndexDomain::Unilateral => 1 + split.rem_euclid(8),
                IndexDomain::Bilateral => split,
            };
            let mut pieces = Vec::new();
            let first = match domain {
                IndexDomain::Unilateral => Some(1),
                IndexDomain::Bilateral => None,
            };
            pieces.push(WeightPiece::new(
                first,
                Some(start),
                WeightRule::Constant(c1),
            ));
            pieces.push(WeightPiece::new(
                Some(start + 1),
                Some(start + 6),
                WeightRule::affine(a0, a1),
            ));
            pieces.push(WeightPiece::new(
                Some(start + 7),
                None,
                WeightRule::Constant(c2),
            ));
            WeightSequence::new(domain, pieces, Some(10.0), 1e-6).unwrap()
        })
}

pub fn shift(domain: IndexDomain) -> impl Strategy<Value = ShiftOperator> {
    (weights(domain), 1u64..4).prop_map(|(w, r)| ShiftOperator::new(w, r).unwrap())
}

pub fn vector(domain: IndexDomain, max_support: usize) -> impl Strategy<Value = SeqVector> {
    let lo = match domain {
        IndexDomain::Unilateral => 0,
        IndexDomain::Bilateral => -20,
    };
    proptest::collection::btree_map(lo..=20i64, complex_in(0.01, 5.0), 0..=max_support)
        .prop_map(move |m| SeqVector::from_entries(domain, m).unwrap())
}

pub fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()) + 1e-300
}

pub fn vectors_close(a: &SeqVector, b: &SeqVector, rel: f64) -> bool {
    let keys: std::collections::BTreeSet<i64> = a.support().chain(b.support()).collect();
    keys.into_iter().all(|k| close(a.get(k), b.get(k), rel))
}

pub fn rising_powers(n: usize) -> ShiftFamily {
    let spec: Vec<(f64, u64)> = (1..=n).map(|l| ((l + 1) as f64, l as u64)).collect();
    ShiftFamily::constant(IndexDomain::Unilateral, &spec).unwrap()
}

fn two_sided(neg: f64, pos: f64, split: i64) -> ShiftFamily {
    let w = WeightSequence::new(
        IndexDomain::Bilateral,
        vec![
            WeightPiece::new(None, Some(split - 1), WeightRule::constant(neg)),
            WeightPiece::new(Some(split), None, WeightRule::constant(pos)),
        ],
        Some(neg.max(pos)),
        1e-12,
    )
    .unwrap();
    ShiftFamily::new(vec![ShiftOperator::new(w, 1).unwrap()]).unwrap()
}

/// Weights 1 on `n <= 0` and 2 on `n >= 1`.
pub fn one_then_two() -> ShiftFamily {
    two_sided(1.0, 2.0, 1)
}

/// Weights 2 on `n < 0` and 1/2 on `n >= 0`.
pub fn two_then_half() -> ShiftFamily {
    two_sided(2.0, 0.5, 0)
}
