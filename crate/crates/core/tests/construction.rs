mod common;

use cdlab_core::construct::{
    construct, error_bound, verify_construction, ConstructedVector, TargetList,
};
use cdlab_core::criterion::{build_schedule, WitnessSchedule};
use cdlab_core::orbit::cesaro_orbit_point;
use cdlab_core::shift::ShiftFamily;
use cdlab_core::space::{IndexDomain, SeqVector, SpaceSpec};
use common::*;
use proptest::prelude::*;

const U: IndexDomain = IndexDomain::Unilateral;

fn norm(v: &SeqVector, s: &SpaceSpec) -> f64 {
    v.norm(s).unwrap()
}

/// Recomputes the step inequalities of every diary entry from the shift
/// primitives and checks each one against `2^{-j}`.
fn check_diary(
    family: &ShiftFamily,
    targets: &TargetList,
    space: &SpaceSpec,
    built: &ConstructedVector,
) {
    let members = family.members();
    let mut prefix = SeqVector::zero(family.domain());
    let mut earlier: Vec<u64> = Vec::new();
    let mut last_k = None;
    for (step, tuple) in built.diary.steps.iter().zip(targets.tuples()) {
        let bound = 0.5f64.powi(step.j as i32);
        assert!(last_k.is_none_or(|k| step.schedule_index > k));
        last_k = Some(step.schedule_index);
        assert!(step.x_j.is_zero());
        assert!(norm(&step.x_j, space) < bound);

        let lifted: Vec<SeqVector> = members
            .iter()
            .zip(tuple)
            .map(|(m, y)| m.right_inverse(step.n, y).unwrap())
            .collect();
        let mut worst = [0.0f64; 5];
        for s in &lifted {
            worst[0] = worst[0].max(norm(s, space));
            for &nl in &earlier {
                for tm in members {
                    worst[1] = worst[1].max(norm(&cesaro_orbit_point(tm, nl, s).unwrap(), space));
                }
            }
        }
        for (mi, tm) in members.iter().enumerate() {
            for (ii, s) in lifted.iter().enumerate() {
                let img = cesaro_orbit_point(tm, step.n, s).unwrap();
                if ii == mi {
                    worst[2] = worst[2].max(norm(&img.sub(&tuple[mi]).unwrap(), space));
                } else {
                    worst[3] = worst[3].max(norm(&img, space));
                }
            }
            worst[4] = worst[4].max(norm(
                &cesaro_orbit_point(tm, step.n, &prefix).unwrap(),
                space,
            ));
        }
        let sl = step.slacks;
        let recorded = [
            sl.right_inverse_norm,
            sl.right_inverse_earlier_images,
            sl.diagonal,
            sl.cross_term,
            sl.prefix_image,
        ];
        for (w, r) in worst.iter().zip(recorded) {
            assert!(*w < bound, "step {} slack {w} vs {bound}", step.j);
            assert!((w - r).abs() <= 1e-15 * (1.0 + w.abs()));
        }
        for s in lifted {
            prefix = prefix.add(&s).unwrap();
        }
        earlier.push(step.n);
    }
    assert_eq!(prefix, built.x);
}

/// `||x - partial_J||` for `J = 0..=len`.
fn tails(
    family: &ShiftFamily,
    targets: &TargetList,
    space: &SpaceSpec,
    built: &ConstructedVector,
) -> Vec<f64> {
    let mut partial = SeqVector::zero(family.domain());
    let mut out = vec![norm(&built.x, space)];
    for (step, tuple) in built.diary.steps.iter().zip(targets.tuples()) {
        for (m, y) in family.members().iter().zip(tuple) {
            partial = partial.add(&m.right_inverse(step.n, y).unwrap()).unwrap();
        }
        out.push(norm(&built.x.sub(&partial).unwrap(), space));
    }
    out
}

fn basis_combination() -> impl Strategy<Value = SeqVector> {
    proptest::collection::btree_map(0i64..5, -2.0f64..2.0, 1..4)
        .prop_map(|m| SeqVector::from_real_entries(U, m).unwrap())
}

fn assert_certified(
    family: &ShiftFamily,
    targets: &TargetList,
    space: &SpaceSpec,
    built: &ConstructedVector,
) {
    let rows = verify_construction(built, family, targets, space);
    assert_eq!(rows.len(), family.len() * targets.len());
    for row in rows {
        assert!(row.pass && row.error < row.bound, "{row:?}");
        assert_eq!(row.bound, error_bound(family.len(), row.j));
        assert_eq!(row.error, built.errors[row.l - 1][row.j - 1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn single_shift_constructions_certify(ys in proptest::collection::vec(basis_combination(), 1..=5), p in prop_oneof![Just(1.0), Just(2.0)]) {
        let f = ShiftFamily::constant(U, &[(2.0, 1)]).unwrap();
        let schedule = build_schedule(&f, 60, 10_000).unwrap();
        let space = SpaceSpec::lp(p, U).unwrap();
        let targets = TargetList::new(&f, ys.into_iter().map(|y| vec![y]).collect()).unwrap();
        let built = construct(&f, &schedule, &targets, &space).unwrap();
        check_diary(&f, &targets, &space, &built);
        assert_certified(&f, &targets, &space, &built);
        let t = tails(&f, &targets, &space, &built);
        prop_assert!(t.windows(2).all(|w| w[1] <= w[0]), "{:?}", t);
        prop_assert_eq!(*t.last().unwrap(), 0.0);
    }

    #[test]
    fn two_member_constructions_certify(ys in proptest::collection::vec((basis_combination(), basis_combination()), 1..=3)) {
        let f = rising_powers(2);
        let schedule = build_schedule(&f, 40, 10_000).unwrap();
        let space = SpaceSpec::lp(2.0, U).unwrap();
        let targets = TargetList::new(&f, ys.into_iter().map(|(a, b)| vec![a, b]).collect()).unwrap();
        let built = construct(&f, &schedule, &targets, &space).unwrap();
        check_diary(&f, &targets, &space, &built);
        assert_certified(&f, &targets, &space, &built);
        let t = tails(&f, &targets, &space, &built);
        prop_assert!(t.windows(2).all(|w| w[1] <= w[0]), "{:?}", t);
    }
}

#[test]
fn diagonal_is_exact_for_a_single_basis_target() {
    let f = ShiftFamily::constant(U, &[(2.0, 1)]).unwrap();
    let schedule = WitnessSchedule::from_values(&[1, 2, 3, 4]).unwrap();
    let space = SpaceSpec::lp(2.0, U).unwrap();
    let targets = TargetList::new(&f, vec![vec![SeqVector::basis(U, 0).unwrap()]]).unwrap();
    let built = construct(&f, &schedule, &targets, &space).unwrap();
    assert_eq!(built.errors, vec![vec![0.0]]);
    assert_eq!(built.diary.steps[0].slacks.diagonal, 0.0);
}

#[test]
fn construction_in_sup_norm() {
    let f = rising_powers(3);
    let schedule = build_schedule(&f, 30, 10_000).unwrap();
    let space = SpaceSpec::sup(U);
    let e = |k| SeqVector::basis(U, k).unwrap();
    let targets =
        TargetList::new(&f, vec![vec![e(0), e(1), e(2)], vec![e(2), e(0), e(1)]]).unwrap();
    let built = construct(&f, &schedule, &targets, &space).unwrap();
    check_diary(&f, &targets, &space, &built);
    assert_certified(&f, &targets, &space, &built);
}
