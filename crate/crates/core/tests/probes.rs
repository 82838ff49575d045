mod common;

use cdlab_core::criterion::{check_bilateral, check_unilateral, CriterionQuery};
use cdlab_core::orbit::cesaro_orbit_point;
use cdlab_core::probe::{
    probe_blow_up_collapse, probe_mixing, probe_transitivity, Ball, ProbeWitness,
};
use cdlab_core::shift::ShiftFamily;
use cdlab_core::space::{IndexDomain, SeqVector, SpaceSpec};
use common::*;
use proptest::prelude::*;

fn ball(d: IndexDomain, k: i64, r: f64) -> Ball {
    Ball::new(
        SeqVector::basis(d, k).unwrap(),
        r,
        SpaceSpec::lp(2.0, d).unwrap(),
    )
    .unwrap()
}

fn revalidate(family: &ShiftFamily, u: &Ball, vs: &[Ball], w: &ProbeWitness) {
    let d = w.z.sub(u.center()).unwrap().norm(u.space()).unwrap();
    assert!(d < u.radius());
    for (t, v) in family.members().iter().zip(vs) {
        let img = cesaro_orbit_point(t, w.n, &w.z).unwrap();
        assert!(img.sub(v.center()).unwrap().norm(v.space()).unwrap() < v.radius());
    }
}

#[test]
fn found_criteria_imply_probe_witnesses() {
    let f = rising_powers(2);
    assert!(
        check_unilateral(&CriterionQuery::new(f.clone(), 0.5, 0, 50).unwrap())
            .unwrap()
            .status
            .is_found()
    );
    let d = IndexDomain::Unilateral;
    let u = ball(d, 0, 0.5);
    let vs = [ball(d, 0, 0.5), ball(d, 1, 0.5)];
    let out = probe_transitivity(&f, &u, &vs, 10_000).unwrap();
    revalidate(&f, &u, &vs, out.witness().unwrap());

    let f = one_then_two();
    assert!(
        check_bilateral(&CriterionQuery::new(f.clone(), 0.5, 0, 50).unwrap())
            .unwrap()
            .status
            .is_found()
    );
    let d = IndexDomain::Bilateral;
    let u = ball(d, 0, 0.5);
    let vs = [ball(d, 0, 0.5)];
    let out = probe_transitivity(&f, &u, &vs, 10_000).unwrap();
    let w = out.witness().unwrap();
    assert_eq!(w.n, 3);
    revalidate(&f, &u, &vs, w);
}

#[test]
fn blow_up_collapse_witness_revalidates() {
    let d = IndexDomain::Unilateral;
    let f = rising_powers(2);
    let zero = Ball::new(SeqVector::zero(d), 0.5, SpaceSpec::lp(2.0, d).unwrap()).unwrap();
    let v0 = ball(d, 3, 0.5);
    let vs = [ball(d, 0, 0.5), ball(d, 1, 0.5)];
    let out = probe_blow_up_collapse(&f, &zero, &v0, &vs, 50).unwrap();
    let w = out.witness().unwrap();
    assert!(w.w.norm(zero.space()).unwrap() < zero.radius());
    assert!(w.eta.sub(v0.center()).unwrap().norm(v0.space()).unwrap() < v0.radius());
    for (t, v) in f.members().iter().zip(&vs) {
        let img = cesaro_orbit_point(t, w.m, &w.w).unwrap();
        assert!(img.sub(v.center()).unwrap().norm(v.space()).unwrap() < v.radius());
        let img = cesaro_orbit_point(t, w.m, &w.eta).unwrap();
        assert!(img.norm(zero.space()).unwrap() < zero.radius());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixing_rows_agree_with_transitivity(
        c in 1.2f64..3.0,
        k_u in 0i64..4,
        k_v in 0i64..4,
        r in 0.05f64..1.0,
        n_to in 1u64..30,
    ) {
        let d = IndexDomain::Unilateral;
        let f = ShiftFamily::constant(d, &[(c, 1)]).unwrap();
        let u = ball(d, k_u, r);
        let vs = [ball(d, k_v, r)];
        let table = probe_mixing(&f, &u, &vs, 1, n_to).unwrap();
        let first_pass = table.rows.iter().find(|row| row.pass).map(|row| row.n);
        let out = probe_transitivity(&f, &u, &vs, n_to).unwrap();
        prop_assert_eq!(first_pass, out.witness().map(|w| w.n));
        if let Some(w) = out.witness() {
            revalidate(&f, &u, &vs, w);
        }
        for row in &table.rows {
            let single = probe_mixing(&f, &u, &vs, row.n, row.n).unwrap();
            prop_assert_eq!(single.rows[0].pass, row.pass);
        }
    }
}
