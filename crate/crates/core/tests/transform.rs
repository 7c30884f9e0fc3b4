use std::sync::Arc;

use distmon::distortion::{BinaryFamily, DistortedStructure, UnitFamily};
use distmon::exactlin::{Field, GradedObject, Grading, Scalar};
use distmon::harness::universe::default_nat_universe;
use distmon::laxfun::*;
use distmon::report::{CheckBudget, CheckReport};
use distmon::transform::*;
use distmon::Error;

const Q: Field = Field::Rational;

fn nat_over(field: Field, t: i64) -> Arc<DistortedStructure> {
    Arc::new(
        DistortedStructure::new(
            field,
            Grading::Nat,
            default_nat_universe(),
            BinaryFamily::symmetric(field),
            UnitFamily::graded_character(Scalar::from_i64(field, t)),
        )
        .unwrap(),
    )
}

fn nat(t: i64) -> Arc<DistortedStructure> {
    nat_over(Q, t)
}

fn budget() -> CheckBudget {
    CheckBudget::default().with_samples(2)
}

fn ok(r: CheckReport) {
    assert!(r.passed(), "{}: {:?}", r.axiom, r.witness);
}

fn proj(ds: &Arc<DistortedStructure>, small: u32, large: u32) -> MonNatTrans {
    projection_transformation(ds.clone(), small, large).unwrap()
}

fn scalar_monoidal(field: Field, c: &Scalar) -> bool {
    let f = identity_functor(nat_over(field, 1));
    check_monoidal(&scalar_transformation(&f, c.clone()).unwrap(), &budget()).unwrap().passed()
}

#[test]
fn identity_and_projection_two_cells_are_monoidal_and_natural() {
    let ds = nat(2);
    let b = budget();
    for theta in [identity_transformation(&truncation_functor(ds.clone(), 1).unwrap()), proj(&ds, 1, 2), proj(&ds, 0, 2), proj(&ds, 2, 2)] {
        ok(check_monoidal(&theta, &b).unwrap());
        ok(check_lambda_conjugation(&theta, &b).unwrap());
        ok(check_naturality(&theta, &b).unwrap());
    }
}

#[test]
fn equal_bounds_give_the_identity_two_cell() {
    let ds = nat(1);
    let p = proj(&ds, 1, 1);
    let id = identity_transformation(&p.source);
    for x in &ds.universe {
        assert_eq!(p.component(x).unwrap(), id.component(x).unwrap());
    }
}

#[test]
fn scalar_two_cells_are_monoidal_only_for_one() {
    for c in [0, 1, 2, -1] {
        assert_eq!(scalar_monoidal(Q, &Scalar::from_i64(Q, c)), c == 1, "c = {c}");
    }
    for p in [2, 3, 5, 7] {
        let field = Field::prime(p).unwrap();
        for c in field.elements().unwrap() {
            assert_eq!(scalar_monoidal(field, &c), c.is_one(), "c = {c} over F_{p}");
        }
    }
}

#[test]
fn scalar_zero_fails_the_unit_axiom() {
    let f = identity_functor(nat(1));
    let w = check_monoidal(&scalar_transformation(&f, Q.zero()).unwrap(), &budget()).unwrap().witness.unwrap();
    assert_eq!(w.note.as_deref(), Some("unit axiom"));
    let w = check_monoidal(&scalar_transformation(&f, Scalar::from_i64(Q, 2)).unwrap(), &budget()).unwrap().witness.unwrap();
    assert_eq!(w.note.as_deref(), Some("unit axiom"));
}

#[test]
fn lambda_conjugation_still_evaluates_on_collapse() {
    let ds = nat(2);
    let u = collapse_functor(ds.clone(), ungraded_structure(Q).unwrap()).unwrap();
    let r = check_lambda_conjugation(&identity_transformation(&u), &budget()).unwrap();
    ok(r);
}

#[test]
fn vertical_composites() {
    let ds = nat(2);
    let b = budget();
    let (p32, p21, p31) = (proj(&ds, 2, 3), proj(&ds, 1, 2), proj(&ds, 1, 3));
    let v = vertical(&p21, &p32).unwrap();
    for x in &ds.universe {
        assert_eq!(v.component(x).unwrap(), p31.component(x).unwrap());
    }
    ok(check_monoidal(&v, &b).unwrap());
    let id = identity_transformation(&p32.target);
    let v = vertical(&id, &p32).unwrap();
    for x in &ds.universe {
        assert_eq!(v.component(x).unwrap(), p32.component(x).unwrap());
    }
}

#[test]
fn horizontal_composites_and_whiskers() {
    let ds = nat(2);
    let b = budget();
    let u = collapse_functor(ds.clone(), ungraded_structure(Q).unwrap()).unwrap();
    let (phi, theta) = (proj(&ds, 0, 1), proj(&ds, 1, 2));
    let h = horizontal(&phi, &theta).unwrap();
    ok(check_monoidal(&h, &b).unwrap());
    ok(check_naturality(&h, &b).unwrap());
    ok(check_horizontal_well_defined(&phi, &theta, &b).unwrap());
    for x in &ds.universe {
        assert_eq!(h.component(x).unwrap(), proj(&ds, 0, 1).component(x).unwrap());
    }
    let left = whisker_left(&u, &theta).unwrap();
    ok(check_monoidal(&left, &b).unwrap());
    for x in &ds.universe {
        assert_eq!(left.component(x).unwrap(), u.map(&theta.component(x).unwrap()).unwrap());
    }
    let uu = identity_transformation(&u);
    let across = horizontal(&uu, &horizontal(&phi, &theta).unwrap()).unwrap();
    ok(check_monoidal(&across, &b).unwrap());
    let right = whisker_right(&phi, &theta.source).unwrap();
    for x in &ds.universe {
        assert_eq!(right.component(x).unwrap(), phi.component(&theta.source.obj(x).unwrap()).unwrap());
    }
}

#[test]
fn horizontal_rejects_mismatched_structures() {
    let ds = nat(2);
    let other = nat(1);
    assert!(matches!(horizontal(&proj(&ds, 0, 1), &proj(&other, 0, 1)), Err(Error::StructureMismatch(_))));
}

#[test]
fn interchange_holds_on_projection_chains() {
    let ds = nat(2);
    let b = budget();
    let (eta, theta) = (proj(&ds, 2, 3), proj(&ds, 1, 2));
    let (phi, psi) = (proj(&ds, 1, 2), proj(&ds, 0, 1));
    ok(check_interchange(&eta, &theta, &phi, &psi, &b).unwrap());
    let ids: Vec<_> = (0..4).map(|_| identity_transformation(&truncation_functor(ds.clone(), 1).unwrap())).collect();
    ok(check_interchange(&ids[0], &ids[1], &ids[2], &ids[3], &b).unwrap());
}

#[test]
fn interchange_detects_a_corrupted_component() {
    let ds = nat(2);
    let x = GradedObject::new(Grading::Nat, [(0, 1), (1, 1)]).unwrap();
    let (eta, theta) = (proj(&ds, 2, 3), proj(&ds, 1, 2));
    let (phi, psi) = (proj(&ds, 1, 2), proj(&ds, 0, 1));
    let bad = corrupt_component(&theta, x.clone(), Scalar::from_i64(Q, 2));
    // θ appears linearly on both sides, so only a one-sided corruption shows up
    ok(check_interchange(&eta, &bad, &phi, &psi, &budget()).unwrap());
    let lhs = horizontal(&vertical(&psi, &phi).unwrap(), &vertical(&bad, &eta).unwrap()).unwrap();
    let rhs = vertical(&horizontal(&psi, &theta).unwrap(), &horizontal(&phi, &eta).unwrap()).unwrap();
    let u = &ds.universe;
    let diff: Vec<_> = u.iter().filter(|o| lhs.component(o).unwrap() != rhs.component(o).unwrap()).collect();
    assert_eq!(diff, vec![&x]);
}

#[test]
fn horizontal_composition_is_strict() {
    let ds = nat(2);
    let u = collapse_functor(ds.clone(), ungraded_structure(Q).unwrap()).unwrap();
    let catalog = vec![
        HorizontalChain { outer: proj(&ds, 0, 1), middle: proj(&ds, 1, 2), inner: proj(&ds, 2, 3) },
        HorizontalChain { outer: identity_transformation(&u), middle: proj(&ds, 1, 2), inner: proj(&ds, 0, 2) },
        HorizontalChain {
            outer: identity_transformation(&identity_functor(ds.clone())),
            middle: identity_transformation(&identity_functor(ds.clone())),
            inner: identity_transformation(&identity_functor(ds.clone())),
        },
    ];
    let r = check_horizontal_strictness(&catalog, &budget()).unwrap();
    ok(r);
}

#[test]
fn horizontal_strictness_mismatch_is_an_error() {
    let ds = nat(2);
    let u = collapse_functor(ds.clone(), ungraded_structure(Q).unwrap()).unwrap();
    let catalog = vec![HorizontalChain { outer: proj(&ds, 0, 1), middle: identity_transformation(&u), inner: proj(&ds, 0, 1) }];
    assert!(matches!(check_horizontal_strictness(&catalog, &budget()), Err(Error::StructureMismatch(_))));
}
