use std::sync::Arc;

use distmon::distortion::{BinaryFamily, DistortedStructure, UnitFamily};
use distmon::exactlin::{Field, GradedObject, Grading, Scalar};
use distmon::harness::universe::{default_nat_universe, default_parity_universe};
use distmon::laxfun::*;
use distmon::report::{CheckBudget, CheckReport};
use distmon::Error;

const Q: Field = Field::Rational;

fn nat(t: i64) -> Arc<DistortedStructure> {
    Arc::new(
        DistortedStructure::new(
            Q,
            Grading::Nat,
            default_nat_universe(),
            BinaryFamily::symmetric(Q),
            UnitFamily::graded_character(Scalar::from_i64(Q, t)),
        )
        .unwrap(),
    )
}

fn parity_koszul() -> Arc<DistortedStructure> {
    Arc::new(
        DistortedStructure::new(Q, Grading::Parity, default_parity_universe(), BinaryFamily::koszul(Q), UnitFamily::identity(Q))
            .unwrap(),
    )
}

fn budget() -> CheckBudget {
    CheckBudget::default().with_samples(2)
}

fn all_pass(f: &LaxFunctor) -> Vec<CheckReport> {
    let b = budget();
    vec![
        check_lax_axioms(f, &b).unwrap(),
        check_slambda(f, &b).unwrap(),
        check_ssigma(f, &b).unwrap(),
        check_functoriality(f, &b).unwrap(),
        check_laxator_naturality(f, &b).unwrap(),
    ]
}

fn assert_all_pass(f: &LaxFunctor) {
    for r in all_pass(f) {
        assert!(r.passed(), "{}: {:?}", r.axiom, r.witness);
    }
}

#[test]
fn identity_functor_passes_everything() {
    assert_all_pass(&identity_functor(nat(2)));
    assert_all_pass(&identity_functor(parity_koszul()));
}

#[test]
fn truncations_are_sigma_lax() {
    for t in [1, 2, -1] {
        for d in 0..=2 {
            assert_all_pass(&truncation_functor(nat(t), d).unwrap());
        }
    }
}

#[test]
fn truncation_requires_nat_grading() {
    assert!(matches!(truncation_functor(parity_koszul(), 1), Err(Error::MonoidMismatch(_))));
}

#[test]
fn collapse_fails_slambda_for_nontrivial_character() {
    let u = collapse_functor(nat(2), ungraded_structure(Q).unwrap()).unwrap();
    let r = check_slambda(&u, &budget()).unwrap();
    let w = r.witness.expect("SLambda fails");
    assert_eq!(w.objects, vec![GradedObject::new(Grading::Nat, [(1, 1)]).unwrap()]);
    let c = w.comparison.unwrap();
    assert_eq!(c.difference.left, Scalar::from_i64(Q, 2));
    assert_eq!(c.difference.right, Q.one());

    let u1 = collapse_functor(nat(1), ungraded_structure(Q).unwrap()).unwrap();
    assert_all_pass(&u1);
}

#[test]
fn collapse_of_koszul_fails_ssigma_with_sign() {
    let u = collapse_functor(parity_koszul(), ungraded_structure(Q).unwrap()).unwrap();
    assert!(check_lax_axioms(&u, &budget()).unwrap().passed());
    let w = check_ssigma(&u, &budget()).unwrap().witness.expect("Ssigma fails");
    let odd = GradedObject::new(Grading::Parity, [(1, 1)]).unwrap();
    assert!(w.objects.iter().all(|o| o.dim(1) > 0));
    // degrees are read in the ungraded target
    assert_eq!(w.degrees, vec![0, 0]);
    let c = w.comparison.unwrap();
    assert_eq!(c.difference.left, Scalar::from_i64(Q, -1));
    assert_eq!(c.difference.right, Q.one());
    assert!(ssigma_at(&u, &odd, &odd).unwrap().is_some());
    let mixed = GradedObject::new(Grading::Parity, [(0, 1), (1, 1)]).unwrap();
    assert!(ssigma_at(&u, &mixed, &mixed).unwrap().is_some());
}

#[test]
fn corrupted_laxator_fails_with_triple_witness() {
    let ds = nat(1);
    let x = GradedObject::new(Grading::Nat, [(0, 1), (1, 1)]).unwrap();
    let f = corrupt_laxator(&identity_functor(ds), x.clone(), x.clone(), Scalar::from_i64(Q, 2));
    let r = check_lax_axioms(&f, &budget()).unwrap();
    let w = r.witness.expect("corrupted laxator fails");
    assert_eq!(w.objects.len(), 3);
    assert!(w.objects.windows(2).any(|p| p[0] == x && p[1] == x));
}

#[test]
fn composites_match_the_displayed_laxators() {
    let ds = nat(2);
    let t1 = truncation_functor(ds.clone(), 1).unwrap();
    let t2 = truncation_functor(ds.clone(), 2).unwrap();
    let id = identity_functor(ds.clone());
    let b = budget();
    // τ₁∘τ₂ and τ₂∘τ₁ are both τ₁ on laxator data.
    assert!(check_same_laxators("t", &compose_lax(&t1, &t2).unwrap(), &t1, &b).unwrap().passed());
    assert!(check_same_laxators("t", &compose_lax(&t2, &t1).unwrap(), &t1, &b).unwrap().passed());
    // Identity is a strict two-sided unit.
    assert!(check_same_laxators("t", &compose_lax(&id, &t2).unwrap(), &t2, &b).unwrap().passed());
    assert!(check_same_laxators("t", &compose_lax(&t2, &id).unwrap(), &t2, &b).unwrap().passed());
    assert!(check_same_laxators("t", &compose_lax(&id, &id).unwrap(), &id, &b).unwrap().passed());
    // τ₁ differs from τ₂.
    assert!(!check_same_laxators("t", &t1, &t2, &b).unwrap().passed());
}

#[test]
fn composition_preserves_all_verdicts() {
    let ds = nat(1);
    let target = ungraded_structure(Q).unwrap();
    let catalog = [
        identity_functor(ds.clone()),
        truncation_functor(ds.clone(), 0).unwrap(),
        truncation_functor(ds.clone(), 1).unwrap(),
        truncation_functor(ds.clone(), 2).unwrap(),
    ];
    let u = collapse_functor(ds.clone(), target).unwrap();
    for f in &catalog {
        assert_all_pass(&compose_lax(&u, f).unwrap());
        for g in &catalog {
            assert_all_pass(&compose_lax(g, f).unwrap());
        }
    }
}

#[test]
fn triple_composition_is_strict() {
    let ds = nat(2);
    let u = collapse_functor(ds.clone(), ungraded_structure(Q).unwrap()).unwrap();
    let t1 = truncation_functor(ds.clone(), 1).unwrap();
    let t2 = truncation_functor(ds.clone(), 2).unwrap();
    let r = check_triple_strictness(&u, &t1, &t2, &budget()).unwrap();
    assert!(r.passed(), "{:?}", r.witness);
    assert_eq!(r.coverage.object_tuples, 49 + 1);
    let id = identity_functor(ds.clone());
    assert!(check_triple_strictness(&id, &id, &id, &budget()).unwrap().passed());
}

#[test]
fn corrupted_composite_breaks_strictness_comparison() {
    let ds = nat(2);
    let t1 = truncation_functor(ds.clone(), 1).unwrap();
    let t2 = truncation_functor(ds.clone(), 2).unwrap();
    let x = GradedObject::new(Grading::Nat, [(0, 1)]).unwrap();
    let bad = corrupt_laxator(&compose_lax(&t1, &t2).unwrap(), x.clone(), x, Scalar::from_i64(Q, 2));
    let good = compose_lax(&t1, &t2).unwrap();
    let r = check_same_laxators("triple_strictness", &bad, &good, &budget()).unwrap();
    assert!(!r.passed());
}

#[test]
fn triple_strictness_rejects_uncomposable_chains() {
    let ds = nat(2);
    let u = collapse_functor(ds.clone(), ungraded_structure(Q).unwrap()).unwrap();
    let t1 = truncation_functor(ds, 1).unwrap();
    assert!(matches!(check_triple_strictness(&t1, &u, &t1, &budget()), Err(Error::StructureMismatch(_))));
}
