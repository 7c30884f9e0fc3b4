use distmon::distortion::checks::{check_d1, check_d2, check_d3, check_d4, check_lambda_sigma_commute, classify_scalar_unit_families};
use distmon::distortion::{BinaryFamily, DistortedStructure, UnitFamily};
use distmon::exactlin::{Field, GradedObject, Grading, Matrix, Scalar};
use distmon::harness::universe::{closure_pairs, default_nat_universe, default_parity_universe};
use distmon::report::CheckBudget;
use distmon::twist::{twist, IdempotentFamily};

const Q: Field = Field::Rational;

fn obj(g: Grading, dims: &[(u32, usize)]) -> GradedObject {
    GradedObject::new(g, dims.iter().copied()).unwrap()
}

fn parity(sigma: BinaryFamily) -> DistortedStructure {
    DistortedStructure::new(Q, Grading::Parity, default_parity_universe(), sigma, UnitFamily::identity(Q)).unwrap()
}

fn nat(sigma: BinaryFamily, lambda: UnitFamily) -> DistortedStructure {
    DistortedStructure::new(Q, Grading::Nat, default_nat_universe(), sigma, lambda).unwrap()
}

#[test]
fn koszul_braiding_satisfies_d1_to_d4_on_parity() {
    let ds = parity(BinaryFamily::koszul(Q));
    let b = CheckBudget::default();
    for r in [check_d1(&ds, &b), check_d2(&ds, &b), check_d3(&ds, &b), check_d4(&ds, &b)] {
        let r = r.unwrap();
        assert!(r.passed(), "{} failed: {:?}", r.axiom, r.witness);
    }
}

#[test]
fn twisted_koszul_fails_first_hexagon_at_odd_triple() {
    let sigma = twist(&BinaryFamily::koszul(Q), &IdempotentFamily::parity_projector(Q)).unwrap();
    let r = check_d3(&parity(sigma), &CheckBudget::default()).unwrap();
    let w = r.witness.expect("D3 fails");
    let p = obj(Grading::Parity, &[(1, 1)]);
    assert_eq!(w.objects, vec![p.clone(), p.clone(), p]);
    assert_eq!(w.degrees, vec![1, 1, 1]);
    assert_eq!(w.note.as_deref(), Some("first hexagon"));
    let c = w.comparison.unwrap();
    assert_eq!(c.difference.left, Q.one());
    assert_eq!(c.difference.right, Q.zero());
}

#[test]
fn truncated_character_table_fails_d4_on_degree_one_lines() {
    let a = UnitFamily::character_family(vec![Q.one(), Q.one(), Q.zero()]).unwrap();
    let r = check_d4(&nat(BinaryFamily::symmetric(Q), a), &CheckBudget::default()).unwrap();
    let w = r.witness.expect("D4 fails");
    let v = obj(Grading::Nat, &[(1, 1)]);
    assert_eq!(w.objects, vec![v.clone(), v]);
    let c = w.comparison.unwrap();
    assert_eq!(c.difference.degree, 2);
    assert_eq!(c.lhs.block(2).unwrap(), Matrix::from_i64(Q, &[&[0]]));
    assert_eq!(c.rhs.block(2).unwrap(), Matrix::from_i64(Q, &[&[1]]));
}

#[test]
fn character_commutes_with_sigma_even_when_d4_fails() {
    let a = UnitFamily::character_family(vec![Q.one(), Q.one(), Q.zero()]).unwrap();
    let r = check_lambda_sigma_commute(&nat(BinaryFamily::symmetric(Q), a), &CheckBudget::default()).unwrap();
    assert!(r.passed());
}

#[test]
fn scaled_tabulated_pair_breaks_binaturality() {
    let u = vec![GradedObject::unit(Grading::Nat), obj(Grading::Nat, &[(1, 1)]), obj(Grading::Nat, &[(0, 1), (1, 1)])];
    let pairs = closure_pairs(&u, 1).unwrap();
    let sym = BinaryFamily::symmetric(Q);
    let table = sym.tabulate(pairs.iter().map(|(a, b)| (a, b))).unwrap();
    let ds = DistortedStructure::new(Q, Grading::Nat, u.clone(), table.clone(), UnitFamily::identity(Q)).unwrap();
    assert!(check_d1(&ds, &CheckBudget::default()).unwrap().passed());

    let BinaryFamily::Tabulated(mut t) = table else { unreachable!() };
    let key = (u[2].clone(), u[2].clone());
    let m = t[&key].clone();
    let scaled = m.with_block(1, m.block(1).unwrap().scale(&Scalar::from_i64(Q, 2))).unwrap();
    t.insert(key.clone(), scaled);
    let ds = ds.with_sigma(BinaryFamily::Tabulated(t)).unwrap();
    let r = check_d1(&ds, &CheckBudget::default()).unwrap();
    let w = r.witness.expect("D1 fails");
    assert!(w.objects[..2] == [key.0.clone(), key.1.clone()] || w.objects[2..] == [key.0, key.1]);
}

#[test]
fn unit_classification_is_one() {
    for f in [Q, Field::Prime(2), Field::Prime(3)] {
        assert_eq!(classify_scalar_unit_families(f).unwrap(), vec![f.one()]);
    }
}
