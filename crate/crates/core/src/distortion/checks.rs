//! Exact checkers for (D1)–(D4), Λ–σ commutation, and the scalar unit classification.

use crate::error::Result;
use crate::exactlin::coherence::{associator, associator_inv, left_unitor, left_unitor_inv, right_unitor, right_unitor_inv};
use crate::exactlin::graded::{compose, compose_all, tensor_map, tensor_obj, Degree, GradedMap, GradedObject, Grading};
use crate::exactlin::scalar::{Field, Scalar};
use crate::exactlin::word::Word;
use crate::harness::sampler::{palette, SampleStream};
use crate::report::{compare, quantify, CheckBudget, CheckReport, Witness};
use crate::route::{first_violation, reconcile};

use super::families::{BinaryFamily, DistortedStructure, UnitFamily};

pub const STRUCTURAL_NOTE: &str = "structural: exact for all morphisms";

/// One sampled binaturality instance: `(g⊗f)∘σ_{X,Y} = σ_{X',Y'}∘(f⊗g)` for the
/// `samples` map pairs `f : X → X'`, `g : Y → Y'` drawn for this tuple.
pub fn d1_at(
    ds: &DistortedStructure,
    objs: [&GradedObject; 4],
    samples: usize,
    seed: u64,
) -> Result<(usize, Option<Witness>)> {
    let [x, y, x2, y2] = objs;
    let fs = SampleStream::for_role(seed, "D1.f", &[x, x2]).maps(ds.field, x, x2, samples);
    let gs = SampleStream::for_role(seed, "D1.g", &[y, y2]).maps(ds.field, y, y2, samples);
    let s = ds.sigma.at(x, y)?;
    let s2 = ds.sigma.at(x2, y2)?;
    let objects = vec![x.clone(), y.clone(), x2.clone(), y2.clone()];
    for (k, (f, g)) in fs.iter().zip(&gs).enumerate() {
        let lhs = compose(&tensor_map(g, f)?, &s)?;
        let rhs = compose(&s2, &tensor_map(f, g)?)?;
        if let Some(w) = compare(&objects, Some(&Word::pair(0, 1)), lhs, rhs)? {
            return Ok((k + 1, Some(w.with_inputs(vec![f.clone(), g.clone()]))));
        }
    }
    Ok((fs.len(), None))
}

/// (D1) over all 4-tuples `(X, Y, X', Y')` of the universe with sampled maps.
pub fn check_d1(ds: &DistortedStructure, budget: &CheckBudget) -> Result<CheckReport> {
    let report = quantify("D1", &ds.universe, 4, budget, |t| {
        let out = d1_at(ds, [t[0], t[1], t[2], t[3]], budget.sample_maps.max(1), budget.seed)?;
        if ds.sigma.is_structural() {
            reconcile("D1", out.1.as_ref(), None, |_| true)?;
        }
        Ok(out)
    })?;
    Ok(if ds.sigma.is_structural() { report.with_note(STRUCTURAL_NOTE) } else { report })
}

/// `σ_{X,I} = λ⁻¹∘ρ` and `σ_{I,X} = ρ⁻¹∘λ` at one object.
pub fn d2_at(ds: &DistortedStructure, x: &GradedObject) -> Result<Option<Witness>> {
    let unit = ds.unit();
    let xi = [x.clone(), unit.clone()];
    let expected = compose(&left_unitor_inv(ds.field, x), &right_unitor(ds.field, x))?;
    if let Some(w) = compare(&xi, Some(&Word::pair(0, 1)), ds.sigma.at(x, &unit)?, expected)? {
        return Ok(Some(w.with_note("σ_{X,I} ≠ λ⁻¹∘ρ")));
    }
    let ix = [unit.clone(), x.clone()];
    let expected = compose(&right_unitor_inv(ds.field, x), &left_unitor(ds.field, x))?;
    Ok(compare(&ix, Some(&Word::pair(0, 1)), ds.sigma.at(&unit, x)?, expected)?.map(|w| w.with_note("σ_{I,X} ≠ ρ⁻¹∘λ")))
}

/// `Λ_I = Id_I`.
pub fn lambda_unit_at(ds: &DistortedStructure) -> Result<Option<Witness>> {
    let unit = ds.unit();
    let w = compare(
        std::slice::from_ref(&unit),
        Some(&Word::leaf(0)),
        ds.lambda.at(&unit)?,
        GradedMap::identity(ds.field, &unit),
    )?;
    Ok(w.map(|w| w.with_note("Λ_I ≠ Id_I")))
}

/// (D2): unit normalization of σ on every universe object, and `Λ_I = Id`.
pub fn check_d2(ds: &DistortedStructure, budget: &CheckBudget) -> Result<CheckReport> {
    if let Some(w) = lambda_unit_at(ds)? {
        return Ok(CheckReport::fail("D2", Default::default(), w));
    }
    let unit = ds.unit();
    quantify("D2", &ds.universe, 1, budget, |t| {
        let w = d2_at(ds, t[0])?;
        if ds.sigma.is_structural() {
            let holds = |d: &[Degree]| ds.sigma.scalar(d[0], d[1]).expect("structural").is_one();
            let fail = first_violation(&[t[0], &unit], holds).or_else(|| first_violation(&[&unit, t[0]], holds));
            reconcile("D2", w.as_ref(), fail.as_deref(), holds)?;
        }
        Ok((0, w))
    })
}

/// First hexagon: `σ_{X⊗Y,Z} = α_{Z,X,Y}(σ_{X,Z}⊗Id)α⁻¹_{X,Z,Y}(Id⊗σ_{Y,Z})α_{X,Y,Z}`.
pub fn hexagon_left_at(sigma: &BinaryFamily, field: Field, x: &GradedObject, y: &GradedObject, z: &GradedObject) -> Result<Option<Witness>> {
    let xy = tensor_obj(x, y)?;
    let lhs = sigma.at(&xy, z)?;
    let rhs = compose_all(&[
        &associator(field, z, x, y)?,
        &tensor_map(&sigma.at(x, z)?, &GradedMap::identity(field, y))?,
        &associator_inv(field, x, z, y)?,
        &tensor_map(&GradedMap::identity(field, x), &sigma.at(y, z)?)?,
        &associator(field, x, y, z)?,
    ])?;
    let objects = [x.clone(), y.clone(), z.clone()];
    Ok(compare(&objects, Some(&Word::left(0, 1, 2)), lhs, rhs)?.map(|w| w.with_note("first hexagon")))
}

/// Second hexagon: `σ_{X,Y⊗Z} = α⁻¹_{Y,Z,X}(Id⊗σ_{X,Z})α_{Y,X,Z}(σ_{X,Y}⊗Id)α⁻¹_{X,Y,Z}`.
pub fn hexagon_right_at(sigma: &BinaryFamily, field: Field, x: &GradedObject, y: &GradedObject, z: &GradedObject) -> Result<Option<Witness>> {
    let yz = tensor_obj(y, z)?;
    let lhs = sigma.at(x, &yz)?;
    let rhs = compose_all(&[
        &associator_inv(field, y, z, x)?,
        &tensor_map(&GradedMap::identity(field, y), &sigma.at(x, z)?)?,
        &associator(field, y, x, z)?,
        &tensor_map(&sigma.at(x, y)?, &GradedMap::identity(field, z))?,
        &associator_inv(field, x, y, z)?,
    ])?;
    let objects = [x.clone(), y.clone(), z.clone()];
    Ok(compare(&objects, Some(&Word::right(0, 1, 2)), lhs, rhs)?.map(|w| w.with_note("second hexagon")))
}

/// Scalar form of both hexagons at degrees `(a, b, c)`.
pub fn hexagons_hold(sigma: &BinaryFamily, grading: Grading, d: &[Degree]) -> bool {
    let s = |i, j| sigma.scalar(i, j).expect("structural");
    let (a, b, c) = (d[0], d[1], d[2]);
    s(grading.add(a, b), c) == &s(a, c) * &s(b, c) && s(a, grading.add(b, c)) == &s(a, b) * &s(a, c)
}

/// (D3): both hexagons over universe triples.
pub fn check_d3(ds: &DistortedStructure, budget: &CheckBudget) -> Result<CheckReport> {
    quantify("D3", &ds.universe, 3, budget, |t| {
        let w = match hexagon_left_at(&ds.sigma, ds.field, t[0], t[1], t[2])? {
            Some(w) => Some(w),
            None => hexagon_right_at(&ds.sigma, ds.field, t[0], t[1], t[2])?,
        };
        if ds.sigma.is_structural() {
            let holds = |d: &[Degree]| hexagons_hold(&ds.sigma, ds.grading, d);
            reconcile("D3", w.as_ref(), first_violation(t, holds).as_deref(), holds)?;
        }
        Ok((0, w))
    })
}

/// `Λ_{X⊗Y} = Λ_X⊗Λ_Y` at one pair.
pub fn d4_at(lambda: &UnitFamily, x: &GradedObject, y: &GradedObject) -> Result<Option<Witness>> {
    let lhs = lambda.at(&tensor_obj(x, y)?)?;
    let rhs = tensor_map(&lambda.at(x)?, &lambda.at(y)?)?;
    compare(&[x.clone(), y.clone()], Some(&Word::pair(0, 1)), lhs, rhs)
}

/// (D4): monoidality of Λ over universe pairs.
pub fn check_d4(ds: &DistortedStructure, budget: &CheckBudget) -> Result<CheckReport> {
    quantify("D4", &ds.universe, 2, budget, |t| {
        let w = d4_at(&ds.lambda, t[0], t[1])?;
        if ds.lambda.is_structural() {
            let a = |m| ds.lambda.scalar(m).expect("structural");
            let holds = |d: &[Degree]| a(ds.grading.add(d[0], d[1])) == &a(d[0]) * &a(d[1]);
            reconcile("D4", w.as_ref(), first_violation(t, holds).as_deref(), holds)?;
        }
        Ok((0, w))
    })
}

/// `(Λ_Y⊗Λ_X)∘σ_{X,Y} = σ_{X,Y}∘(Λ_X⊗Λ_Y)` at one pair.
pub fn lambda_sigma_at(ds: &DistortedStructure, x: &GradedObject, y: &GradedObject) -> Result<Option<Witness>> {
    let (lx, ly) = (ds.lambda.at(x)?, ds.lambda.at(y)?);
    let s = ds.sigma.at(x, y)?;
    let lhs = compose(&tensor_map(&ly, &lx)?, &s)?;
    let rhs = compose(&s, &tensor_map(&lx, &ly)?)?;
    compare(&[x.clone(), y.clone()], Some(&Word::pair(0, 1)), lhs, rhs)
}

/// Λ–σ commutation over universe pairs.
pub fn check_lambda_sigma_commute(ds: &DistortedStructure, budget: &CheckBudget) -> Result<CheckReport> {
    quantify("lambda_sigma", &ds.universe, 2, budget, |t| {
        let w = lambda_sigma_at(ds, t[0], t[1])?;
        if ds.sigma.is_structural() && ds.lambda.is_structural() {
            reconcile("lambda_sigma", w.as_ref(), None, |_| true)?;
        }
        Ok((0, w))
    })
}

/// Constant unit families `Λ_V = c·Id` on ungraded spaces that satisfy (D4)
/// and `Λ_I = Id`. Candidates are every element of a prime field with
/// `p ≤ 97`; otherwise the roots of `c² = c` together with the sample palette.
pub fn classify_scalar_unit_families(field: Field) -> Result<Vec<Scalar>> {
    let candidates = match field.elements() {
        Some(all) if field.characteristic() <= 97 => all,
        _ => {
            let mut c = vec![field.zero(), field.one()];
            c.extend(palette(field).into_iter().filter(|s| !s.is_zero() && !s.is_one()));
            c
        }
    };
    let universe = vec![
        GradedObject::unit(Grading::Trivial),
        GradedObject::new(Grading::Trivial, [(0, 2)])?,
    ];
    let budget = CheckBudget::default();
    let mut out = Vec::new();
    for c in candidates {
        let ds = DistortedStructure::new(
            field,
            Grading::Trivial,
            universe.clone(),
            BinaryFamily::symmetric(field),
            UnitFamily::Table(vec![c.clone()]),
        )?;
        if check_d4(&ds, &budget)?.passed() && check_d2(&ds, &budget)?.passed() {
            out.push(c);
        }
    }
    Ok(out)
}
