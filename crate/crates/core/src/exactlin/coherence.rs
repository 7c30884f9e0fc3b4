//! Associators, unitors, and the pentagon/triangle sanity check of the base category.

use super::graded::{compose_all, tensor_map, tensor_obj, GradedMap, GradedObject};
use super::scalar::Field;
use super::word::{relabel, Word};
use crate::error::Result;
use crate::report::{compare, quantify, CheckBudget, CheckReport};

/// `α_{X,Y,Z} : (X⊗Y)⊗Z → X⊗(Y⊗Z)`, a permutation at each total degree.
pub fn associator(field: Field, x: &GradedObject, y: &GradedObject, z: &GradedObject) -> Result<GradedMap> {
    let factors = [x.clone(), y.clone(), z.clone()];
    relabel(field, &factors, &Word::left(0, 1, 2), &Word::right(0, 1, 2), |_| field.one())
}

/// `α⁻¹_{X,Y,Z} : X⊗(Y⊗Z) → (X⊗Y)⊗Z`, the transpose of [`associator`].
pub fn associator_inv(field: Field, x: &GradedObject, y: &GradedObject, z: &GradedObject) -> Result<GradedMap> {
    let factors = [x.clone(), y.clone(), z.clone()];
    relabel(field, &factors, &Word::right(0, 1, 2), &Word::left(0, 1, 2), |_| field.one())
}

/// `λ_X : I⊗X → X`. In the canonical basis this is the identity permutation.
pub fn left_unitor(field: Field, x: &GradedObject) -> GradedMap {
    GradedMap::identity(field, x)
}

pub fn left_unitor_inv(field: Field, x: &GradedObject) -> GradedMap {
    GradedMap::identity(field, x)
}

/// `ρ_X : X⊗I → X`, likewise the identity permutation.
pub fn right_unitor(field: Field, x: &GradedObject) -> GradedMap {
    GradedMap::identity(field, x)
}

pub fn right_unitor_inv(field: Field, x: &GradedObject) -> GradedMap {
    GradedMap::identity(field, x)
}

/// Source of an associator, for building custom (corrupted) associators in tests.
pub type AssociatorFn<'a> = dyn Fn(&GradedObject, &GradedObject, &GradedObject) -> Result<GradedMap> + 'a;

/// Pentagon over all quadruples and triangle over all pairs of `universe`.
pub fn check_base(field: Field, universe: &[GradedObject], budget: &CheckBudget) -> Result<Vec<CheckReport>> {
    check_base_with(field, universe, budget, &|x, y, z| associator(field, x, y, z))
}

/// [`check_base`] with a caller-supplied associator (negative controls).
pub fn check_base_with(
    field: Field,
    universe: &[GradedObject],
    budget: &CheckBudget,
    assoc: &AssociatorFn<'_>,
) -> Result<Vec<CheckReport>> {
    let pentagon = quantify("pentagon", universe, 4, budget, |t| {
        Ok((0, pentagon_at(field, assoc, t[0], t[1], t[2], t[3])?))
    })?;
    let triangle = quantify("triangle", universe, 2, budget, |t| Ok((0, triangle_at(field, assoc, t[0], t[1])?)))?;
    Ok(vec![pentagon, triangle])
}

/// `(Id_W⊗α_{X,Y,Z}) ∘ α_{W,X⊗Y,Z} ∘ (α_{W,X,Y}⊗Id_Z) = α_{W,X,Y⊗Z} ∘ α_{W⊗X,Y,Z}`.
pub fn pentagon_at(
    field: Field,
    assoc: &AssociatorFn<'_>,
    w: &GradedObject,
    x: &GradedObject,
    y: &GradedObject,
    z: &GradedObject,
) -> Result<Option<crate::report::Witness>> {
    let wx = tensor_obj(w, x)?;
    let xy = tensor_obj(x, y)?;
    let yz = tensor_obj(y, z)?;
    let lhs = compose_all(&[
        &tensor_map(&GradedMap::identity(field, w), &assoc(x, y, z)?)?,
        &assoc(w, &xy, z)?,
        &tensor_map(&assoc(w, x, y)?, &GradedMap::identity(field, z))?,
    ])?;
    let rhs = compose_all(&[&assoc(w, x, &yz)?, &assoc(&wx, y, z)?])?;
    let source = Word::tensor(Word::left(0, 1, 2), Word::leaf(3));
    compare(&[w.clone(), x.clone(), y.clone(), z.clone()], Some(&source), lhs, rhs)
}

/// `(Id_X⊗λ_Y) ∘ α_{X,I,Y} = ρ_X⊗Id_Y`.
pub fn triangle_at(
    field: Field,
    assoc: &AssociatorFn<'_>,
    x: &GradedObject,
    y: &GradedObject,
) -> Result<Option<crate::report::Witness>> {
    let unit = GradedObject::unit(x.grading());
    let lhs = compose_all(&[
        &tensor_map(&GradedMap::identity(field, x), &left_unitor(field, y))?,
        &assoc(x, &unit, y)?,
    ])?;
    let rhs = tensor_map(&right_unitor(field, x), &GradedMap::identity(field, y))?;
    compare(&[x.clone(), unit, y.clone()], Some(&Word::left(0, 1, 2)), lhs, rhs)
}
