//! σ-lax monoidal functors between distorted structures.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::distortion::{BinaryFamily, DistortedStructure, UnitFamily};
use crate::error::{Error, Result};
use crate::exactlin::coherence::{associator, left_unitor, right_unitor};
use crate::exactlin::graded::{compose, compose_all, tensor_layout, tensor_map, tensor_obj, Degree, GradedMap, GradedObject, Grading};
use crate::exactlin::matrix::Matrix;
use crate::exactlin::scalar::{Field, Scalar};
use crate::exactlin::word::Word;
use crate::harness::sampler::SampleStream;
use crate::harness::universe::generate_universe;
use crate::report::{compare_at, quantify, sequence, CheckBudget, CheckReport, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorKind {
    Identity,
    /// Kills degrees above the bound.
    Truncation(Degree),
    /// Forgets the grading: total dimension, block-diagonal matrices.
    Collapse,
    /// `outer ∘ inner`.
    Composite { outer: Box<LaxFunctor>, inner: Box<LaxFunctor> },
    /// Test hook: the laxator at one pair is scaled.
    Corrupted { inner: Box<LaxFunctor>, at: (GradedObject, GradedObject), factor: Scalar },
}

/// A functor with laxators `μ_{X,Y} : FX⊗FY → F(X⊗Y)` and `μ₀ : I → FI`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaxFunctor {
    pub source: Arc<DistortedStructure>,
    pub target: Arc<DistortedStructure>,
    pub kind: FunctorKind,
}

/// Ungraded target for the collapse functor: symmetric σ, trivial Λ.
pub fn ungraded_structure(field: Field) -> Result<Arc<DistortedStructure>> {
    let universe = generate_universe(Grading::Trivial, 0, 2, 1)?;
    Ok(Arc::new(DistortedStructure::new(
        field,
        Grading::Trivial,
        universe,
        BinaryFamily::symmetric(field),
        UnitFamily::identity(field),
    )?))
}

pub fn identity_functor(ds: Arc<DistortedStructure>) -> LaxFunctor {
    LaxFunctor { source: ds.clone(), target: ds, kind: FunctorKind::Identity }
}

/// `τ_d` on an ℕ-graded structure.
pub fn truncation_functor(ds: Arc<DistortedStructure>, d: Degree) -> Result<LaxFunctor> {
    if ds.grading != Grading::Nat {
        return Err(Error::MonoidMismatch(format!("truncation needs ℕ-grading, got {}", ds.grading)));
    }
    Ok(LaxFunctor { source: ds.clone(), target: ds, kind: FunctorKind::Truncation(d) })
}

/// The forgetful functor to a trivially graded structure over the same field.
pub fn collapse_functor(ds: Arc<DistortedStructure>, target: Arc<DistortedStructure>) -> Result<LaxFunctor> {
    if target.grading != Grading::Trivial {
        return Err(Error::MonoidMismatch(format!("collapse target must be trivially graded, got {}", target.grading)));
    }
    if target.field != ds.field {
        return Err(Error::StructureMismatch(format!("collapse from {} to {}", ds.field, target.field)));
    }
    Ok(LaxFunctor { source: ds, target, kind: FunctorKind::Collapse })
}

/// `G∘F` with `μ^{GF}_{X,Y} = G(μ^F_{X,Y})∘μ^G_{FX,FY}` and `μ^{GF}_0 = G(μ^F_0)∘μ^G_0`.
pub fn compose_lax(g: &LaxFunctor, f: &LaxFunctor) -> Result<LaxFunctor> {
    if f.target != g.source {
        return Err(Error::StructureMismatch("the inner functor's target is not the outer functor's source".into()));
    }
    Ok(LaxFunctor {
        source: f.source.clone(),
        target: g.target.clone(),
        kind: FunctorKind::Composite { outer: Box::new(g.clone()), inner: Box::new(f.clone()) },
    })
}

/// Test hook: scales `μ_{X,Y}` by `factor` at the single pair `(x, y)`.
pub fn corrupt_laxator(f: &LaxFunctor, x: GradedObject, y: GradedObject, factor: Scalar) -> LaxFunctor {
    LaxFunctor {
        source: f.source.clone(),
        target: f.target.clone(),
        kind: FunctorKind::Corrupted { inner: Box::new(f.clone()), at: (x, y), factor },
    }
}

impl LaxFunctor {
    fn field(&self) -> Field {
        self.target.field
    }

    pub fn obj(&self, x: &GradedObject) -> Result<GradedObject> {
        match &self.kind {
            FunctorKind::Identity => Ok(x.clone()),
            FunctorKind::Truncation(d) => {
                GradedObject::new(x.grading(), x.dims().iter().filter(|(k, _)| *k <= d).map(|(&k, &n)| (k, n)))
            }
            FunctorKind::Collapse => match x.total_dim() {
                0 => Ok(GradedObject::zero_object(Grading::Trivial)),
                n => GradedObject::new(Grading::Trivial, [(0, n)]),
            },
            FunctorKind::Composite { outer, inner } => outer.obj(&inner.obj(x)?),
            FunctorKind::Corrupted { inner, .. } => inner.obj(x),
        }
    }

    pub fn map(&self, f: &GradedMap) -> Result<GradedMap> {
        match &self.kind {
            FunctorKind::Identity => Ok(f.clone()),
            FunctorKind::Truncation(d) => {
                let blocks = f.blocks().iter().filter(|(k, _)| *k <= d).map(|(k, m)| (*k, m.clone()));
                GradedMap::new(f.field(), self.obj(f.source())?, self.obj(f.target())?, blocks.collect::<Vec<_>>())
            }
            FunctorKind::Collapse => {
                let (s, t) = (self.obj(f.source())?, self.obj(f.target())?);
                let (rows, cols) = (t.dim(0), s.dim(0));
                if rows == 0 || cols == 0 {
                    return GradedMap::zero(f.field(), s, t);
                }
                let mut m = Matrix::zeros(f.field(), rows, cols);
                for (d, b) in f.blocks() {
                    m.place(f.target().offset(*d), f.source().offset(*d), b);
                }
                GradedMap::new(f.field(), s, t, [(0, m)])
            }
            FunctorKind::Composite { outer, inner } => outer.map(&inner.map(f)?),
            FunctorKind::Corrupted { inner, .. } => inner.map(f),
        }
    }

    /// `μ_{X,Y} : FX⊗FY → F(X⊗Y)`.
    pub fn mu(&self, x: &GradedObject, y: &GradedObject) -> Result<GradedMap> {
        let field = self.field();
        match &self.kind {
            FunctorKind::Identity => Ok(GradedMap::identity(field, &tensor_obj(x, y)?)),
            FunctorKind::Truncation(d) => {
                let source = tensor_obj(&self.obj(x)?, &self.obj(y)?)?;
                let target = self.obj(&tensor_obj(x, y)?)?;
                let blocks: Vec<_> = target.dims().iter().map(|(&n, &k)| (n, Matrix::identity(field, k))).collect();
                debug_assert!(blocks.iter().all(|(n, _)| *n <= *d && source.dim(*n) == target.dim(*n)));
                GradedMap::new(field, source, target, blocks)
            }
            FunctorKind::Collapse => {
                let source = tensor_obj(&self.obj(x)?, &self.obj(y)?)?;
                let xy = tensor_obj(x, y)?;
                let target = self.obj(&xy)?;
                let n = target.dim(0);
                if n == 0 {
                    return GradedMap::zero(field, source, target);
                }
                // (x-index k, y-index l) in row-major order ↦ position in the degree-sorted basis of X⊗Y.
                let layout = tensor_layout(x, y);
                let ny = y.total_dim();
                let mut m = Matrix::zeros(field, n, n);
                for (&i, &di) in x.dims() {
                    for (&j, &dj) in y.dims() {
                        let total = x.grading().add(i, j);
                        let off = layout[&total].iter().find(|(a, b, _)| *a == i && *b == j).expect("summand").2;
                        for a in 0..di {
                            for b in 0..dj {
                                let col = (x.offset(i) + a) * ny + y.offset(j) + b;
                                let row = xy.offset(total) + off + a * dj + b;
                                m.set(row, col, field.one());
                            }
                        }
                    }
                }
                GradedMap::new(field, source, target, [(0, m)])
            }
            FunctorKind::Composite { outer, inner } => {
                compose(&outer.map(&inner.mu(x, y)?)?, &outer.mu(&inner.obj(x)?, &inner.obj(y)?)?)
            }
            FunctorKind::Corrupted { inner, at, factor } => {
                let m = inner.mu(x, y)?;
                Ok(if at.0 == *x && at.1 == *y { m.scale(factor) } else { m })
            }
        }
    }

    /// `μ₀ : I' → F I`.
    pub fn mu0(&self) -> Result<GradedMap> {
        let field = self.field();
        match &self.kind {
            FunctorKind::Identity | FunctorKind::Truncation(_) | FunctorKind::Collapse => {
                let unit = self.target.unit();
                let fi = self.obj(&self.source.unit())?;
                GradedMap::identity(field, &unit).retype(unit, fi)
            }
            FunctorKind::Composite { outer, inner } => compose(&outer.map(&inner.mu0()?)?, &outer.mu0()?),
            FunctorKind::Corrupted { inner, .. } => inner.mu0(),
        }
    }

    fn universe(&self) -> &[GradedObject] {
        &self.source.universe
    }
}

fn images(f: &LaxFunctor, objs: &[&GradedObject]) -> Result<Vec<GradedObject>> {
    objs.iter().map(|o| f.obj(o)).collect()
}

fn owned(objs: &[&GradedObject]) -> Vec<GradedObject> {
    objs.iter().map(|o| (*o).clone()).collect()
}

/// `F(α)∘μ_{X⊗Y,Z}∘(μ_{X,Y}⊗Id) = μ_{X,Y⊗Z}∘(Id⊗μ_{Y,Z})∘α'`.
pub fn lax_associativity_at(f: &LaxFunctor, x: &GradedObject, y: &GradedObject, z: &GradedObject) -> Result<Option<Witness>> {
    let field = f.field();
    let (fx, fy, fz) = (f.obj(x)?, f.obj(y)?, f.obj(z)?);
    let (xy, yz) = (tensor_obj(x, y)?, tensor_obj(y, z)?);
    let lhs = compose_all(&[
        &f.map(&associator(f.source.field, x, y, z)?)?,
        &f.mu(&xy, z)?,
        &tensor_map(&f.mu(x, y)?, &GradedMap::identity(field, &fz))?,
    ])?;
    let rhs = compose_all(&[
        &f.mu(x, &yz)?,
        &tensor_map(&GradedMap::identity(field, &fx), &f.mu(y, z)?)?,
        &associator(field, &fx, &fy, &fz)?,
    ])?;
    let w = compare_at(&owned(&[x, y, z]), &[fx, fy, fz], Some(&Word::left(0, 1, 2)), lhs, rhs)?;
    Ok(w.map(|w| w.with_note("lax associativity")))
}

/// Both unit triangles at `X`.
pub fn lax_unit_at(f: &LaxFunctor, x: &GradedObject) -> Result<Option<Witness>> {
    let field = f.field();
    let fx = f.obj(x)?;
    let unit = f.source.unit();
    let tunit = f.target.unit();
    let id_fx = GradedMap::identity(field, &fx);
    let left = compose_all(&[
        &f.map(&left_unitor(f.source.field, x))?,
        &f.mu(&unit, x)?,
        &tensor_map(&f.mu0()?, &id_fx)?,
    ])?;
    let w = compare_at(std::slice::from_ref(x), &[tunit.clone(), fx.clone()], Some(&Word::pair(0, 1)), left, left_unitor(field, &fx))?;
    if let Some(w) = w {
        return Ok(Some(w.with_note("left unit")));
    }
    let right = compose_all(&[
        &f.map(&right_unitor(f.source.field, x))?,
        &f.mu(x, &unit)?,
        &tensor_map(&id_fx, &f.mu0()?)?,
    ])?;
    let w = compare_at(std::slice::from_ref(x), &[fx.clone(), tunit], Some(&Word::pair(0, 1)), right, right_unitor(field, &fx))?;
    Ok(w.map(|w| w.with_note("right unit")))
}

/// Lax associativity over universe triples, then both unit triangles over universe objects.
pub fn check_lax_axioms(f: &LaxFunctor, budget: &CheckBudget) -> Result<CheckReport> {
    let u = f.universe();
    sequence(
        "lax_axioms",
        vec![
            Box::new(|| quantify("lax_axioms", u, 3, budget, |t| Ok((0, lax_associativity_at(f, t[0], t[1], t[2])?)))),
            Box::new(|| quantify("lax_axioms", u, 1, budget, |t| Ok((0, lax_unit_at(f, t[0])?)))),
        ],
    )
}

/// `F(Λ_Z) = Λ'_{FZ}`.
pub fn slambda_at(f: &LaxFunctor, z: &GradedObject) -> Result<Option<Witness>> {
    let fz = f.obj(z)?;
    let lhs = f.map(&f.source.lambda.at(z)?)?;
    let rhs = f.target.lambda.at(&fz)?;
    compare_at(std::slice::from_ref(z), &[fz], Some(&Word::leaf(0)), lhs, rhs)
}

pub fn check_slambda(f: &LaxFunctor, budget: &CheckBudget) -> Result<CheckReport> {
    quantify("SLambda", f.universe(), 1, budget, |t| Ok((0, slambda_at(f, t[0])?)))
}

/// `F(σ_{X,Y})∘μ_{X,Y} = μ_{Y,X}∘σ'_{FX,FY}`.
pub fn ssigma_at(f: &LaxFunctor, x: &GradedObject, y: &GradedObject) -> Result<Option<Witness>> {
    let (fx, fy) = (f.obj(x)?, f.obj(y)?);
    let lhs = compose(&f.map(&f.source.sigma.at(x, y)?)?, &f.mu(x, y)?)?;
    let rhs = compose(&f.mu(y, x)?, &f.target.sigma.at(&fx, &fy)?)?;
    compare_at(&[x.clone(), y.clone()], &[fx, fy], Some(&Word::pair(0, 1)), lhs, rhs)
}

pub fn check_ssigma(f: &LaxFunctor, budget: &CheckBudget) -> Result<CheckReport> {
    quantify("Ssigma", f.universe(), 2, budget, |t| Ok((0, ssigma_at(f, t[0], t[1])?)))
}

/// `F(Id) = Id` on universe objects and `F(g∘f) = F(g)∘F(f)` on sampled composable pairs.
pub fn check_functoriality(f: &LaxFunctor, budget: &CheckBudget) -> Result<CheckReport> {
    let u = f.universe();
    let field = f.source.field;
    let n = budget.sample_maps.max(1);
    sequence(
        "functoriality",
        vec![
            Box::new(|| {
                quantify("functoriality", u, 1, budget, |t| {
                    let fx = f.obj(t[0])?;
                    let lhs = f.map(&GradedMap::identity(field, t[0]))?;
                    let w = compare_at(&owned(t), std::slice::from_ref(&fx), Some(&Word::leaf(0)), lhs, GradedMap::identity(f.field(), &fx))?;
                    Ok((0, w.map(|w| w.with_note("F(Id) ≠ Id"))))
                })
            }),
            Box::new(|| {
                quantify("functoriality", u, 3, budget, |t| {
                    let fs = SampleStream::for_role(budget.seed, "functor.f", &[t[0], t[1]]).maps(field, t[0], t[1], n);
                    let gs = SampleStream::for_role(budget.seed, "functor.g", &[t[1], t[2]]).maps(field, t[1], t[2], n);
                    for (k, (a, b)) in fs.iter().zip(&gs).enumerate() {
                        let lhs = f.map(&compose(b, a)?)?;
                        let rhs = compose(&f.map(b)?, &f.map(a)?)?;
                        let fx = f.obj(t[0])?;
                        if let Some(w) = compare_at(&owned(t), &[fx], Some(&Word::leaf(0)), lhs, rhs)? {
                            return Ok((k + 1, Some(w.with_inputs(vec![a.clone(), b.clone()]))));
                        }
                    }
                    Ok((n, None))
                })
            }),
        ],
    )
}

/// `F(f⊗g)∘μ_{X,Y} = μ_{X',Y'}∘(Ff⊗Fg)` on sampled `f : X → X'`, `g : Y → Y'`.
pub fn check_laxator_naturality(f: &LaxFunctor, budget: &CheckBudget) -> Result<CheckReport> {
    let field = f.source.field;
    let n = budget.sample_maps.max(1);
    quantify("laxator_naturality", f.universe(), 4, budget, |t| {
        let [x, y, x2, y2] = [t[0], t[1], t[2], t[3]];
        let fs = SampleStream::for_role(budget.seed, "mu.f", &[x, x2]).maps(field, x, x2, n);
        let gs = SampleStream::for_role(budget.seed, "mu.g", &[y, y2]).maps(field, y, y2, n);
        let (m, m2) = (f.mu(x, y)?, f.mu(x2, y2)?);
        let factors = images(f, &[x, y])?;
        for (k, (a, b)) in fs.iter().zip(&gs).enumerate() {
            let lhs = compose(&f.map(&tensor_map(a, b)?)?, &m)?;
            let rhs = compose(&m2, &tensor_map(&f.map(a)?, &f.map(b)?)?)?;
            if let Some(w) = compare_at(&owned(t), &factors, Some(&Word::pair(0, 1)), lhs, rhs)? {
                return Ok((k + 1, Some(w.with_inputs(vec![a.clone(), b.clone()]))));
            }
        }
        Ok((n, None))
    })
}

/// Blockwise equality of the laxator data of two functors with the same source:
/// `μ` on universe pairs, then `μ₀`.
pub fn check_same_laxators(axiom: &str, left: &LaxFunctor, right: &LaxFunctor, budget: &CheckBudget) -> Result<CheckReport> {
    if left.source != right.source || left.target != right.target {
        return Err(Error::StructureMismatch(format!("{axiom}: functors have different endpoints")));
    }
    let u = left.universe();
    sequence(
        axiom,
        vec![
            Box::new(|| {
                quantify(axiom, u, 2, budget, |t| {
                    let (l, r) = (left.mu(t[0], t[1])?, right.mu(t[0], t[1])?);
                    if l.source() != r.source() || l.target() != r.target() {
                        let note = format!("laxators have types {} -> {} and {} -> {}", l.source(), l.target(), r.source(), r.target());
                        return Ok((0, Some(Witness::note(owned(t), vec![], note))));
                    }
                    let factors = images(left, t)?;
                    let w = compare_at(&owned(t), &factors, Some(&Word::pair(0, 1)), l, r)?;
                    Ok((0, w.map(|w| w.with_note("μ differs"))))
                })
            }),
            Box::new(|| {
                let unit = left.source.unit();
                let (l, r) = (left.mu0()?, right.mu0()?);
                let w = compare_at(std::slice::from_ref(&unit), &[left.target.unit()], Some(&Word::leaf(0)), l, r)?;
                let coverage = crate::report::Coverage { object_tuples: 1, available_tuples: 1, ..Default::default() };
                Ok(match w {
                    None => CheckReport::pass(axiom, coverage),
                    Some(w) => CheckReport::fail(axiom, coverage, w.with_note("μ₀ differs")),
                })
            }),
        ],
    )
}

/// `H∘(G∘F)` and `(H∘G)∘F` have blockwise equal laxators and units.
pub fn check_triple_strictness(h: &LaxFunctor, g: &LaxFunctor, f: &LaxFunctor, budget: &CheckBudget) -> Result<CheckReport> {
    let left = compose_lax(h, &compose_lax(g, f)?)?;
    let right = compose_lax(&compose_lax(h, g)?, f)?;
    check_same_laxators("triple_strictness", &left, &right, budget)
}

/// A small lookup for functors by name, used by scenarios.
pub type FunctorTable = BTreeMap<String, LaxFunctor>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::universe::default_nat_universe;

    const Q: Field = Field::Rational;

    fn nat() -> Arc<DistortedStructure> {
        Arc::new(
            DistortedStructure::new(Q, Grading::Nat, default_nat_universe(), BinaryFamily::symmetric(Q), UnitFamily::identity(Q))
                .unwrap(),
        )
    }

    #[test]
    fn truncation_kills_high_degrees() {
        let t = truncation_functor(nat(), 1).unwrap();
        let x = GradedObject::new(Grading::Nat, [(0, 1), (1, 1), (2, 1)]).unwrap();
        assert_eq!(t.obj(&x).unwrap().to_string(), "{0:1,1:1}");
    }

    #[test]
    fn truncation_laxator_is_identity_below_bound() {
        let t = truncation_functor(nat(), 1).unwrap();
        let x = GradedObject::new(Grading::Nat, [(0, 1), (1, 1)]).unwrap();
        let mu = t.mu(&x, &x).unwrap();
        assert_eq!(mu.source().to_string(), "{0:1,1:2,2:1}");
        assert_eq!(mu.target().to_string(), "{0:1,1:2}");
        assert_eq!(mu.block(0).unwrap(), Matrix::identity(Q, 1));
        assert_eq!(mu.block(1).unwrap(), Matrix::identity(Q, 2));
        assert!(mu.block(2).is_none());
    }

    #[test]
    fn collapse_laxator_reorders_into_degree_order() {
        let ds = nat();
        let u = collapse_functor(ds.clone(), ungraded_structure(Q).unwrap()).unwrap();
        let x = GradedObject::new(Grading::Nat, [(0, 1), (1, 1)]).unwrap();
        // UX⊗UX basis: (0,0),(0,1),(1,0),(1,1); X⊗X degree order: (0,0) | (0,1),(1,0) | (1,1)
        assert!(u.mu(&x, &x).unwrap().is_identity());
        let y = GradedObject::new(Grading::Nat, [(1, 1), (2, 1)]).unwrap();
        let z = GradedObject::new(Grading::Nat, [(0, 1), (2, 1)]).unwrap();
        // Y⊗Z degree order: (1,0) | (2,0) | (1,2) | (2,2); row-major: (1,0),(1,2),(2,0),(2,2)
        let m = u.mu(&y, &z).unwrap().block(0).unwrap();
        let expected = Matrix::from_i64(Q, &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(m, expected);
    }

    #[test]
    fn compose_rejects_mismatched_structures() {
        let a = nat();
        let t = truncation_functor(a.clone(), 1).unwrap();
        let u = collapse_functor(a, ungraded_structure(Q).unwrap()).unwrap();
        assert!(matches!(compose_lax(&t, &u), Err(Error::StructureMismatch(_))));
        assert!(compose_lax(&u, &t).is_ok());
    }
}
