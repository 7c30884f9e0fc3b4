//! Monoidal natural transformations between σ-lax functors.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::distortion::DistortedStructure;
use crate::error::{Error, Result};
use crate::exactlin::graded::{compose, tensor_map, tensor_obj, Degree, GradedMap, GradedObject};
use crate::exactlin::matrix::Matrix;
use crate::exactlin::scalar::Scalar;
use crate::exactlin::word::Word;
use crate::harness::sampler::SampleStream;
use crate::laxfun::{compose_lax, identity_functor, truncation_functor, LaxFunctor};
use crate::report::{compare_at, quantify, sequence, CheckBudget, CheckReport, Coverage, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransKind {
    Identity,
    /// Degree projection `τ_large X → τ_small X`.
    Projection(Degree),
    /// `c·Id_{FX}`.
    Scalar(Scalar),
    /// Components given explicitly on finitely many objects.
    Tabulated(BTreeMap<GradedObject, GradedMap>),
    /// `φ_X∘θ_X`.
    Vertical { outer: Box<MonNatTrans>, inner: Box<MonNatTrans> },
    /// `φ_{F₂X}∘G₁(θ_X)`.
    Horizontal { outer: Box<MonNatTrans>, inner: Box<MonNatTrans> },
    /// Test hook: one component scaled.
    Corrupted { inner: Box<MonNatTrans>, at: GradedObject, factor: Scalar },
}

/// `θ : F ⇒ G` with components `θ_X : FX → GX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonNatTrans {
    pub source: LaxFunctor,
    pub target: LaxFunctor,
    pub kind: TransKind,
}

fn same_endpoints(f: &LaxFunctor, g: &LaxFunctor) -> Result<()> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::StructureMismatch("functors have different source or target structures".into()));
    }
    Ok(())
}

pub fn identity_transformation(f: &LaxFunctor) -> MonNatTrans {
    MonNatTrans { source: f.clone(), target: f.clone(), kind: TransKind::Identity }
}

/// The 2-cell `τ_{d_large} ⇒ τ_{d_small}` given by degree projections.
pub fn projection_transformation(ds: Arc<DistortedStructure>, d_small: Degree, d_large: Degree) -> Result<MonNatTrans> {
    if d_small > d_large {
        return Err(Error::InvalidArgument(format!("projection needs d_small ≤ d_large, got {d_small} > {d_large}")));
    }
    Ok(MonNatTrans {
        source: truncation_functor(ds.clone(), d_large)?,
        target: truncation_functor(ds, d_small)?,
        kind: TransKind::Projection(d_small),
    })
}

/// `θ_X = c·Id_{FX}`.
pub fn scalar_transformation(f: &LaxFunctor, c: Scalar) -> Result<MonNatTrans> {
    if c.field() != f.target.field {
        return Err(Error::InvalidScalar(format!("{c} is not in {}", f.target.field)));
    }
    Ok(MonNatTrans { source: f.clone(), target: f.clone(), kind: TransKind::Scalar(c) })
}

/// Explicit components; each must have type `FX → GX`.
pub fn tabulated_transformation(
    f: &LaxFunctor,
    g: &LaxFunctor,
    components: impl IntoIterator<Item = (GradedObject, GradedMap)>,
) -> Result<MonNatTrans> {
    same_endpoints(f, g)?;
    let components: BTreeMap<_, _> = components.into_iter().collect();
    for (x, m) in &components {
        let (fx, gx) = (f.obj(x)?, g.obj(x)?);
        if *m.source() != fx || *m.target() != gx {
            return Err(Error::InvalidMap(format!(
                "component at {x} has type {} -> {}, expected {fx} -> {gx}",
                m.source(),
                m.target()
            )));
        }
    }
    Ok(MonNatTrans { source: f.clone(), target: g.clone(), kind: TransKind::Tabulated(components) })
}

/// Test hook: scales `θ_X` by `factor` at the single object `at`.
pub fn corrupt_component(theta: &MonNatTrans, at: GradedObject, factor: Scalar) -> MonNatTrans {
    MonNatTrans {
        source: theta.source.clone(),
        target: theta.target.clone(),
        kind: TransKind::Corrupted { inner: Box::new(theta.clone()), at, factor },
    }
}

/// `φ∘θ : F ⇒ H` for `θ : F ⇒ G`, `φ : G ⇒ H`.
pub fn vertical(phi: &MonNatTrans, theta: &MonNatTrans) -> Result<MonNatTrans> {
    if theta.target != phi.source {
        return Err(Error::StructureMismatch("vertical composite: θ's target functor is not φ's source".into()));
    }
    Ok(MonNatTrans {
        source: theta.source.clone(),
        target: phi.target.clone(),
        kind: TransKind::Vertical { outer: Box::new(phi.clone()), inner: Box::new(theta.clone()) },
    })
}

/// `φ∗θ : G₁F₁ ⇒ G₂F₂` for `θ : F₁ ⇒ F₂`, `φ : G₁ ⇒ G₂`.
pub fn horizontal(phi: &MonNatTrans, theta: &MonNatTrans) -> Result<MonNatTrans> {
    if theta.source.target != phi.source.source {
        return Err(Error::StructureMismatch("horizontal composite: θ lands outside φ's source structure".into()));
    }
    Ok(MonNatTrans {
        source: compose_lax(&phi.source, &theta.source)?,
        target: compose_lax(&phi.target, &theta.target)?,
        kind: TransKind::Horizontal { outer: Box::new(phi.clone()), inner: Box::new(theta.clone()) },
    })
}

/// `G θ = Id_G ∗ θ`.
pub fn whisker_left(g: &LaxFunctor, theta: &MonNatTrans) -> Result<MonNatTrans> {
    horizontal(&identity_transformation(g), theta)
}

/// `φ F = φ ∗ Id_F`.
pub fn whisker_right(phi: &MonNatTrans, f: &LaxFunctor) -> Result<MonNatTrans> {
    horizontal(phi, &identity_transformation(f))
}

impl MonNatTrans {
    /// `θ_X : FX → GX`.
    pub fn component(&self, x: &GradedObject) -> Result<GradedMap> {
        let field = self.target.target.field;
        match &self.kind {
            TransKind::Identity => Ok(GradedMap::identity(field, &self.source.obj(x)?)),
            TransKind::Projection(d) => {
                let (fx, gx) = (self.source.obj(x)?, self.target.obj(x)?);
                let blocks: Vec<_> = fx.dims().iter().filter(|(k, _)| *k <= d).map(|(&k, &n)| (k, Matrix::identity(field, n))).collect();
                GradedMap::new(field, fx, gx, blocks)
            }
            TransKind::Scalar(c) => Ok(GradedMap::identity(field, &self.source.obj(x)?).scale(c)),
            TransKind::Tabulated(table) => {
                table.get(x).cloned().ok_or_else(|| Error::Coverage(format!("no component at {x}")))
            }
            TransKind::Vertical { outer, inner } => compose(&outer.component(x)?, &inner.component(x)?),
            TransKind::Horizontal { outer, inner } => {
                compose(&outer.component(&inner.target.obj(x)?)?, &outer.source.map(&inner.component(x)?)?)
            }
            TransKind::Corrupted { inner, at, factor } => {
                let m = inner.component(x)?;
                Ok(if at == x { m.scale(factor) } else { m })
            }
        }
    }

    fn universe(&self) -> &[GradedObject] {
        &self.source.source.universe
    }
}

fn one(objects: &[&GradedObject]) -> Vec<GradedObject> {
    objects.iter().map(|o| (*o).clone()).collect()
}

/// Componentwise equality `a_X = b_X` over `universe`.
fn same_components(axiom: &str, universe: &[GradedObject], a: &MonNatTrans, b: &MonNatTrans, budget: &CheckBudget) -> Result<CheckReport> {
    quantify(axiom, universe, 1, budget, |t| {
        let (l, r) = (a.component(t[0])?, b.component(t[0])?);
        component_witness(t, l, r)
    })
}

fn component_witness(t: &[&GradedObject], l: GradedMap, r: GradedMap) -> Result<(usize, Option<Witness>)> {
    if l.source() != r.source() || l.target() != r.target() {
        let note = format!("components have types {} -> {} and {} -> {}", l.source(), l.target(), r.source(), r.target());
        return Ok((0, Some(Witness::note(one(t), vec![], note))));
    }
    let factor = l.source().clone();
    Ok((0, compare_at(&one(t), &[factor], Some(&Word::leaf(0)), l, r)?))
}

/// `μ^G_0 = θ_I∘μ^F_0`, then `μ^G_{X,Y}∘(θ_X⊗θ_Y) = θ_{X⊗Y}∘μ^F_{X,Y}` on universe pairs.
pub fn check_monoidal(theta: &MonNatTrans, budget: &CheckBudget) -> Result<CheckReport> {
    let (f, g) = (&theta.source, &theta.target);
    let unit = f.source.unit();
    sequence(
        "monoidal",
        vec![
            Box::new(|| {
                let lhs = g.mu0()?;
                let rhs = compose(&theta.component(&unit)?, &f.mu0()?)?;
                let w = compare_at(std::slice::from_ref(&unit), &[g.target.unit()], Some(&Word::leaf(0)), lhs, rhs)?;
                let coverage = Coverage { object_tuples: 1, available_tuples: 1, ..Coverage::default() };
                Ok(match w {
                    None => CheckReport::pass("monoidal", coverage),
                    Some(w) => CheckReport::fail("monoidal", coverage, w.with_note("unit axiom")),
                })
            }),
            Box::new(|| {
                quantify("monoidal", theta.universe(), 2, budget, |t| {
                    let (x, y) = (t[0], t[1]);
                    let lhs = compose(&g.mu(x, y)?, &tensor_map(&theta.component(x)?, &theta.component(y)?)?)?;
                    let rhs = compose(&theta.component(&tensor_obj(x, y)?)?, &f.mu(x, y)?)?;
                    let factors = [f.obj(x)?, f.obj(y)?];
                    let w = compare_at(&one(t), &factors, Some(&Word::pair(0, 1)), lhs, rhs)?;
                    Ok((0, w.map(|w| w.with_note("tensor axiom"))))
                })
            }),
        ],
    )
}

/// `θ_Z∘F(Λ_Z) = G(Λ_Z)∘θ_Z` on universe objects.
pub fn check_lambda_conjugation(theta: &MonNatTrans, budget: &CheckBudget) -> Result<CheckReport> {
    let (f, g) = (&theta.source, &theta.target);
    quantify("lambda_conjugation", theta.universe(), 1, budget, |t| {
        let lz = f.source.lambda.at(t[0])?;
        let c = theta.component(t[0])?;
        let lhs = compose(&c, &f.map(&lz)?)?;
        let rhs = compose(&g.map(&lz)?, &c)?;
        component_witness(t, lhs, rhs)
    })
}

/// `θ_{X'}∘F(f) = G(f)∘θ_X` on sampled `f : X → X'`.
pub fn check_naturality(theta: &MonNatTrans, budget: &CheckBudget) -> Result<CheckReport> {
    let (f, g) = (&theta.source, &theta.target);
    let field = f.source.field;
    let n = budget.sample_maps.max(1);
    quantify("naturality", theta.universe(), 2, budget, |t| {
        let (x, x2) = (t[0], t[1]);
        let (cx, cx2) = (theta.component(x)?, theta.component(x2)?);
        for (k, m) in SampleStream::for_role(budget.seed, "theta.f", &[x, x2]).maps(field, x, x2, n).into_iter().enumerate() {
            let lhs = compose(&cx2, &f.map(&m)?)?;
            let rhs = compose(&g.map(&m)?, &cx)?;
            let (_, w) = component_witness(&t[..1], lhs, rhs)?;
            if let Some(w) = w {
                let w = Witness { objects: one(t), ..w };
                return Ok((k + 1, Some(w.with_inputs(vec![m]))));
            }
        }
        Ok((n, None))
    })
}

/// The two formulas for `φ∗θ` agree: `φ_{F₂X}∘G₁(θ_X) = G₂(θ_X)∘φ_{F₁X}`.
pub fn check_horizontal_well_defined(phi: &MonNatTrans, theta: &MonNatTrans, budget: &CheckBudget) -> Result<CheckReport> {
    let both = horizontal(phi, theta)?;
    quantify("horizontal_well_defined", theta.universe(), 1, budget, |t| {
        let x = t[0];
        let lhs = both.component(x)?;
        let tx = theta.component(x)?;
        let rhs = compose(&phi.target.map(&tx)?, &phi.component(&theta.source.obj(x)?)?)?;
        component_witness(t, lhs, rhs)
    })
}

/// `(ψ∘φ)∗(θ∘η) = (ψ∗θ)∘(φ∗η)` componentwise.
pub fn check_interchange(
    eta: &MonNatTrans,
    theta: &MonNatTrans,
    phi: &MonNatTrans,
    psi: &MonNatTrans,
    budget: &CheckBudget,
) -> Result<CheckReport> {
    let lhs = horizontal(&vertical(psi, phi)?, &vertical(theta, eta)?)?;
    let rhs = vertical(&horizontal(psi, theta)?, &horizontal(phi, eta)?)?;
    same_components("interchange", eta.universe(), &lhs, &rhs, budget)
}

/// A horizontally composable chain `outer ∗ middle ∗ inner`.
#[derive(Clone, Debug)]
pub struct HorizontalChain {
    pub outer: MonNatTrans,
    pub middle: MonNatTrans,
    pub inner: MonNatTrans,
}

/// For each chain: `(χ∗φ)∗θ = χ∗(φ∗θ)`, `Id∗θ = θ = θ∗Id` for each 2-cell,
/// `Id_G∗θ = G(θ)` and `φ∗Id_F = φ_F`, all componentwise.
pub fn check_horizontal_strictness(catalog: &[HorizontalChain], budget: &CheckBudget) -> Result<CheckReport> {
    let axiom = "horizontal_strictness";
    let mut parts: Vec<Box<dyn FnOnce() -> Result<CheckReport> + '_>> = Vec::new();
    for chain in catalog {
        let HorizontalChain { outer: chi, middle: phi, inner: theta } = chain;
        let left = horizontal(&horizontal(chi, phi)?, theta)?;
        let right = horizontal(chi, &horizontal(phi, theta)?)?;
        let u = theta.universe();
        parts.push(Box::new(move || same_components(axiom, u, &left, &right, budget)));
        for cell in [chi, phi, theta] {
            let id_out = identity_transformation(&identity_functor(cell.source.target.clone()));
            let id_in = identity_transformation(&identity_functor(cell.source.source.clone()));
            let (l, r) = (horizontal(&id_out, cell)?, horizontal(cell, &id_in)?);
            let u = cell.universe();
            parts.push(Box::new(move || same_components(axiom, u, &l, cell, budget)));
            parts.push(Box::new(move || same_components(axiom, u, &r, cell, budget)));
        }
        for (g, cell) in [(&phi.source, theta), (&chi.source, phi)] {
            let whiskered = whisker_left(g, cell)?;
            parts.push(Box::new(move || {
                quantify(axiom, cell.universe(), 1, budget, |t| {
                    component_witness(t, whiskered.component(t[0])?, g.map(&cell.component(t[0])?)?)
                })
            }));
        }
        for (cell, f) in [(phi, &theta.source), (chi, &phi.source)] {
            let whiskered = whisker_right(cell, f)?;
            parts.push(Box::new(move || {
                quantify(axiom, f.source.universe.as_slice(), 1, budget, |t| {
                    component_witness(t, whiskered.component(t[0])?, cell.component(&f.obj(t[0])?)?)
                })
            }));
        }
    }
    sequence(axiom, parts)
}
