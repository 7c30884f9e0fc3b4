//! Idempotent families `e`, the twist `σ = β∘e`, and the axioms on `e` that
//! make the twist a distortion.

use std::fmt;
use std::str::FromStr;

use crate::distortion::checks::STRUCTURAL_NOTE;
use crate::distortion::families::{check_pair_type, missing, BinaryFamily, PairScalars, PairTable};
use crate::error::{Error, Result};
use crate::exactlin::coherence::{associator, associator_inv};
use crate::exactlin::graded::{compose, compose_all, tensor_map, tensor_obj, Degree, GradedMap, GradedObject, Grading};
use crate::exactlin::scalar::{Field, Scalar};
use crate::exactlin::word::{relabel, Word};
use crate::harness::sampler::SampleStream;
use crate::report::{compare, quantify, CheckBudget, CheckReport, Coverage, Witness};
use crate::route::{first_violation, reconcile};

/// A family of endomorphisms `e_{X,Y}` of `X⊗Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdempotentFamily {
    /// Acts on the summand `X_i⊗Y_j` by `c(i,j)·Id`.
    Structural(PairScalars),
    Tabulated(PairTable),
}

impl IdempotentFamily {
    /// Rejects scalars other than 0 and 1, the only idempotent scalars.
    pub fn structural(scalars: PairScalars) -> Result<Self> {
        if let Some(bad) = scalars.values().find(|s| !s.is_zero() && !s.is_one()) {
            return Err(Error::NotIdempotent(bad.to_string()));
        }
        Ok(IdempotentFamily::Structural(scalars))
    }

    pub fn identity(field: Field) -> Self {
        IdempotentFamily::Structural(PairScalars::constant(field.one()))
    }

    /// Identity on all parity summands except `X₁⊗Y₁`, where it is zero.
    pub fn parity_projector(field: Field) -> Self {
        IdempotentFamily::Structural(PairScalars::constant(field.one()).with(1, 1, field.zero()))
    }

    pub fn tabulated(entries: impl IntoIterator<Item = ((GradedObject, GradedObject), GradedMap)>) -> Result<Self> {
        let mut table = PairTable::new();
        for ((x, y), m) in entries {
            check_pair_type(&x, &y, &m, false)?;
            table.insert((x, y), m);
        }
        Ok(IdempotentFamily::Tabulated(table))
    }

    pub fn is_structural(&self) -> bool {
        matches!(self, IdempotentFamily::Structural(_))
    }

    pub fn field(&self) -> Option<Field> {
        match self {
            IdempotentFamily::Structural(s) => Some(s.field()),
            IdempotentFamily::Tabulated(t) => t.values().next().map(GradedMap::field),
        }
    }

    pub fn scalar(&self, i: Degree, j: Degree) -> Option<Scalar> {
        match self {
            IdempotentFamily::Structural(s) => Some(s.get(i, j)),
            IdempotentFamily::Tabulated(_) => None,
        }
    }

    /// `e_{X,Y}`.
    pub fn at(&self, x: &GradedObject, y: &GradedObject) -> Result<GradedMap> {
        match self {
            IdempotentFamily::Structural(s) => {
                let w = Word::pair(0, 1);
                relabel(s.field(), &[x.clone(), y.clone()], &w, &w, |l| s.get(l[0].0, l[1].0))
            }
            IdempotentFamily::Tabulated(t) => {
                t.get(&(x.clone(), y.clone())).cloned().ok_or_else(|| missing("e", &[x, y]))
            }
        }
    }

    pub fn tabulate<'a>(&self, pairs: impl IntoIterator<Item = (&'a GradedObject, &'a GradedObject)>) -> Result<Self> {
        let mut table = PairTable::new();
        for (x, y) in pairs {
            table.insert((x.clone(), y.clone()), self.at(x, y)?);
        }
        Ok(IdempotentFamily::Tabulated(table))
    }
}

/// The axioms an idempotent family is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdempotentAxiom {
    E0,
    E1,
    E2L,
    E2R,
    E2LCocycle,
    E2RCocycle,
    BL,
    BR,
}

impl IdempotentAxiom {
    pub const ALL: [IdempotentAxiom; 8] = [
        IdempotentAxiom::E0,
        IdempotentAxiom::E1,
        IdempotentAxiom::E2L,
        IdempotentAxiom::E2R,
        IdempotentAxiom::E2LCocycle,
        IdempotentAxiom::E2RCocycle,
        IdempotentAxiom::BL,
        IdempotentAxiom::BR,
    ];

    pub fn id(self) -> &'static str {
        match self {
            IdempotentAxiom::E0 => "E0",
            IdempotentAxiom::E1 => "E1",
            IdempotentAxiom::E2L => "E2L",
            IdempotentAxiom::E2R => "E2R",
            IdempotentAxiom::E2LCocycle => "E2L_cocycle",
            IdempotentAxiom::E2RCocycle => "E2R_cocycle",
            IdempotentAxiom::BL => "BL",
            IdempotentAxiom::BR => "BR",
        }
    }

    pub fn needs_braiding(self) -> bool {
        matches!(self, IdempotentAxiom::BL | IdempotentAxiom::BR)
    }

    /// Whether the axiom quantifies over triples (and so needs σ at tensor composites).
    pub fn is_ternary(self) -> bool {
        !matches!(self, IdempotentAxiom::E0 | IdempotentAxiom::E1)
    }
}

impl fmt::Display for IdempotentAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for IdempotentAxiom {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdempotentAxiom::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown idempotent axiom {s:?}")))
    }
}

struct Ctx<'a> {
    e: &'a IdempotentFamily,
    beta: Option<&'a BinaryFamily>,
    field: Field,
}

impl Ctx<'_> {
    fn id(&self, x: &GradedObject) -> GradedMap {
        GradedMap::identity(self.field, x)
    }

    fn beta(&self) -> Result<&BinaryFamily> {
        self.beta.ok_or_else(|| Error::InvalidArgument("sliding axioms need a braiding β".into()))
    }

    /// Both sides of a ternary axiom and the word of their common source.
    fn sides(&self, axiom: IdempotentAxiom, x: &GradedObject, y: &GradedObject, z: &GradedObject) -> Result<(GradedMap, GradedMap, Word)> {
        use IdempotentAxiom::*;
        let e = self.e;
        let (xy, yz) = (tensor_obj(x, y)?, tensor_obj(y, z)?);
        let f = self.field;
        Ok(match axiom {
            E2L => (
                compose(&associator(f, x, y, z)?, &e.at(&xy, z)?)?,
                compose_all(&[&tensor_map(&self.id(x), &e.at(y, z)?)?, &e.at(x, &yz)?, &associator(f, x, y, z)?])?,
                Word::left(0, 1, 2),
            ),
            E2R => (
                compose(&associator_inv(f, x, y, z)?, &e.at(x, &yz)?)?,
                compose_all(&[&tensor_map(&e.at(x, y)?, &self.id(z))?, &e.at(&xy, z)?, &associator_inv(f, x, y, z)?])?,
                Word::right(0, 1, 2),
            ),
            E2LCocycle => (
                compose_all(&[&associator(f, x, y, z)?, &e.at(&xy, z)?, &tensor_map(&e.at(x, y)?, &self.id(z))?])?,
                compose_all(&[&tensor_map(&self.id(x), &e.at(y, z)?)?, &e.at(x, &yz)?, &associator(f, x, y, z)?])?,
                Word::left(0, 1, 2),
            ),
            E2RCocycle => (
                compose_all(&[&associator_inv(f, x, y, z)?, &tensor_map(&self.id(x), &e.at(y, z)?)?, &e.at(x, &yz)?])?,
                compose_all(&[&e.at(&xy, z)?, &tensor_map(&e.at(x, y)?, &self.id(z))?, &associator_inv(f, x, y, z)?])?,
                Word::right(0, 1, 2),
            ),
            BL => {
                let b = self.beta()?;
                let id_b = tensor_map(&self.id(x), &b.at(y, z)?)?;
                let id_e = tensor_map(&self.id(x), &e.at(y, z)?)?;
                let a_inv = associator_inv(f, x, z, y)?;
                (
                    compose_all(&[&a_inv, &id_b, &id_e, &e.at(x, &yz)?])?,
                    compose_all(&[&tensor_map(&e.at(x, z)?, &self.id(y))?, &a_inv, &id_b, &id_e])?,
                    Word::right(0, 1, 2),
                )
            }
            BR => {
                let b = self.beta()?;
                let a = associator(f, y, x, z)?;
                let b_id = tensor_map(&b.at(x, y)?, &self.id(z))?;
                let e_id = tensor_map(&e.at(x, y)?, &self.id(z))?;
                (
                    compose_all(&[&a, &b_id, &e_id, &e.at(&xy, z)?])?,
                    compose_all(&[&tensor_map(&self.id(y), &e.at(x, z)?)?, &a, &b_id, &e_id])?,
                    Word::left(0, 1, 2),
                )
            }
            E0 | E1 => unreachable!("binary axioms"),
        })
    }

    /// The scalar form of a ternary axiom at degrees `(a, b, c)`.
    fn scalar_holds(&self, axiom: IdempotentAxiom, grading: Grading, d: &[Degree]) -> bool {
        use IdempotentAxiom::*;
        let e = |i, j| self.e.scalar(i, j).expect("structural");
        let b = |i, j| self.beta.and_then(|b| b.scalar(i, j)).expect("structural braiding");
        let add = |i, j| grading.add(i, j);
        let (a, bb, c) = (d[0], d[1], d[2]);
        let prod = |xs: &[Scalar]| xs.iter().skip(1).fold(xs[0].clone(), |acc, s| &acc * s);
        match axiom {
            E2L => e(add(a, bb), c) == prod(&[e(bb, c), e(a, add(bb, c))]),
            E2R => e(a, add(bb, c)) == prod(&[e(a, bb), e(add(a, bb), c)]),
            E2LCocycle | E2RCocycle => prod(&[e(add(a, bb), c), e(a, bb)]) == prod(&[e(bb, c), e(a, add(bb, c))]),
            BL => prod(&[e(a, add(bb, c)), e(bb, c), b(bb, c)]) == prod(&[e(bb, c), b(bb, c), e(a, c)]),
            BR => prod(&[e(add(a, bb), c), e(a, bb), b(a, bb)]) == prod(&[e(a, bb), b(a, bb), e(a, c)]),
            E0 | E1 => unreachable!("binary axioms"),
        }
    }

    fn scalar_route(&self, axiom: IdempotentAxiom) -> bool {
        self.e.is_structural() && (!axiom.needs_braiding() || self.beta.is_some_and(BinaryFamily::is_structural))
    }
}

/// Replays one instance of `axiom` at a tuple (a pair for E0/E1, a triple otherwise).
pub fn idempotent_axiom_at(
    e: &IdempotentFamily,
    beta: Option<&BinaryFamily>,
    axiom: IdempotentAxiom,
    objs: &[&GradedObject],
) -> Result<Option<Witness>> {
    let field = e.field().ok_or_else(|| Error::InvalidArgument("empty idempotent table".into()))?;
    let ctx = Ctx { e, beta, field };
    match axiom {
        IdempotentAxiom::E0 => {
            let (x, y) = (objs[0], objs[1]);
            let m = e.at(x, y)?;
            let w = compare(&[x.clone(), y.clone()], Some(&Word::pair(0, 1)), compose(&m, &m)?, m)?;
            Ok(w.map(|w| w.with_note("e∘e ≠ e")))
        }
        IdempotentAxiom::E1 => {
            let x = objs[0];
            let unit = GradedObject::unit(x.grading());
            for (a, b, note) in [(x, &unit, "e_{X,I} ≠ Id"), (&unit, x, "e_{I,X} ≠ Id")] {
                let m = e.at(a, b)?;
                let id = GradedMap::identity(field, m.source());
                if let Some(w) = compare(&[a.clone(), b.clone()], Some(&Word::pair(0, 1)), m, id)? {
                    return Ok(Some(w.with_note(note)));
                }
            }
            Ok(None)
        }
        _ => {
            let (lhs, rhs, word) = ctx.sides(axiom, objs[0], objs[1], objs[2])?;
            let objects = [objs[0].clone(), objs[1].clone(), objs[2].clone()];
            compare(&objects, Some(&word), lhs, rhs)
        }
    }
}

/// `(f⊗g)∘e_{X,Y} = e_{X',Y'}∘(f⊗g)` for sampled `f : X → X'`, `g : Y → Y'`.
fn e_binatural_at(e: &IdempotentFamily, field: Field, t: &[&GradedObject], budget: &CheckBudget) -> Result<(usize, Option<Witness>)> {
    let [x, y, x2, y2] = [t[0], t[1], t[2], t[3]];
    let n = budget.sample_maps.max(1);
    let fs = SampleStream::for_role(budget.seed, "E0.f", &[x, x2]).maps(field, x, x2, n);
    let gs = SampleStream::for_role(budget.seed, "E0.g", &[y, y2]).maps(field, y, y2, n);
    let (m, m2) = (e.at(x, y)?, e.at(x2, y2)?);
    let objects = vec![x.clone(), y.clone(), x2.clone(), y2.clone()];
    for (k, (f, g)) in fs.iter().zip(&gs).enumerate() {
        let fg = tensor_map(f, g)?;
        if let Some(w) = compare(&objects, Some(&Word::pair(0, 1)), compose(&fg, &m)?, compose(&m2, &fg)?)? {
            return Ok((k + 1, Some(w.with_inputs(vec![f.clone(), g.clone()]).with_note("e is not binatural"))));
        }
    }
    Ok((n, None))
}

/// Checks one axiom on `e` over the universe: pairs for E0/E1, triples otherwise.
/// `beta` is required for BL/BR.
pub fn check_idempotent_axiom(
    e: &IdempotentFamily,
    beta: Option<&BinaryFamily>,
    axiom: IdempotentAxiom,
    universe: &[GradedObject],
    budget: &CheckBudget,
) -> Result<CheckReport> {
    let field = e.field().ok_or_else(|| Error::InvalidArgument("empty idempotent table".into()))?;
    if axiom.needs_braiding() && beta.is_none() {
        return Err(Error::InvalidArgument(format!("{axiom} needs a braiding β")));
    }
    let ctx = Ctx { e, beta, field };
    let name = axiom.id();
    match axiom {
        IdempotentAxiom::E0 => {
            let idem = quantify(name, universe, 2, budget, |t| {
                let w = idempotent_axiom_at(e, beta, axiom, t)?;
                if e.is_structural() {
                    let holds = |d: &[Degree]| {
                        let c = e.scalar(d[0], d[1]).expect("structural");
                        &c * &c == c
                    };
                    reconcile(name, w.as_ref(), first_violation(t, holds).as_deref(), holds)?;
                }
                Ok((0, w))
            })?;
            if !idem.passed() || e.is_structural() {
                return Ok(if e.is_structural() { idem.with_note(STRUCTURAL_NOTE) } else { idem });
            }
            let nat = quantify(name, universe, 4, budget, |t| e_binatural_at(e, field, t, budget))?;
            let coverage = Coverage {
                object_tuples: idem.coverage.object_tuples + nat.coverage.object_tuples,
                available_tuples: idem.coverage.available_tuples + nat.coverage.available_tuples,
                sampled_maps: nat.coverage.sampled_maps,
                notes: vec!["idempotency on pairs, binaturality on sampled 4-tuples".into()],
            };
            Ok(CheckReport { coverage, ..nat })
        }
        IdempotentAxiom::E1 => quantify(name, universe, 1, budget, |t| {
            let w = idempotent_axiom_at(e, beta, axiom, t)?;
            if e.is_structural() {
                let unit = GradedObject::unit(t[0].grading());
                let holds = |d: &[Degree]| e.scalar(d[0], d[1]).expect("structural").is_one();
                let fail = first_violation(&[t[0], &unit], holds).or_else(|| first_violation(&[&unit, t[0]], holds));
                reconcile(name, w.as_ref(), fail.as_deref(), holds)?;
            }
            Ok((0, w))
        }),
        _ => quantify(name, universe, 3, budget, |t| {
            let w = idempotent_axiom_at(e, beta, axiom, t)?;
            if ctx.scalar_route(axiom) {
                let grading = t[0].grading();
                let holds = |d: &[Degree]| ctx.scalar_holds(axiom, grading, d);
                reconcile(name, w.as_ref(), first_violation(t, holds).as_deref(), holds)?;
            }
            Ok((0, w))
        }),
    }
}

/// `σ := β∘e`. Structural when both inputs are; otherwise tabulated on the
/// pairs of whichever input is tabulated.
pub fn twist(beta: &BinaryFamily, e: &IdempotentFamily) -> Result<BinaryFamily> {
    if let (Some(a), Some(b)) = (beta.field(), e.field()) {
        if a != b {
            return Err(Error::InvalidField(format!("β over {a}, e over {b}")));
        }
    }
    match (beta, e) {
        (BinaryFamily::Structural { scalars, sign }, IdempotentFamily::Structural(c)) => {
            Ok(BinaryFamily::Structural { scalars: scalars.product(c), sign: *sign })
        }
        _ => {
            let pairs: Vec<(GradedObject, GradedObject)> = match (e, beta) {
                (IdempotentFamily::Tabulated(t), _) | (_, BinaryFamily::Tabulated(t)) => t.keys().cloned().collect(),
                _ => unreachable!("structural pair handled above"),
            };
            let mut table = PairTable::new();
            for (x, y) in pairs {
                let m = compose(&beta.at(&x, &y)?, &e.at(&x, &y)?)?;
                table.insert((x, y), m);
            }
            Ok(BinaryFamily::Tabulated(table))
        }
    }
}

/// Either kind of family whose components can be tested for invertibility.
#[derive(Clone, Copy, Debug)]
pub enum FamilyRef<'a> {
    Binary(&'a BinaryFamily),
    Idempotent(&'a IdempotentFamily),
}

impl FamilyRef<'_> {
    fn at(&self, x: &GradedObject, y: &GradedObject) -> Result<GradedMap> {
        match self {
            FamilyRef::Binary(b) => b.at(x, y),
            FamilyRef::Idempotent(e) => e.at(x, y),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairInvertibility {
    pub x: GradedObject,
    pub y: GradedObject,
    /// First degree whose block is not square of full rank.
    pub singular_degree: Option<Degree>,
    /// `(rank, rows, cols)` of that block.
    pub singular_block: Option<(usize, usize, usize)>,
}

impl PairInvertibility {
    pub fn invertible(&self) -> bool {
        self.singular_degree.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvertibilityReport {
    pub pairs: Vec<PairInvertibility>,
}

impl InvertibilityReport {
    pub fn invertible_everywhere(&self) -> bool {
        self.pairs.iter().all(PairInvertibility::invertible)
    }

    pub fn witness(&self) -> Option<&PairInvertibility> {
        self.pairs.iter().find(|p| !p.invertible())
    }

    /// As a check report: pass iff invertible on every pair.
    pub fn to_check_report(&self, axiom: &str) -> CheckReport {
        let coverage = Coverage {
            object_tuples: self.pairs.len(),
            available_tuples: self.pairs.len(),
            sampled_maps: 0,
            notes: Vec::new(),
        };
        match self.witness() {
            None => CheckReport::pass(axiom, coverage),
            Some(p) => {
                let d = p.singular_degree.expect("singular pair");
                let (rank, rows, cols) = p.singular_block.expect("singular pair");
                let note = format!("block at degree {d} is {rows}x{cols} of rank {rank}");
                CheckReport::fail(axiom, coverage, Witness::note(vec![p.x.clone(), p.y.clone()], vec![d], note))
            }
        }
    }
}

/// Exact invertibility of every component on universe pairs: each degree block
/// must be square and of full rank.
pub fn invertibility_test(family: FamilyRef<'_>, universe: &[GradedObject]) -> Result<InvertibilityReport> {
    let mut pairs = Vec::new();
    for x in universe {
        for y in universe {
            let m = family.at(x, y)?;
            let mut singular = None;
            let degrees: std::collections::BTreeSet<Degree> = m.source().degrees().chain(m.target().degrees()).collect();
            for d in degrees {
                let (rows, cols) = (m.target().dim(d), m.source().dim(d));
                let rank = m.block(d).map_or(0, |b| b.rank());
                if rows != cols || rank < rows {
                    singular = Some((d, (rank, rows, cols)));
                    break;
                }
            }
            pairs.push(PairInvertibility {
                x: x.clone(),
                y: y.clone(),
                singular_degree: singular.map(|s| s.0),
                singular_block: singular.map(|s| s.1),
            });
        }
    }
    Ok(InvertibilityReport { pairs })
}

/// One normalized structural parity idempotent and its verdict on every axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchRow {
    pub c11: Scalar,
    pub family: IdempotentFamily,
    pub reports: Vec<CheckReport>,
}

impl SearchRow {
    pub fn passes(&self, axiom: IdempotentAxiom) -> bool {
        self.reports.iter().any(|r| r.axiom == axiom.id() && r.passed())
    }
}

/// Enumerates the normalized structural idempotents on parity-graded spaces
/// (`c(i,0) = c(0,j) = 1`, `c(1,1) ∈ {0, 1}`) and checks every axiom on each.
pub fn search_structural_idempotents(
    grading: Grading,
    beta: &BinaryFamily,
    field: Field,
    universe: &[GradedObject],
    budget: &CheckBudget,
) -> Result<Vec<SearchRow>> {
    if grading != Grading::Parity {
        return Err(Error::InvalidArgument(format!("the structural search is parity-only, got {grading}")));
    }
    let mut rows = Vec::new();
    for c11 in [field.zero(), field.one()] {
        let family = IdempotentFamily::structural(PairScalars::constant(field.one()).with(1, 1, c11.clone()))?;
        let reports = IdempotentAxiom::ALL
            .into_iter()
            .map(|a| check_idempotent_axiom(&family, Some(beta), a, universe, budget))
            .collect::<Result<Vec<_>>>()?;
        rows.push(SearchRow { c11, family, reports });
    }
    Ok(rows)
}
