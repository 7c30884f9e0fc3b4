//! The distortion data σ and Λ.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::graded::{Degree, GradedMap, GradedObject, Grading};
use crate::exactlin::scalar::{Field, Scalar};
use crate::exactlin::word::{relabel, Word};

/// A scalar per degree pair: a default plus finitely many overrides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairScalars {
    default: Scalar,
    overrides: BTreeMap<(Degree, Degree), Scalar>,
}

impl PairScalars {
    pub fn constant(value: Scalar) -> Self {
        PairScalars { default: value, overrides: BTreeMap::new() }
    }

    pub fn with(mut self, i: Degree, j: Degree, value: Scalar) -> Self {
        assert_eq!(value.field(), self.default.field(), "override from a different field");
        if value == self.default {
            self.overrides.remove(&(i, j));
        } else {
            self.overrides.insert((i, j), value);
        }
        self
    }

    pub fn get(&self, i: Degree, j: Degree) -> Scalar {
        self.overrides.get(&(i, j)).unwrap_or(&self.default).clone()
    }

    pub fn field(&self) -> Field {
        self.default.field()
    }

    pub fn default_value(&self) -> &Scalar {
        &self.default
    }

    pub fn overrides(&self) -> &BTreeMap<(Degree, Degree), Scalar> {
        &self.overrides
    }

    /// Every scalar the table can take.
    pub fn values(&self) -> impl Iterator<Item = &Scalar> {
        std::iter::once(&self.default).chain(self.overrides.values())
    }

    /// Pointwise product.
    pub fn product(&self, other: &PairScalars) -> PairScalars {
        let mut out = PairScalars::constant(&self.default * &other.default);
        let keys: std::collections::BTreeSet<_> = self.overrides.keys().chain(other.overrides.keys()).collect();
        for &(i, j) in keys {
            out = out.with(i, j, &self.get(i, j) * &other.get(i, j));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignRule {
    None,
    /// `(−1)^{ij}`; only defined on parity-graded objects.
    Koszul,
}

/// Components indexed by object pairs.
pub type PairTable = BTreeMap<(GradedObject, GradedObject), GradedMap>;

/// A family of maps `σ_{X,Y} : X⊗Y → Y⊗X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinaryFamily {
    /// Flips each summand `X_i⊗Y_j` onto `Y_j⊗X_i`, scaled by `c(i,j)` and the sign rule.
    Structural { scalars: PairScalars, sign: SignRule },
    Tabulated(PairTable),
}

pub(crate) fn missing(what: &str, objects: &[&GradedObject]) -> Error {
    let list: Vec<String> = objects.iter().map(|o| o.to_string()).collect();
    Error::Coverage(format!("{what} has no component at ({})", list.join(", ")))
}

impl BinaryFamily {
    /// `c ≡ 1`, no sign.
    pub fn symmetric(field: Field) -> Self {
        BinaryFamily::Structural { scalars: PairScalars::constant(field.one()), sign: SignRule::None }
    }

    /// `c ≡ 1` with the Koszul sign.
    pub fn koszul(field: Field) -> Self {
        BinaryFamily::Structural { scalars: PairScalars::constant(field.one()), sign: SignRule::Koszul }
    }

    /// A table of maps, each validated to have type `X⊗Y → Y⊗X`.
    pub fn tabulated(entries: impl IntoIterator<Item = ((GradedObject, GradedObject), GradedMap)>) -> Result<Self> {
        let mut table = PairTable::new();
        for ((x, y), m) in entries {
            check_pair_type(&x, &y, &m, true)?;
            table.insert((x, y), m);
        }
        Ok(BinaryFamily::Tabulated(table))
    }

    pub fn is_structural(&self) -> bool {
        matches!(self, BinaryFamily::Structural { .. })
    }

    pub fn field(&self) -> Option<Field> {
        match self {
            BinaryFamily::Structural { scalars, .. } => Some(scalars.field()),
            BinaryFamily::Tabulated(t) => t.values().next().map(GradedMap::field),
        }
    }

    /// The effective scalar `c(i,j)·sign(i,j)` of a structural family.
    pub fn scalar(&self, i: Degree, j: Degree) -> Option<Scalar> {
        match self {
            BinaryFamily::Structural { scalars, sign } => {
                let c = scalars.get(i, j);
                Some(match sign {
                    SignRule::Koszul if i * j % 2 == 1 => -c,
                    _ => c,
                })
            }
            BinaryFamily::Tabulated(_) => None,
        }
    }

    /// `σ_{X,Y}`.
    pub fn at(&self, x: &GradedObject, y: &GradedObject) -> Result<GradedMap> {
        match self {
            BinaryFamily::Structural { scalars, sign } => {
                if *sign == SignRule::Koszul {
                    for o in [x, y] {
                        if o.grading() != Grading::Parity {
                            return Err(Error::MonoidMismatch(format!(
                                "Koszul sign needs parity grading, got {}",
                                o.grading()
                            )));
                        }
                    }
                }
                let field = scalars.field();
                relabel(field, &[x.clone(), y.clone()], &Word::pair(0, 1), &Word::pair(1, 0), |l| {
                    self.scalar(l[0].0, l[1].0).expect("structural")
                })
            }
            BinaryFamily::Tabulated(t) => {
                t.get(&(x.clone(), y.clone())).cloned().ok_or_else(|| missing("σ", &[x, y]))
            }
        }
    }

    /// Materializes the family on the given pairs.
    pub fn tabulate<'a>(&self, pairs: impl IntoIterator<Item = (&'a GradedObject, &'a GradedObject)>) -> Result<Self> {
        let mut table = PairTable::new();
        for (x, y) in pairs {
            table.insert((x.clone(), y.clone()), self.at(x, y)?);
        }
        Ok(BinaryFamily::Tabulated(table))
    }
}

/// Validates `m : X⊗Y → Y⊗X` (flip) or `m : X⊗Y → X⊗Y` (endomorphism).
pub(crate) fn check_pair_type(x: &GradedObject, y: &GradedObject, m: &GradedMap, flip: bool) -> Result<()> {
    use crate::exactlin::graded::tensor_obj;
    let source = tensor_obj(x, y)?;
    let target = if flip { tensor_obj(y, x)? } else { source.clone() };
    if *m.source() != source || *m.target() != target {
        return Err(Error::ObjectMismatch {
            expected: format!("{source} -> {target}"),
            found: format!("{} -> {}", m.source(), m.target()),
        });
    }
    Ok(())
}

/// A family of endomorphisms `Λ_X : X → X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitFamily {
    /// `a(m) = t^m`.
    Character(Scalar),
    /// `a(m)` from the table, zero beyond it.
    Table(Vec<Scalar>),
    Tabulated(BTreeMap<GradedObject, GradedMap>),
}

impl UnitFamily {
    pub fn identity(field: Field) -> Self {
        UnitFamily::Character(field.one())
    }

    /// `Λ^{(t)}`: multiplication by `t^n` on degree `n`.
    pub fn graded_character(t: Scalar) -> Self {
        UnitFamily::Character(t)
    }

    /// Degreewise scalars `a(0), a(1), …`, zero beyond the table. Requires `a(0) = 1`.
    pub fn character_family(values: Vec<Scalar>) -> Result<Self> {
        match values.first() {
            Some(a0) if a0.is_one() => Ok(UnitFamily::Table(values)),
            Some(a0) => Err(Error::BadUnitScalar(a0.to_string())),
            None => Err(Error::BadUnitScalar("empty table".into())),
        }
    }

    pub fn is_structural(&self) -> bool {
        !matches!(self, UnitFamily::Tabulated(_))
    }

    pub fn field(&self) -> Option<Field> {
        match self {
            UnitFamily::Character(t) => Some(t.field()),
            UnitFamily::Table(v) => v.first().map(Scalar::field),
            UnitFamily::Tabulated(t) => t.values().next().map(GradedMap::field),
        }
    }

    /// `a(m)` of a structural family.
    pub fn scalar(&self, m: Degree) -> Option<Scalar> {
        match self {
            UnitFamily::Character(t) => Some(t.pow(m)),
            UnitFamily::Table(v) => {
                let field = v.first().map(Scalar::field)?;
                Some(v.get(m as usize).cloned().unwrap_or_else(|| field.zero()))
            }
            UnitFamily::Tabulated(_) => None,
        }
    }

    /// `Λ_X`.
    pub fn at(&self, x: &GradedObject) -> Result<GradedMap> {
        match self {
            UnitFamily::Tabulated(t) => t.get(x).cloned().ok_or_else(|| missing("Λ", &[x])),
            UnitFamily::Table(v) if v.is_empty() => Err(Error::BadUnitScalar("empty table".into())),
            _ => {
                let field = self.field().expect("structural family has a field");
                Ok(GradedMap::diagonal(field, x, |m| self.scalar(m).expect("structural")))
            }
        }
    }
}

/// `(𝒞, ⊗, I, α, λ, ρ, Λ, σ)` on graded vector spaces over one field and grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortedStructure {
    pub field: Field,
    pub grading: Grading,
    pub universe: Vec<GradedObject>,
    pub sigma: BinaryFamily,
    pub lambda: UnitFamily,
}

impl DistortedStructure {
    /// Validates that the universe and families agree on grading and field.
    /// The universe is sorted into canonical order and deduplicated.
    pub fn new(
        field: Field,
        grading: Grading,
        universe: Vec<GradedObject>,
        sigma: BinaryFamily,
        lambda: UnitFamily,
    ) -> Result<Self> {
        let mut universe = universe;
        universe.sort();
        universe.dedup();
        if let Some(o) = universe.iter().find(|o| o.grading() != grading) {
            return Err(Error::MonoidMismatch(format!("universe object {o} is {}-graded, expected {grading}", o.grading())));
        }
        for f in [sigma.field(), lambda.field()].into_iter().flatten() {
            if f != field {
                return Err(Error::InvalidField(format!("family over {f} in a structure over {field}")));
            }
        }
        Ok(DistortedStructure { field, grading, universe, sigma, lambda })
    }

    pub fn unit(&self) -> GradedObject {
        GradedObject::unit(self.grading)
    }

    pub fn with_universe(&self, universe: Vec<GradedObject>) -> Result<Self> {
        DistortedStructure::new(self.field, self.grading, universe, self.sigma.clone(), self.lambda.clone())
    }

    pub fn with_sigma(&self, sigma: BinaryFamily) -> Result<Self> {
        DistortedStructure::new(self.field, self.grading, self.universe.clone(), sigma, self.lambda.clone())
    }

    pub fn with_lambda(&self, lambda: UnitFamily) -> Result<Self> {
        DistortedStructure::new(self.field, self.grading, self.universe.clone(), self.sigma.clone(), lambda)
    }
}
