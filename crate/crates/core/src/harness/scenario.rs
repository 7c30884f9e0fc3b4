//! Scenario documents: parsing, validation, and compilation into runnable checks.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::distortion::{BinaryFamily, DistortedStructure, PairScalars, SignRule, UnitFamily};
use crate::exactlin::graded::{Degree, GradedMap, GradedObject, Grading};
use crate::exactlin::matrix::Matrix;
use crate::exactlin::scalar::{Field, Scalar};
use crate::laxfun::{collapse_functor, compose_lax, identity_functor, truncation_functor, ungraded_structure, LaxFunctor};
use crate::transform::{
    horizontal, identity_transformation, projection_transformation, scalar_transformation, vertical, HorizontalChain,
    MonNatTrans,
};
use crate::twist::{twist, IdempotentAxiom, IdempotentFamily};

use super::universe::{closure, closure_pairs, generate_universe};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid scenario at `{key}`: {message}")]
    Validation { key: String, message: String },
    #[error(transparent)]
    Run(#[from] crate::Error),
}

impl HarnessError {
    fn at(key: impl Into<String>, message: impl std::fmt::Display) -> Self {
        HarnessError::Validation { key: key.into(), message: message.to_string() }
    }

    /// The offending key of a validation error.
    pub fn key(&self) -> Option<&str> {
        match self {
            HarnessError::Validation { key, .. } => Some(key),
            _ => None,
        }
    }
}

type HResult<T> = std::result::Result<T, HarnessError>;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

impl FieldSpec {
    fn build(self) -> crate::Result<Field> {
        match self {
            FieldSpec::Rational => Ok(Field::Rational),
            FieldSpec::Prime(p) => Field::prime(p),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    fn build(&self, field: Field) -> crate::Result<Scalar> {
        match self {
            ScalarText::Int(n) => Ok(Scalar::from_i64(field, *n)),
            ScalarText::Text(s) => Scalar::parse(field, s),
        }
    }
}

/// A degree → dimension table such as `{"0": 1, "1": 2}`.
pub type DimTable = BTreeMap<String, usize>;

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum UniverseSpec {
    Explicit(Vec<DimTable>),
    Generator(GeneratorSpec),
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub max_degree: Degree,
    pub max_dim: usize,
    pub max_support: usize,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ScalarsSpec {
    pub default: ScalarText,
    #[serde(default)]
    pub overrides: Vec<(Degree, Degree, ScalarText)>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SignSpec {
    #[default]
    None,
    Koszul,
}

/// One explicit component: blocks keyed by degree, rows of scalars.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub x: DimTable,
    pub y: DimTable,
    pub blocks: BTreeMap<String, Vec<Vec<ScalarText>>>,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BinarySpec {
    Symmetric,
    Koszul,
    Scalars {
        default: ScalarText,
        #[serde(default)]
        overrides: Vec<(Degree, Degree, ScalarText)>,
        #[serde(default)]
        sign: SignSpec,
    },
    Twist {
        braiding: Box<BinarySpec>,
        idempotent: IdempotentSpec,
    },
    /// Materializes a family as a table over the closure pairs.
    Tabulate(Box<BinarySpec>),
    Table(Vec<PairEntry>),
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum IdempotentSpec {
    Identity,
    ParityProjector,
    Scalars(ScalarsSpec),
    Tabulate(Box<IdempotentSpec>),
    Table(Vec<PairEntry>),
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum UnitSpec {
    Identity,
    Character(ScalarText),
    Table(Vec<ScalarText>),
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctorSpec {
    Identity,
    Truncation(Degree),
    Collapse,
    /// `[outer, inner]`
    Compose(String, String),
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ScalarCellSpec {
    pub functor: String,
    pub value: ScalarText,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TransSpec {
    /// Identity 2-cell on the named functor.
    Identity(String),
    /// `[d_small, d_large]`
    Projection(Degree, Degree),
    Scalar(ScalarCellSpec),
    /// `[outer, inner]`
    Vertical(String, String),
    /// `[outer, inner]`
    Horizontal(String, String),
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FamilyChoice {
    Sigma,
    Braiding,
    Idempotent,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub axiom: String,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub field: Option<FieldSpec>,
    #[serde(default)]
    pub sigma: Option<BinarySpec>,
    #[serde(default)]
    pub lambda: Option<UnitSpec>,
    #[serde(default)]
    pub braiding: Option<BinarySpec>,
    #[serde(default)]
    pub idempotent: Option<IdempotentSpec>,
    /// Which family an invertibility check inspects.
    #[serde(default)]
    pub family: Option<FamilyChoice>,
    #[serde(default)]
    pub functor: Option<String>,
    #[serde(default)]
    pub functors: Option<Vec<String>>,
    #[serde(default)]
    pub transformation: Option<String>,
    #[serde(default)]
    pub cells: Option<Vec<String>>,
    #[serde(default)]
    pub chains: Option<Vec<(String, String, String)>>,
}

/// The scenario document as written.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default)]
    pub description: Option<String>,
    pub field: FieldSpec,
    pub grading: Grading,
    pub universe: UniverseSpec,
    pub closure_depth: usize,
    pub sigma: BinarySpec,
    pub lambda: UnitSpec,
    #[serde(default)]
    pub braiding: Option<BinarySpec>,
    #[serde(default)]
    pub idempotent: Option<IdempotentSpec>,
    #[serde(default)]
    pub functors: BTreeMap<String, FunctorSpec>,
    #[serde(default)]
    pub transformations: BTreeMap<String, TransSpec>,
    pub checks: Vec<CheckSpec>,
    pub seed: u64,
    pub samples: usize,
}

/// Builds composites without visiting any tuples, to surface structure errors at load time.
const DRY_RUN: crate::report::CheckBudget = crate::report::CheckBudget { max_object_tuples: 0, sample_maps: 0, seed: 0 };

const REQUIRED: [&str; 9] = ["field", "grading", "universe", "closure_depth", "sigma", "lambda", "checks", "seed", "samples"];
const OPTIONAL: [&str; 5] = ["description", "braiding", "idempotent", "functors", "transformations"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomId {
    Pentagon,
    Triangle,
    D1,
    D2,
    D3,
    D4,
    LambdaSigma,
    Idempotent(IdempotentAxiom),
    Invertibility,
    UnitClassification,
    SearchIdempotents,
    LaxAxioms,
    SLambda,
    Ssigma,
    Functoriality,
    LaxatorNaturality,
    TripleStrictness,
    Monoidal,
    LambdaConjugation,
    Naturality,
    HorizontalWellDefined,
    Interchange,
    HorizontalStrictness,
}

impl AxiomId {
    pub fn parse(s: &str) -> Option<AxiomId> {
        use AxiomId::*;
        Some(match s {
            "pentagon" => Pentagon,
            "triangle" => Triangle,
            "D1" => D1,
            "D2" => D2,
            "D3" => D3,
            "D4" => D4,
            "lambda_sigma" => LambdaSigma,
            "invertibility" => Invertibility,
            "unit_classification" => UnitClassification,
            "search_idempotents" => SearchIdempotents,
            "lax_axioms" => LaxAxioms,
            "SLambda" => SLambda,
            "Ssigma" => Ssigma,
            "functoriality" => Functoriality,
            "laxator_naturality" => LaxatorNaturality,
            "triple_strictness" => TripleStrictness,
            "monoidal" => Monoidal,
            "lambda_conjugation" => LambdaConjugation,
            "naturality" => Naturality,
            "horizontal_well_defined" => HorizontalWellDefined,
            "interchange" => Interchange,
            "horizontal_strictness" => HorizontalStrictness,
            other => Idempotent(other.parse().ok()?),
        })
    }

    /// Checks that quantify over tensor composites.
    fn needs_closure(self) -> bool {
        match self {
            AxiomId::D3 => true,
            AxiomId::Idempotent(a) => a.is_ternary(),
            _ => false,
        }
    }
}

/// Everything a check runs against.
#[derive(Clone, Debug)]
pub struct Env {
    pub ds: Arc<DistortedStructure>,
    pub braiding: BinaryFamily,
    pub idempotent: Option<IdempotentFamily>,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Target {
    None,
    Family(FamilyChoice),
    Functor(LaxFunctor),
    Functors(Vec<LaxFunctor>),
    Transformation(MonNatTrans),
    /// `[outer, inner]`
    Pair(Box<[MonNatTrans; 2]>),
    /// `[η, θ, φ, ψ]`
    Cells(Box<[MonNatTrans; 4]>),
    Chains(Vec<HorizontalChain>),
}

/// A validated check, ready to run.
#[derive(Clone, Debug)]
pub struct PlannedCheck {
    pub key: String,
    pub axiom: AxiomId,
    pub axiom_id: String,
    pub env: Env,
    pub target: Target,
}

/// A parsed, validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub doc: ScenarioDoc,
    /// Hex sha256 of the canonical JSON form of the document.
    pub hash: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<PlannedCheck>,
}

pub fn load_scenario(path: &Path) -> HResult<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Parse(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> HResult<Scenario> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))?;
    let hash = scenario_hash(&value);
    let obj = value.as_object_mut().ok_or_else(|| HarnessError::at("", "scenario must be a JSON object"))?;
    for key in REQUIRED {
        if !obj.contains_key(key) {
            return Err(HarnessError::at(key, "required key is missing"));
        }
    }
    if let Some(key) = obj.keys().find(|k| !REQUIRED.contains(&k.as_str()) && !OPTIONAL.contains(&k.as_str())) {
        return Err(HarnessError::at(key.clone(), "unknown key"));
    }
    // Bare axiom ids are shorthand for `{"axiom": id}`.
    if let Some(Value::Array(checks)) = obj.get_mut("checks") {
        for c in checks.iter_mut() {
            if let Value::String(s) = c {
                *c = serde_json::json!({ "axiom": s.clone() });
            }
        }
    }
    let doc: ScenarioDoc = serde_path_to_error::deserialize(value).map_err(|e| {
        let key = e.path().to_string();
        HarnessError::at(key, e.into_inner())
    })?;
    compile(doc, hash)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hex sha256 of the canonical (sorted-key, compact) JSON form.
pub fn scenario_hash(value: &Value) -> String {
    hex(&Sha256::digest(value.to_string().as_bytes()))
}

fn table(grading: Grading, t: &DimTable, key: &str) -> HResult<GradedObject> {
    let mut dims = Vec::new();
    for (d, n) in t {
        let d: Degree = d.parse().map_err(|_| HarnessError::at(key, format!("degree {d:?} is not a number")))?;
        dims.push((d, *n));
    }
    GradedObject::new(grading, dims).map_err(|e| HarnessError::at(key, e))
}

struct Compiler<'a> {
    doc: &'a ScenarioDoc,
    universe: Vec<GradedObject>,
}

impl Compiler<'_> {
    fn binary(&self, spec: &BinarySpec, field: Field, key: &str) -> HResult<BinaryFamily> {
        let at = |e: crate::Error| HarnessError::at(key, e);
        Ok(match spec {
            BinarySpec::Symmetric => BinaryFamily::symmetric(field),
            BinarySpec::Koszul => BinaryFamily::koszul(field),
            BinarySpec::Scalars { default, overrides, sign } => {
                let scalars = self.scalars(default, overrides, field, key)?;
                let sign = match sign {
                    SignSpec::None => SignRule::None,
                    SignSpec::Koszul => SignRule::Koszul,
                };
                BinaryFamily::Structural { scalars, sign }
            }
            BinarySpec::Twist { braiding, idempotent } => {
                let b = self.binary(braiding, field, &format!("{key}.twist.braiding"))?;
                let e = self.idempotent(idempotent, field, &format!("{key}.twist.idempotent"))?;
                twist(&b, &e).map_err(at)?
            }
            BinarySpec::Tabulate(inner) => {
                let f = self.binary(inner, field, &format!("{key}.tabulate"))?;
                let pairs = self.pairs()?;
                f.tabulate(pairs.iter().map(|(x, y)| (x, y))).map_err(at)?
            }
            BinarySpec::Table(entries) => {
                let maps = self.entries(entries, field, true, key)?;
                BinaryFamily::tabulated(maps).map_err(at)?
            }
        })
    }

    fn idempotent(&self, spec: &IdempotentSpec, field: Field, key: &str) -> HResult<IdempotentFamily> {
        let at = |e: crate::Error| HarnessError::at(key, e);
        Ok(match spec {
            IdempotentSpec::Identity => IdempotentFamily::identity(field),
            IdempotentSpec::ParityProjector => IdempotentFamily::parity_projector(field),
            IdempotentSpec::Scalars(s) => {
                IdempotentFamily::structural(self.scalars(&s.default, &s.overrides, field, key)?).map_err(at)?
            }
            IdempotentSpec::Tabulate(inner) => {
                let f = self.idempotent(inner, field, &format!("{key}.tabulate"))?;
                let pairs = self.pairs()?;
                f.tabulate(pairs.iter().map(|(x, y)| (x, y))).map_err(at)?
            }
            IdempotentSpec::Table(entries) => {
                let maps = self.entries(entries, field, false, key)?;
                IdempotentFamily::tabulated(maps).map_err(at)?
            }
        })
    }

    fn unit(&self, spec: &UnitSpec, field: Field, key: &str) -> HResult<UnitFamily> {
        let at = |e: crate::Error| HarnessError::at(key, e);
        Ok(match spec {
            UnitSpec::Identity => UnitFamily::identity(field),
            UnitSpec::Character(t) => UnitFamily::graded_character(t.build(field).map_err(at)?),
            UnitSpec::Table(values) => {
                let values = values.iter().map(|v| v.build(field)).collect::<crate::Result<Vec<_>>>().map_err(at)?;
                UnitFamily::character_family(values).map_err(at)?
            }
        })
    }

    fn scalars(&self, default: &ScalarText, overrides: &[(Degree, Degree, ScalarText)], field: Field, key: &str) -> HResult<PairScalars> {
        let at = |e: crate::Error| HarnessError::at(key, e);
        let mut s = PairScalars::constant(default.build(field).map_err(at)?);
        for (i, j, v) in overrides {
            s = s.with(*i, *j, v.build(field).map_err(at)?);
        }
        Ok(s)
    }

    fn entries(
        &self,
        entries: &[PairEntry],
        field: Field,
        flip: bool,
        key: &str,
    ) -> HResult<Vec<((GradedObject, GradedObject), GradedMap)>> {
        let grading = self.doc.grading;
        let mut out = Vec::new();
        for (n, e) in entries.iter().enumerate() {
            let k = format!("{key}.table[{n}]");
            let x = table(grading, &e.x, &format!("{k}.x"))?;
            let y = table(grading, &e.y, &format!("{k}.y"))?;
            let source = crate::exactlin::graded::tensor_obj(&x, &y).map_err(|err| HarnessError::at(&k, err))?;
            let target = if flip { crate::exactlin::graded::tensor_obj(&y, &x).map_err(|err| HarnessError::at(&k, err))? } else { source.clone() };
            let mut blocks = Vec::new();
            for (d, rows) in &e.blocks {
                let bk = format!("{k}.blocks.{d}");
                let d: Degree = d.parse().map_err(|_| HarnessError::at(&bk, "degree is not a number"))?;
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|v| v.build(field)).collect::<crate::Result<Vec<_>>>())
                    .collect::<crate::Result<Vec<_>>>()
                    .map_err(|err| HarnessError::at(&bk, err))?;
                if rows.iter().any(|r| r.len() != rows[0].len()) {
                    return Err(HarnessError::at(bk, "ragged matrix"));
                }
                blocks.push((d, Matrix::from_rows(field, rows)));
            }
            let m = GradedMap::new(field, source, target, blocks).map_err(|err| HarnessError::at(&k, err))?;
            out.push(((x, y), m));
        }
        Ok(out)
    }

    fn pairs(&self) -> HResult<Vec<(GradedObject, GradedObject)>> {
        closure_pairs(&self.universe, self.doc.closure_depth).map_err(|e| HarnessError::at("closure_depth", e))
    }

    fn env(&self, check: Option<(&CheckSpec, &str)>) -> HResult<Env> {
        let doc = self.doc;
        let (field_spec, field_key) = match check.and_then(|(c, k)| c.field.map(|f| (f, format!("{k}.field")))) {
            Some(x) => x,
            None => (doc.field, "field".to_string()),
        };
        let field = field_spec.build().map_err(|e| HarnessError::at(&field_key, e))?;
        let over = |name: &str| check.map(|(_, k)| format!("{k}.{name}"));
        let (sigma_spec, sigma_key) = match check.and_then(|(c, _)| c.sigma.as_ref()) {
            Some(s) => (s, over("sigma").expect("check present")),
            None => (&doc.sigma, "sigma".to_string()),
        };
        let sigma = self.binary(sigma_spec, field, &sigma_key)?;
        let (lambda_spec, lambda_key) = match check.and_then(|(c, _)| c.lambda.as_ref()) {
            Some(s) => (s, over("lambda").expect("check present")),
            None => (&doc.lambda, "lambda".to_string()),
        };
        let lambda = self.unit(lambda_spec, field, &lambda_key)?;
        let braiding = match (check.and_then(|(c, _)| c.braiding.as_ref()), &doc.braiding) {
            (Some(s), _) => self.binary(s, field, &over("braiding").expect("check present"))?,
            (None, Some(s)) => self.binary(s, field, "braiding")?,
            (None, None) => sigma.clone(),
        };
        let idempotent = match (check.and_then(|(c, _)| c.idempotent.as_ref()), &doc.idempotent) {
            (Some(s), _) => Some(self.idempotent(s, field, &over("idempotent").expect("check present"))?),
            (None, Some(s)) => Some(self.idempotent(s, field, "idempotent")?),
            (None, None) => None,
        };
        let ds = DistortedStructure::new(field, doc.grading, self.universe.clone(), sigma, lambda)
            .map_err(|e| HarnessError::at(check.map(|(_, k)| k.to_string()).unwrap_or_else(|| "universe".into()), e))?;
        Ok(Env { ds: Arc::new(ds), braiding, idempotent })
    }

    fn functor(&self, name: &str, ds: &Arc<DistortedStructure>, key: &str, seen: &mut BTreeSet<String>) -> HResult<LaxFunctor> {
        let spec = self.doc.functors.get(name).ok_or_else(|| HarnessError::at(key, format!("unknown functor {name:?}")))?;
        if !seen.insert(name.to_string()) {
            return Err(HarnessError::at(format!("functors.{name}"), "functor definition refers to itself"));
        }
        let fkey = format!("functors.{name}");
        let at = |e: crate::Error| HarnessError::at(&fkey, e);
        let f = match spec {
            FunctorSpec::Identity => identity_functor(ds.clone()),
            FunctorSpec::Truncation(d) => truncation_functor(ds.clone(), *d).map_err(at)?,
            FunctorSpec::Collapse => collapse_functor(ds.clone(), ungraded_structure(ds.field).map_err(at)?).map_err(at)?,
            FunctorSpec::Compose(outer, inner) => {
                let inner = self.functor(inner, ds, &format!("{fkey}.compose[1]"), seen)?;
                // The outer functor starts where the inner one lands.
                let outer = self.functor(outer, &inner.target, &format!("{fkey}.compose[0]"), seen)?;
                compose_lax(&outer, &inner).map_err(at)?
            }
        };
        seen.remove(name);
        Ok(f)
    }

    fn transformation(&self, name: &str, ds: &Arc<DistortedStructure>, key: &str, seen: &mut BTreeSet<String>) -> HResult<MonNatTrans> {
        let spec = self
            .doc
            .transformations
            .get(name)
            .ok_or_else(|| HarnessError::at(key, format!("unknown transformation {name:?}")))?;
        if !seen.insert(name.to_string()) {
            return Err(HarnessError::at(format!("transformations.{name}"), "transformation definition refers to itself"));
        }
        let tkey = format!("transformations.{name}");
        let at = |e: crate::Error| HarnessError::at(&tkey, e);
        let t = match spec {
            TransSpec::Identity(f) => identity_transformation(&self.functor(f, ds, &tkey, &mut BTreeSet::new())?),
            TransSpec::Projection(small, large) => projection_transformation(ds.clone(), *small, *large).map_err(at)?,
            TransSpec::Scalar(s) => {
                let f = self.functor(&s.functor, ds, &format!("{tkey}.scalar.functor"), &mut BTreeSet::new())?;
                let c = s.value.build(f.target.field).map_err(at)?;
                scalar_transformation(&f, c).map_err(at)?
            }
            TransSpec::Vertical(outer, inner) => {
                let inner = self.transformation(inner, ds, &format!("{tkey}.vertical[1]"), seen)?;
                let outer = self.transformation(outer, ds, &format!("{tkey}.vertical[0]"), seen)?;
                vertical(&outer, &inner).map_err(at)?
            }
            TransSpec::Horizontal(outer, inner) => {
                let inner = self.transformation(inner, ds, &format!("{tkey}.horizontal[1]"), seen)?;
                let outer = self.transformation(outer, &inner.target.target, &format!("{tkey}.horizontal[0]"), seen)?;
                horizontal(&outer, &inner).map_err(at)?
            }
        };
        seen.remove(name);
        Ok(t)
    }

    /// Resolves the cells of a horizontally composable chain, innermost first.
    fn chain(&self, names: &(String, String, String), ds: &Arc<DistortedStructure>, key: &str) -> HResult<HorizontalChain> {
        let inner = self.transformation(&names.2, ds, &format!("{key}[2]"), &mut BTreeSet::new())?;
        let middle = self.transformation(&names.1, &inner.target.target, &format!("{key}[1]"), &mut BTreeSet::new())?;
        let outer = self.transformation(&names.0, &middle.target.target, &format!("{key}[0]"), &mut BTreeSet::new())?;
        Ok(HorizontalChain { outer, middle, inner })
    }

    fn plan(&self, n: usize, c: &CheckSpec) -> HResult<PlannedCheck> {
        let key = format!("checks[{n}]");
        let axiom = AxiomId::parse(&c.axiom).ok_or_else(|| HarnessError::at(format!("{key}.axiom"), format!("unknown axiom {:?}", c.axiom)))?;
        if axiom.needs_closure() && self.doc.closure_depth < 2 {
            return Err(HarnessError::at("closure_depth", format!("{} needs closure_depth ≥ 2", c.axiom)));
        }
        let env = self.env(Some((c, &key)))?;
        let need = |field: &str| HarnessError::at(format!("{key}.{field}"), format!("{} needs `{field}`", c.axiom));
        let ds = env.ds.clone();
        let target = match axiom {
            AxiomId::Idempotent(_) => {
                if env.idempotent.is_none() {
                    return Err(HarnessError::at("idempotent", format!("{} needs an idempotent family", c.axiom)));
                }
                Target::None
            }
            AxiomId::Invertibility => {
                let choice = c.family.unwrap_or(FamilyChoice::Sigma);
                if choice == FamilyChoice::Idempotent && env.idempotent.is_none() {
                    return Err(HarnessError::at("idempotent", "invertibility of the idempotent needs an idempotent family"));
                }
                Target::Family(choice)
            }
            AxiomId::SearchIdempotents => {
                if self.doc.grading != Grading::Parity {
                    return Err(HarnessError::at("grading", "search_idempotents needs parity grading"));
                }
                Target::None
            }
            AxiomId::LaxAxioms | AxiomId::SLambda | AxiomId::Ssigma | AxiomId::Functoriality | AxiomId::LaxatorNaturality => {
                let name = c.functor.as_ref().ok_or_else(|| need("functor"))?;
                Target::Functor(self.functor(name, &ds, &format!("{key}.functor"), &mut BTreeSet::new())?)
            }
            AxiomId::TripleStrictness => {
                let names = c.functors.as_ref().ok_or_else(|| need("functors"))?;
                if names.len() != 3 {
                    return Err(HarnessError::at(format!("{key}.functors"), "expected [H, G, F]"));
                }
                let f = self.functor(&names[2], &ds, &format!("{key}.functors[2]"), &mut BTreeSet::new())?;
                let g = self.functor(&names[1], &f.target, &format!("{key}.functors[1]"), &mut BTreeSet::new())?;
                let h = self.functor(&names[0], &g.target, &format!("{key}.functors[0]"), &mut BTreeSet::new())?;
                Target::Functors(vec![h, g, f])
            }
            AxiomId::Monoidal | AxiomId::LambdaConjugation | AxiomId::Naturality => {
                let name = c.transformation.as_ref().ok_or_else(|| need("transformation"))?;
                Target::Transformation(self.transformation(name, &ds, &format!("{key}.transformation"), &mut BTreeSet::new())?)
            }
            AxiomId::HorizontalWellDefined => {
                let names = c.cells.as_ref().ok_or_else(|| need("cells"))?;
                if names.len() != 2 {
                    return Err(HarnessError::at(format!("{key}.cells"), "expected [outer, inner]"));
                }
                let inner = self.transformation(&names[1], &ds, &format!("{key}.cells[1]"), &mut BTreeSet::new())?;
                let outer = self.transformation(&names[0], &inner.target.target, &format!("{key}.cells[0]"), &mut BTreeSet::new())?;
                horizontal(&outer, &inner).map_err(|e| HarnessError::at(format!("{key}.cells"), e))?;
                Target::Pair(Box::new([outer, inner]))
            }
            AxiomId::Interchange => {
                let names = c.cells.as_ref().ok_or_else(|| need("cells"))?;
                if names.len() != 4 {
                    return Err(HarnessError::at(format!("{key}.cells"), "expected [eta, theta, phi, psi]"));
                }
                let get = |i: usize, ds: &Arc<DistortedStructure>| {
                    self.transformation(&names[i], ds, &format!("{key}.cells[{i}]"), &mut BTreeSet::new())
                };
                let (eta, theta) = (get(0, &ds)?, get(1, &ds)?);
                let mid = theta.target.target.clone();
                let (phi, psi) = (get(2, &mid)?, get(3, &mid)?);
                let cells = [eta, theta, phi, psi];
                crate::transform::check_interchange(&cells[0], &cells[1], &cells[2], &cells[3], &DRY_RUN)
                    .map_err(|e| HarnessError::at(format!("{key}.cells"), e))?;
                Target::Cells(Box::new(cells))
            }
            AxiomId::HorizontalStrictness => {
                let chains = c.chains.as_ref().ok_or_else(|| need("chains"))?;
                let chains = chains
                    .iter()
                    .enumerate()
                    .map(|(i, names)| self.chain(names, &ds, &format!("{key}.chains[{i}]")))
                    .collect::<HResult<Vec<_>>>()?;
                crate::transform::check_horizontal_strictness(&chains, &DRY_RUN)
                    .map_err(|e| HarnessError::at(format!("{key}.chains"), e))?;
                Target::Chains(chains)
            }
            _ => Target::None,
        };
        Ok(PlannedCheck { key: c.label.clone().unwrap_or_else(|| c.axiom.clone()), axiom, axiom_id: c.axiom.clone(), env, target })
    }
}

fn compile(doc: ScenarioDoc, hash: String) -> HResult<Scenario> {
    if doc.closure_depth > 2 {
        return Err(HarnessError::at("closure_depth", "closure_depth must be 0, 1, or 2"));
    }
    let universe = match &doc.universe {
        UniverseSpec::Explicit(tables) => tables
            .iter()
            .enumerate()
            .map(|(i, t)| table(doc.grading, t, &format!("universe[{i}]")))
            .collect::<HResult<Vec<_>>>()?,
        UniverseSpec::Generator(g) => generate_universe(doc.grading, g.max_degree, g.max_dim, g.max_support)
            .map_err(|e| HarnessError::at("universe", e))?,
    };
    if universe.is_empty() {
        return Err(HarnessError::at("universe", "universe is empty"));
    }
    // Closure must be computable for the declared depth.
    closure(&universe, doc.closure_depth).map_err(|e| HarnessError::at("closure_depth", e))?;
    let compiler = Compiler { doc: &doc, universe };
    compiler.env(None)?;
    let mut keys = BTreeSet::new();
    let mut checks = Vec::new();
    for (n, c) in doc.checks.iter().enumerate() {
        let planned = compiler.plan(n, c)?;
        if !keys.insert(planned.key.clone()) {
            let k = if c.label.is_some() { format!("checks[{n}].label") } else { format!("checks[{n}].axiom") };
            return Err(HarnessError::at(k, format!("duplicate check key {:?}; add a distinct label", planned.key)));
        }
        checks.push(planned);
    }
    Ok(Scenario { seed: doc.seed, samples: doc.samples, doc, hash, checks })
}
