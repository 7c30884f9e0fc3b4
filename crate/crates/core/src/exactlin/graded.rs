//! Finite-dimensional graded vector spaces and degree-preserving maps.
//!
//! Basis convention for `X ⊗ Y` at total degree `n`: the summands `X_i ⊗ Y_j`
//! with `i + j = n` appear with the first-factor degree `i` ascending, and each
//! summand is flattened row-major (X-index outer, Y-index inner).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

pub type Degree = u32;

/// The commutative grading monoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// `{0}`: ungraded vector spaces.
    Trivial,
    /// `ℤ/2`: super vector spaces.
    Parity,
    /// `ℕ`.
    Nat,
}

impl Grading {
    pub fn zero(self) -> Degree {
        0
    }

    pub fn add(self, a: Degree, b: Degree) -> Degree {
        match self {
            Grading::Trivial => 0,
            Grading::Parity => (a + b) % 2,
            Grading::Nat => a.checked_add(b).expect("degree overflow"),
        }
    }

    pub fn contains(self, d: Degree) -> bool {
        match self {
            Grading::Trivial => d == 0,
            Grading::Parity => d < 2,
            Grading::Nat => true,
        }
    }

    /// Representable degrees, when the monoid is finite.
    pub fn elements(self) -> Option<Vec<Degree>> {
        match self {
            Grading::Trivial => Some(vec![0]),
            Grading::Parity => Some(vec![0, 1]),
            Grading::Nat => None,
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grading::Trivial => "trivial",
            Grading::Parity => "parity",
            Grading::Nat => "nat",
        })
    }
}

/// A finitely supported table `degree ↦ dimension`. Absent degrees have dimension 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedObject {
    grading: Grading,
    dims: BTreeMap<Degree, usize>,
}

impl GradedObject {
    pub fn new(grading: Grading, dims: impl IntoIterator<Item = (Degree, usize)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (d, n) in dims {
            if !grading.contains(d) {
                return Err(Error::InvalidObject(format!("degree {d} is not in the {grading} monoid")));
            }
            if n == 0 {
                return Err(Error::InvalidObject(format!("degree {d} has dimension 0; omit it instead")));
            }
            if table.insert(d, n).is_some() {
                return Err(Error::InvalidObject(format!("degree {d} listed twice")));
            }
        }
        Ok(GradedObject { grading, dims: table })
    }

    /// The monoidal unit `{0 ↦ 1}`.
    pub fn unit(grading: Grading) -> Self {
        GradedObject { grading, dims: BTreeMap::from([(0, 1)]) }
    }

    pub fn zero_object(grading: Grading) -> Self {
        GradedObject { grading, dims: BTreeMap::new() }
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn dims(&self) -> &BTreeMap<Degree, usize> {
        &self.dims
    }

    pub fn dim(&self, d: Degree) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.dims.keys().copied()
    }

    pub fn is_unit(&self) -> bool {
        self.dims.len() == 1 && self.dims.get(&0) == Some(&1)
    }

    /// Offset of degree `d` in the degree-ascending concatenation of all components.
    pub fn offset(&self, d: Degree) -> usize {
        self.dims.range(..d).map(|(_, n)| n).sum()
    }

    fn check_grading(&self, other: &GradedObject) -> Result<()> {
        if self.grading != other.grading {
            return Err(Error::MonoidMismatch(format!("{} vs {}", self.grading, other.grading)));
        }
        Ok(())
    }
}

/// Canonical order: grading, then total dimension, then the degree table.
impl Ord for GradedObject {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grading
            .cmp(&other.grading)
            .then(self.total_dim().cmp(&other.total_dim()))
            .then_with(|| self.dims.iter().cmp(other.dims.iter()))
    }
}

impl PartialOrd for GradedObject {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GradedObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Summand layout of `X ⊗ Y`: for each total degree, the `(i, j, offset)` triples in basis order.
pub(crate) fn tensor_layout(x: &GradedObject, y: &GradedObject) -> BTreeMap<Degree, Vec<(Degree, Degree, usize)>> {
    let mut layout: BTreeMap<Degree, Vec<(Degree, Degree, usize)>> = BTreeMap::new();
    let mut sizes: BTreeMap<Degree, usize> = BTreeMap::new();
    for (&i, &a) in &x.dims {
        for (&j, &b) in &y.dims {
            let n = x.grading.add(i, j);
            let off = sizes.entry(n).or_insert(0);
            layout.entry(n).or_default().push((i, j, *off));
            *off += a * b;
        }
    }
    layout
}

/// `(X ⊗ Y)_n = ⊕_{i+j=n} X_i ⊗ Y_j`.
pub fn tensor_obj(x: &GradedObject, y: &GradedObject) -> Result<GradedObject> {
    x.check_grading(y)?;
    let mut dims = BTreeMap::new();
    for (&i, &a) in &x.dims {
        for (&j, &b) in &y.dims {
            *dims.entry(x.grading.add(i, j)).or_insert(0) += a * b;
        }
    }
    Ok(GradedObject { grading: x.grading, dims })
}

/// A degree-preserving linear map, one block per degree. Missing blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMap {
    field: Field,
    source: GradedObject,
    target: GradedObject,
    blocks: BTreeMap<Degree, Matrix>,
}

/// First differing entry between two parallel maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDifference {
    pub degree: Degree,
    pub row: usize,
    pub col: usize,
    pub left: Scalar,
    pub right: Scalar,
}

impl GradedMap {
    /// Validates grading, support, and block shapes; drops zero blocks.
    pub fn new(
        field: Field,
        source: GradedObject,
        target: GradedObject,
        blocks: impl IntoIterator<Item = (Degree, Matrix)>,
    ) -> Result<Self> {
        source.check_grading(&target)?;
        let mut kept = BTreeMap::new();
        for (d, m) in blocks {
            if m.field() != field {
                return Err(Error::InvalidMap(format!("block at degree {d} is over {}, expected {field}", m.field())));
            }
            let shape = (target.dim(d), source.dim(d));
            if m.shape() != shape {
                return Err(Error::InvalidMap(format!(
                    "block at degree {d} has shape {:?}, expected {:?}",
                    m.shape(),
                    shape
                )));
            }
            if shape.0 == 0 || shape.1 == 0 {
                return Err(Error::InvalidMap(format!("degree {d} is absent from source or target")));
            }
            if !m.is_zero() {
                kept.insert(d, m);
            }
        }
        Ok(GradedMap { field, source, target, blocks: kept })
    }

    pub fn zero(field: Field, source: GradedObject, target: GradedObject) -> Result<Self> {
        source.check_grading(&target)?;
        Ok(GradedMap { field, source, target, blocks: BTreeMap::new() })
    }

    /// Identity block at every degree of `x`.
    pub fn identity(field: Field, x: &GradedObject) -> Self {
        let blocks = x.dims.iter().map(|(&d, &n)| (d, Matrix::identity(field, n))).collect();
        GradedMap { field, source: x.clone(), target: x.clone(), blocks }
    }

    /// `c · Id_X` on each degree `m` with scalar `scalar(m)`.
    pub fn diagonal(field: Field, x: &GradedObject, scalar: impl Fn(Degree) -> Scalar) -> Self {
        let blocks = x.dims.iter().map(|(&d, &n)| (d, Matrix::identity(field, n).scale(&scalar(d))));
        GradedMap::new(field, x.clone(), x.clone(), blocks).expect("diagonal blocks are well-shaped")
    }

    pub(crate) fn from_parts_unchecked(
        field: Field,
        source: GradedObject,
        target: GradedObject,
        blocks: BTreeMap<Degree, Matrix>,
    ) -> Self {
        debug_assert!(blocks.iter().all(|(d, m)| m.shape() == (target.dim(*d), source.dim(*d))));
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        GradedMap { field, source, target, blocks }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &GradedObject {
        &self.source
    }

    pub fn target(&self) -> &GradedObject {
        &self.target
    }

    /// Stored (nonzero) blocks.
    pub fn blocks(&self) -> &BTreeMap<Degree, Matrix> {
        &self.blocks
    }

    /// Block at `d`, materializing zero when absent. `None` when `d` is not shared by source and target.
    pub fn block(&self, d: Degree) -> Option<Matrix> {
        let shape = (self.target.dim(d), self.source.dim(d));
        if shape.0 == 0 || shape.1 == 0 {
            return None;
        }
        Some(self.blocks.get(&d).cloned().unwrap_or_else(|| Matrix::zeros(self.field, shape.0, shape.1)))
    }

    /// Degrees present in both source and target.
    pub fn shared_degrees(&self) -> Vec<Degree> {
        self.source.degrees().filter(|d| self.target.dim(*d) > 0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == GradedMap::identity(self.field, &self.source)
    }

    pub fn scale(&self, s: &Scalar) -> GradedMap {
        let blocks = self.blocks.iter().map(|(d, m)| (*d, m.scale(s))).collect();
        GradedMap::from_parts_unchecked(self.field, self.source.clone(), self.target.clone(), blocks)
    }

    /// Replaces the block at `d` (test hooks and tabulated data).
    pub fn with_block(&self, d: Degree, block: Matrix) -> Result<GradedMap> {
        let mut blocks = self.blocks.clone();
        blocks.insert(d, block);
        GradedMap::new(self.field, self.source.clone(), self.target.clone(), blocks)
    }

    /// Reinterprets the map with different but dimensionally equal endpoints.
    pub fn retype(&self, source: GradedObject, target: GradedObject) -> Result<GradedMap> {
        if source.dims != self.source.dims || target.dims != self.target.dims {
            return Err(Error::ObjectMismatch {
                expected: format!("{} -> {}", self.source, self.target),
                found: format!("{source} -> {target}"),
            });
        }
        Ok(GradedMap { field: self.field, source, target, blocks: self.blocks.clone() })
    }

    /// First entry where two parallel maps differ, scanning degrees ascending then row-major.
    pub fn first_difference(&self, other: &GradedMap) -> Result<Option<BlockDifference>> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ObjectMismatch {
                expected: format!("{} -> {}", self.source, self.target),
                found: format!("{} -> {}", other.source, other.target),
            });
        }
        for d in self.shared_degrees() {
            let (a, b) = (self.blocks.get(&d), other.blocks.get(&d));
            if a == b {
                continue;
            }
            let a = self.block(d).expect("shared degree");
            let b = other.block(d).expect("shared degree");
            if let Some(e) = a.first_difference(&b) {
                return Ok(Some(BlockDifference { degree: d, row: e.row, col: e.col, left: e.left, right: e.right }));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}:", self.source, self.target)?;
        for d in self.shared_degrees() {
            write!(f, " {d}:{}", self.block(d).expect("shared degree"))?;
        }
        Ok(())
    }
}

/// `g ∘ f`. Requires `f.target == g.source`.
pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap> {
    if f.target != g.source {
        return Err(Error::ObjectMismatch { expected: g.source.to_string(), found: f.target.to_string() });
    }
    assert_eq!(f.field, g.field, "field mismatch in composition");
    let mut blocks = BTreeMap::new();
    for (d, fb) in &f.blocks {
        if let Some(gb) = g.blocks.get(d) {
            blocks.insert(*d, gb.mul(fb));
        }
    }
    Ok(GradedMap::from_parts_unchecked(f.field, f.source.clone(), g.target.clone(), blocks))
}

/// Composes right-to-left: `chain(&[h, g, f]) = h ∘ g ∘ f`.
pub fn compose_all(maps: &[&GradedMap]) -> Result<GradedMap> {
    let (last, rest) = maps.split_last().expect("at least one map");
    let mut acc = (*last).clone();
    for m in rest.iter().rev() {
        acc = compose(m, &acc)?;
    }
    Ok(acc)
}

/// `f ⊗ g`, laid out in the canonical basis order. No sign arises: all maps are degree-preserving.
pub fn tensor_map(f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    f.source.check_grading(&g.source)?;
    assert_eq!(f.field, g.field, "field mismatch in tensor product");
    let source = tensor_obj(&f.source, &g.source)?;
    let target = tensor_obj(&f.target, &g.target)?;
    let src_layout = tensor_layout(&f.source, &g.source);
    let tgt_layout = tensor_layout(&f.target, &g.target);
    let mut blocks = BTreeMap::new();
    for (n, summands) in &src_layout {
        let Some(tgt_summands) = tgt_layout.get(n) else { continue };
        let mut block: Option<Matrix> = None;
        for &(i, j, col) in summands {
            let (Some(fb), Some(gb)) = (f.blocks.get(&i), g.blocks.get(&j)) else { continue };
            let Some(&(_, _, row)) = tgt_summands.iter().find(|(ti, tj, _)| *ti == i && *tj == j) else {
                continue;
            };
            let out = block.get_or_insert_with(|| Matrix::zeros(f.field, target.dim(*n), source.dim(*n)));
            out.place(row, col, &fb.kron(gb));
        }
        if let Some(b) = block {
            blocks.insert(*n, b);
        }
    }
    Ok(GradedMap::from_parts_unchecked(f.field, source, target, blocks))
}
