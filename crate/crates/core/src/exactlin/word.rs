//! Bracketed tensor words and their canonical bases.
//!
//! A basis vector of a word over factors `X₀, …, X_{k-1}` is labelled by one
//! `(degree, index)` pair per factor. Two words over the same factors have the
//! same labels in possibly different orders; structural maps (associators,
//! flips, diagonal scalings) are permutations of labels weighted per label.

use std::collections::{BTreeMap, HashMap};

use super::graded::{tensor_obj, Degree, GradedMap, GradedObject};
use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// One `(degree, index-within-degree)` per factor, indexed by factor position.
pub type Label = Vec<(Degree, usize)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Leaf(usize),
    Tensor(Box<Word>, Box<Word>),
}

impl Word {
    pub fn leaf(i: usize) -> Word {
        Word::Leaf(i)
    }

    pub fn tensor(a: Word, b: Word) -> Word {
        Word::Tensor(Box::new(a), Box::new(b))
    }

    /// `(0 ⊗ 1)`
    pub fn pair(a: usize, b: usize) -> Word {
        Word::tensor(Word::Leaf(a), Word::Leaf(b))
    }

    /// `((a ⊗ b) ⊗ c)`
    pub fn left(a: usize, b: usize, c: usize) -> Word {
        Word::tensor(Word::pair(a, b), Word::Leaf(c))
    }

    /// `(a ⊗ (b ⊗ c))`
    pub fn right(a: usize, b: usize, c: usize) -> Word {
        Word::tensor(Word::Leaf(a), Word::pair(b, c))
    }

    fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            Word::Leaf(i) => out.push(*i),
            Word::Tensor(a, b) => {
                a.leaves(out);
                b.leaves(out);
            }
        }
    }

    pub fn object(&self, factors: &[GradedObject]) -> Result<GradedObject> {
        match self {
            Word::Leaf(i) => factors
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(format!("word refers to missing factor {i}"))),
            Word::Tensor(a, b) => tensor_obj(&a.object(factors)?, &b.object(factors)?),
        }
    }

    /// Canonical basis labels per total degree.
    pub fn basis(&self, factors: &[GradedObject]) -> Result<BTreeMap<Degree, Vec<Label>>> {
        let width = factors.len();
        match self {
            Word::Leaf(i) => {
                let x = factors
                    .get(*i)
                    .ok_or_else(|| Error::InvalidArgument(format!("word refers to missing factor {i}")))?;
                Ok(x.dims()
                    .iter()
                    .map(|(&d, &n)| {
                        let labels = (0..n)
                            .map(|k| {
                                let mut l = vec![(0, 0); width];
                                l[*i] = (d, k);
                                l
                            })
                            .collect();
                        (d, labels)
                    })
                    .collect())
            }
            Word::Tensor(a, b) => {
                let grading = factors.first().map(GradedObject::grading).expect("nonempty factor list");
                let (ba, bb) = (a.basis(factors)?, b.basis(factors)?);
                let mut lb = Vec::new();
                b.leaves(&mut lb);
                let mut out: BTreeMap<Degree, Vec<Label>> = BTreeMap::new();
                for (&i, xs) in &ba {
                    for (&j, ys) in &bb {
                        let bucket = out.entry(grading.add(i, j)).or_default();
                        for x in xs {
                            for y in ys {
                                let mut l = x.clone();
                                for &leaf in &lb {
                                    l[leaf] = y[leaf];
                                }
                                bucket.push(l);
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

/// The structural map `src → tgt` sending each basis label to the same label,
/// weighted by `weight(label)`. Both words must use the same factors.
pub fn relabel(
    field: Field,
    factors: &[GradedObject],
    src: &Word,
    tgt: &Word,
    weight: impl Fn(&Label) -> Scalar,
) -> Result<GradedMap> {
    let (mut ls, mut lt) = (Vec::new(), Vec::new());
    src.leaves(&mut ls);
    tgt.leaves(&mut lt);
    ls.sort_unstable();
    lt.sort_unstable();
    if ls != lt {
        return Err(Error::InvalidArgument("relabel words use different factors".into()));
    }
    let source = src.object(factors)?;
    let target = tgt.object(factors)?;
    let sb = src.basis(factors)?;
    let tb = tgt.basis(factors)?;
    let mut blocks = BTreeMap::new();
    for (d, src_labels) in &sb {
        let tgt_labels = tb.get(d).expect("same factors give the same degrees");
        let index: HashMap<&Label, usize> = tgt_labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut m = Matrix::zeros(field, tgt_labels.len(), src_labels.len());
        for (col, l) in src_labels.iter().enumerate() {
            let row = index[l];
            m.set(row, col, weight(l));
        }
        blocks.insert(*d, m);
    }
    GradedMap::new(field, source, target, blocks)
}

/// Degrees of each factor for the basis vector at column `col` of degree `d` in `word`.
pub fn label_degrees(word: &Word, factors: &[GradedObject], d: Degree, col: usize) -> Result<Vec<Degree>> {
    let basis = word.basis(factors)?;
    let label = basis
        .get(&d)
        .and_then(|ls| ls.get(col))
        .ok_or_else(|| Error::InvalidArgument(format!("no basis vector {col} at degree {d}")))?;
    Ok(label.iter().map(|(deg, _)| *deg).collect())
}
