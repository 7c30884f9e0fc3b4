//! Check verdicts, coverage accounting, and failure witnesses.

use std::fmt;

use crate::error::Result;
use crate::exactlin::graded::{BlockDifference, Degree, GradedMap, GradedObject};
use crate::exactlin::word::{label_degrees, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Quantifier limits for a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckBudget {
    /// Cap on object tuples visited, in canonical order.
    pub max_object_tuples: usize,
    /// Sampled morphisms per object tuple, for checks that quantify over maps.
    pub sample_maps: usize,
    pub seed: u64,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget { max_object_tuples: 50_000, sample_maps: 4, seed: 0 }
    }
}

impl CheckBudget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.sample_maps = samples;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coverage {
    /// Object tuples evaluated (up to and including the witness on failure).
    pub object_tuples: usize,
    /// Tuples the full quantifier ranges over, before the budget cap.
    pub available_tuples: usize,
    /// Sampled morphism instances evaluated.
    pub sampled_maps: usize,
    pub notes: Vec<String>,
}

impl Coverage {
    pub fn is_truncated(&self) -> bool {
        self.object_tuples < self.available_tuples
    }
}

/// Two unequal parallel maps and their first differing entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub lhs: GradedMap,
    pub rhs: GradedMap,
    pub difference: BlockDifference,
}

/// Everything needed to replay a failure in isolation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub objects: Vec<GradedObject>,
    /// Sampled morphisms the instance was evaluated at, if any.
    pub inputs: Vec<GradedMap>,
    /// Factor degrees of the first differing basis vector (or the failing block degree).
    pub degrees: Vec<Degree>,
    pub comparison: Option<Comparison>,
    pub note: Option<String>,
}

impl Witness {
    pub fn note(objects: Vec<GradedObject>, degrees: Vec<Degree>, note: impl Into<String>) -> Self {
        Witness { objects, inputs: Vec::new(), degrees, comparison: None, note: Some(note.into()) }
    }

    pub fn with_inputs(mut self, inputs: Vec<GradedMap>) -> Self {
        self.inputs = inputs;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub axiom: String,
    pub verdict: Verdict,
    pub coverage: Coverage,
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn pass(axiom: impl Into<String>, coverage: Coverage) -> Self {
        CheckReport { axiom: axiom.into(), verdict: Verdict::Pass, coverage, witness: None }
    }

    pub fn fail(axiom: impl Into<String>, coverage: Coverage, witness: Witness) -> Self {
        CheckReport { axiom: axiom.into(), verdict: Verdict::Fail, coverage, witness: Some(witness) }
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.coverage.notes.push(note.into());
        self
    }
}

/// Compares `lhs` and `rhs`; on inequality builds a witness whose `degrees`
/// locate the first differing column in `source` (a word over `objects`), or
/// fall back to the block degree when no word is given.
pub fn compare(
    objects: &[GradedObject],
    source: Option<&Word>,
    lhs: GradedMap,
    rhs: GradedMap,
) -> Result<Option<Witness>> {
    compare_at(objects, objects, source, lhs, rhs)
}

/// [`compare`] where the source word is over `factors` (e.g. images under a
/// functor) while the witness records the original `objects`.
pub fn compare_at(
    objects: &[GradedObject],
    factors: &[GradedObject],
    source: Option<&Word>,
    lhs: GradedMap,
    rhs: GradedMap,
) -> Result<Option<Witness>> {
    let Some(difference) = lhs.first_difference(&rhs)? else {
        return Ok(None);
    };
    let degrees = match source {
        Some(word) => label_degrees(word, factors, difference.degree, difference.col)?,
        None => vec![difference.degree],
    };
    Ok(Some(Witness {
        objects: objects.to_vec(),
        inputs: Vec::new(),
        degrees,
        comparison: Some(Comparison { lhs, rhs, difference }),
        note: None,
    }))
}

/// All `k`-tuples of indices into a list of length `n`, lexicographic.
pub fn index_tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.checked_pow(k as u32).unwrap_or(usize::MAX);
    let count = if n == 0 && k > 0 { 0 } else { total };
    (0..count).map(move |mut idx| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = idx % n.max(1);
            idx /= n.max(1);
        }
        t
    })
}

/// Visits the first `budget.max_object_tuples` `k`-tuples of `universe` in
/// canonical order and stops at the first failing instance.
///
/// `eval` returns the number of sampled maps it used and an optional witness.
pub fn quantify<F>(
    axiom: &str,
    universe: &[GradedObject],
    arity: usize,
    budget: &CheckBudget,
    mut eval: F,
) -> Result<CheckReport>
where
    F: FnMut(&[&GradedObject]) -> Result<(usize, Option<Witness>)>,
{
    let available = universe.len().checked_pow(arity as u32).unwrap_or(usize::MAX);
    let mut coverage = Coverage { available_tuples: available, ..Coverage::default() };
    for tuple in index_tuples(universe.len(), arity).take(budget.max_object_tuples) {
        let objs: Vec<&GradedObject> = tuple.iter().map(|&i| &universe[i]).collect();
        let (samples, witness) = eval(&objs)?;
        coverage.object_tuples += 1;
        coverage.sampled_maps += samples;
        if let Some(w) = witness {
            return Ok(CheckReport::fail(axiom, coverage, w));
        }
    }
    Ok(CheckReport::pass(axiom, coverage))
}

/// Runs sub-checks in order under one axiom id, stopping at the first failure.
/// Coverage adds up across the parts that ran.
pub fn sequence(axiom: &str, parts: Vec<Box<dyn FnOnce() -> Result<CheckReport> + '_>>) -> Result<CheckReport> {
    let mut coverage = Coverage::default();
    for part in parts {
        let r = part()?;
        coverage.object_tuples += r.coverage.object_tuples;
        coverage.available_tuples += r.coverage.available_tuples;
        coverage.sampled_maps += r.coverage.sampled_maps;
        coverage.notes.extend(r.coverage.notes);
        if let Some(w) = r.witness {
            return Ok(CheckReport::fail(axiom, coverage, w));
        }
    }
    Ok(CheckReport::pass(axiom, coverage))
}
