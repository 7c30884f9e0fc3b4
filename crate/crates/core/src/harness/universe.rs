//! Universe generation and tensor closure.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactlin::graded::{tensor_obj, Degree, GradedObject, Grading};

/// Every degree→dim table with support of size at most `max_support` inside
/// `[0, max_degree]` (clipped to the monoid) and dims in `[1, max_dim]`, plus I.
/// Canonically sorted.
pub fn generate_universe(grading: Grading, max_degree: Degree, max_dim: usize, max_support: usize) -> Result<Vec<GradedObject>> {
    if max_dim == 0 {
        return Err(Error::InvalidArgument("max_dim must be at least 1".into()));
    }
    let degrees: Vec<Degree> = (0..=max_degree).filter(|d| grading.contains(*d)).collect();
    let mut out = BTreeSet::new();
    out.insert(GradedObject::unit(grading));
    // Each degree gets a dimension in 0..=max_dim; keep supports of bounded size.
    let mut dims = vec![0usize; degrees.len()];
    loop {
        let support = dims.iter().filter(|&&n| n > 0).count();
        if support > 0 && support <= max_support {
            let table = degrees.iter().zip(&dims).filter(|(_, &n)| n > 0).map(|(&d, &n)| (d, n));
            out.insert(GradedObject::new(grading, table)?);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == dims.len() {
                return Ok(out.into_iter().collect());
            }
            dims[i] += 1;
            if dims[i] <= max_dim {
                break;
            }
            dims[i] = 0;
            i += 1;
        }
    }
}

/// Tensor products of exactly `k` universe objects, for `k = 1 ..= depth + 1`
/// (level `k` at index `k - 1`), each level deduplicated and sorted.
pub fn closure_levels(universe: &[GradedObject], depth: usize) -> Result<Vec<Vec<GradedObject>>> {
    let mut levels: Vec<Vec<GradedObject>> = vec![sorted(universe.iter().cloned())];
    for _ in 0..depth {
        let last = levels.last().expect("nonempty");
        let mut next = BTreeSet::new();
        for a in last {
            for b in universe {
                next.insert(tensor_obj(a, b)?);
            }
        }
        levels.push(next.into_iter().collect());
    }
    Ok(levels)
}

/// The universe together with all products of at most `depth + 1` of its objects.
pub fn closure(universe: &[GradedObject], depth: usize) -> Result<Vec<GradedObject>> {
    Ok(sorted(closure_levels(universe, depth)?.into_iter().flatten()))
}

/// Ordered pairs `(A, B)` with `A` a product of `k` and `B` of `l` universe
/// objects, `k + l ≤ depth + 1`: the pairs at which the axioms of a closed
/// check evaluate a binary family.
pub fn closure_pairs(universe: &[GradedObject], depth: usize) -> Result<Vec<(GradedObject, GradedObject)>> {
    let levels = closure_levels(universe, depth.saturating_sub(1))?;
    let mut out = BTreeSet::new();
    for (k, la) in levels.iter().enumerate() {
        for (l, lb) in levels.iter().enumerate() {
            if k + l + 2 <= depth + 1 {
                for a in la {
                    for b in lb {
                        out.insert((a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn sorted(objs: impl IntoIterator<Item = GradedObject>) -> Vec<GradedObject> {
    objs.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// The parity universe used by default: degrees {0,1}, dims ≤ 2 (8 objects).
pub fn default_parity_universe() -> Vec<GradedObject> {
    generate_universe(Grading::Parity, 1, 2, 2).expect("valid parameters")
}

/// The ℕ universe used by default: support ⊆ {0,1,2}, dims 1 (7 objects).
pub fn default_nat_universe() -> Vec<GradedObject> {
    generate_universe(Grading::Nat, 2, 1, 3).expect("valid parameters")
}
