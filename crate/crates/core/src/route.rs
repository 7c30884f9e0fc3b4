//! The scalar route: for structural families every axiom reduces, per tuple of
//! homogeneous degrees, to an identity between products of scalars. Checks
//! evaluate it next to the matrix route and refuse to report when they differ.

use crate::error::{Error, Result};
use crate::exactlin::graded::{Degree, GradedObject};
use crate::report::Witness;

/// All degree tuples `(d₀, …)` with `dᵢ` in the support of `objects[i]`, lexicographic.
pub fn support(objects: &[&GradedObject]) -> Vec<Vec<Degree>> {
    let mut out = vec![Vec::new()];
    for o in objects {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                o.degrees().map(move |d| {
                    let mut t = prefix.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

/// First support tuple at which `holds` is false.
pub fn first_violation(objects: &[&GradedObject], holds: impl Fn(&[Degree]) -> bool) -> Option<Vec<Degree>> {
    support(objects).into_iter().find(|t| !holds(t))
}

/// Requires the matrix-route witness and the scalar-route verdict to agree:
/// both pass, or both fail and the witness degrees violate the scalar identity.
pub fn reconcile(
    axiom: &str,
    witness: Option<&Witness>,
    scalar_failure: Option<&[Degree]>,
    holds: impl Fn(&[Degree]) -> bool,
) -> Result<()> {
    match (witness, scalar_failure) {
        (None, None) => Ok(()),
        (Some(w), Some(_)) if !holds(&w.degrees) => Ok(()),
        (Some(w), Some(_)) => Err(Error::RouteDisagreement(format!(
            "{axiom}: matrices differ at degrees {:?}, where the scalar identity holds",
            w.degrees
        ))),
        (Some(w), None) => Err(Error::RouteDisagreement(format!(
            "{axiom}: matrices differ at degrees {:?}, scalar route passes",
            w.degrees
        ))),
        (None, Some(d)) => Err(Error::RouteDisagreement(format!(
            "{axiom}: scalar identity fails at degrees {d:?}, matrices agree"
        ))),
    }
}
