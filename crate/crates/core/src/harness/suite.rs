//! Running planned checks and rendering reports.

use serde_json::{json, Map, Value};

use crate::distortion::{
    check_d1, check_d2, check_d3, check_d4, check_lambda_sigma_commute, classify_scalar_unit_families,
};
use crate::exactlin::coherence::check_base;
use crate::exactlin::graded::{GradedMap, GradedObject};
use crate::laxfun::{check_functoriality, check_lax_axioms, check_laxator_naturality, check_slambda, check_ssigma, check_triple_strictness};
use crate::report::{CheckBudget, CheckReport, Coverage, Witness};
use crate::transform::{
    check_horizontal_strictness, check_horizontal_well_defined, check_interchange, check_lambda_conjugation,
    check_monoidal, check_naturality,
};
use crate::twist::{check_idempotent_axiom, invertibility_test, search_structural_idempotents, FamilyRef, IdempotentAxiom};

use super::scenario::{AxiomId, FamilyChoice, HarnessError, PlannedCheck, Scenario, Target};

/// One executed check and the key it is reported under (its label, or its axiom id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    pub key: String,
    pub report: CheckReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Scenario {
    pub fn budget(&self) -> CheckBudget {
        CheckBudget::default().with_seed(self.seed).with_samples(self.samples)
    }
}

/// Runs the checks in declared order. With `fail_fast`, stops after the first fail verdict.
pub fn run_suite(scenario: &Scenario, fail_fast: bool) -> Result<Vec<SuiteEntry>, HarnessError> {
    let budget = scenario.budget();
    let mut out = Vec::new();
    for p in &scenario.checks {
        let mut report = run_check(p, &budget)?;
        report.axiom = p.axiom_id.clone();
        let failed = !report.passed();
        out.push(SuiteEntry { key: p.key.clone(), report });
        if failed && fail_fast {
            break;
        }
    }
    Ok(out)
}

fn missing_target(p: &PlannedCheck) -> crate::Error {
    crate::Error::InvalidArgument(format!("{} was planned without its target", p.axiom_id))
}

pub fn run_check(p: &PlannedCheck, budget: &CheckBudget) -> crate::Result<CheckReport> {
    let env = &p.env;
    let ds = &*env.ds;
    match (p.axiom, &p.target) {
        (AxiomId::Pentagon, _) => Ok(check_base(ds.field, &ds.universe, budget)?.swap_remove(0)),
        (AxiomId::Triangle, _) => Ok(check_base(ds.field, &ds.universe, budget)?.swap_remove(1)),
        (AxiomId::D1, _) => check_d1(ds, budget),
        (AxiomId::D2, _) => check_d2(ds, budget),
        (AxiomId::D3, _) => check_d3(ds, budget),
        (AxiomId::D4, _) => check_d4(ds, budget),
        (AxiomId::LambdaSigma, _) => check_lambda_sigma_commute(ds, budget),
        (AxiomId::Idempotent(a), _) => {
            let e = env.idempotent.as_ref().ok_or_else(|| missing_target(p))?;
            check_idempotent_axiom(e, Some(&env.braiding), a, &ds.universe, budget)
        }
        (AxiomId::Invertibility, Target::Family(choice)) => {
            let family = match choice {
                FamilyChoice::Sigma => FamilyRef::Binary(&ds.sigma),
                FamilyChoice::Braiding => FamilyRef::Binary(&env.braiding),
                FamilyChoice::Idempotent => FamilyRef::Idempotent(env.idempotent.as_ref().ok_or_else(|| missing_target(p))?),
            };
            Ok(invertibility_test(family, &ds.universe)?.to_check_report(&p.axiom_id))
        }
        (AxiomId::UnitClassification, _) => {
            let found = classify_scalar_unit_families(ds.field)?;
            let list: Vec<String> = found.iter().map(ToString::to_string).collect();
            let coverage = Coverage { notes: vec![format!("scalar unit families: [{}]", list.join(", "))], ..Coverage::default() };
            if found.len() == 1 && found[0].is_one() {
                Ok(CheckReport::pass(&p.axiom_id, coverage))
            } else {
                let note = format!("nontrivial scalar unit families over {}", ds.field);
                Ok(CheckReport::fail(&p.axiom_id, coverage, Witness::note(vec![], vec![], note)))
            }
        }
        (AxiomId::SearchIdempotents, _) => {
            let rows = search_structural_idempotents(ds.grading, &env.braiding, ds.field, &ds.universe, budget)?;
            let mut coverage = Coverage::default();
            let mut survivors = Vec::new();
            for row in &rows {
                let verdicts: Vec<String> = row.reports.iter().map(|r| format!("{} {}", r.axiom, r.verdict)).collect();
                coverage.notes.push(format!("c11={}: {}", row.c11, verdicts.join(", ")));
                for r in &row.reports {
                    coverage.object_tuples += r.coverage.object_tuples;
                    coverage.available_tuples += r.coverage.available_tuples;
                }
                if [IdempotentAxiom::E0, IdempotentAxiom::E1, IdempotentAxiom::BL].into_iter().all(|a| row.passes(a)) {
                    survivors.push(row.c11.clone());
                }
            }
            if survivors.len() == 1 && survivors[0].is_one() {
                Ok(CheckReport::pass(&p.axiom_id, coverage))
            } else {
                let list: Vec<String> = survivors.iter().map(ToString::to_string).collect();
                let note = format!("E0, E1, BL jointly hold for c11 in [{}]", list.join(", "));
                Ok(CheckReport::fail(&p.axiom_id, coverage, Witness::note(vec![], vec![], note)))
            }
        }
        (AxiomId::LaxAxioms, Target::Functor(f)) => check_lax_axioms(f, budget),
        (AxiomId::SLambda, Target::Functor(f)) => check_slambda(f, budget),
        (AxiomId::Ssigma, Target::Functor(f)) => check_ssigma(f, budget),
        (AxiomId::Functoriality, Target::Functor(f)) => check_functoriality(f, budget),
        (AxiomId::LaxatorNaturality, Target::Functor(f)) => check_laxator_naturality(f, budget),
        (AxiomId::TripleStrictness, Target::Functors(fs)) => check_triple_strictness(&fs[0], &fs[1], &fs[2], budget),
        (AxiomId::Monoidal, Target::Transformation(t)) => check_monoidal(t, budget),
        (AxiomId::LambdaConjugation, Target::Transformation(t)) => check_lambda_conjugation(t, budget),
        (AxiomId::Naturality, Target::Transformation(t)) => check_naturality(t, budget),
        (AxiomId::HorizontalWellDefined, Target::Pair(cells)) => check_horizontal_well_defined(&cells[0], &cells[1], budget),
        (AxiomId::Interchange, Target::Cells(c)) => check_interchange(&c[0], &c[1], &c[2], &c[3], budget),
        (AxiomId::HorizontalStrictness, Target::Chains(chains)) => check_horizontal_strictness(chains, budget),
        _ => Err(missing_target(p)),
    }
}

fn object_value(x: &GradedObject) -> Value {
    Value::Object(x.dims().iter().map(|(d, n)| (d.to_string(), json!(n))).collect())
}

fn map_value(m: &GradedMap) -> Value {
    let blocks: Map<String, Value> = m
        .blocks()
        .iter()
        .map(|(d, b)| {
            let rows: Vec<Value> =
                b.to_dense().iter().map(|r| Value::Array(r.iter().map(|s| json!(s.to_string())).collect())).collect();
            (d.to_string(), Value::Array(rows))
        })
        .collect();
    json!({ "source": object_value(m.source()), "target": object_value(m.target()), "blocks": blocks })
}

fn witness_value(w: &Witness) -> Value {
    let mut v = Map::new();
    v.insert("objects".into(), Value::Array(w.objects.iter().map(object_value).collect()));
    v.insert("degrees".into(), json!(w.degrees));
    if !w.inputs.is_empty() {
        v.insert("inputs".into(), Value::Array(w.inputs.iter().map(map_value).collect()));
    }
    if let Some(note) = &w.note {
        v.insert("note".into(), json!(note));
    }
    if let Some(c) = &w.comparison {
        let d = &c.difference;
        v.insert("lhs".into(), map_value(&c.lhs));
        v.insert("rhs".into(), map_value(&c.rhs));
        v.insert(
            "first_difference".into(),
            json!({ "degree": d.degree, "row": d.row, "col": d.col, "lhs": d.left.to_string(), "rhs": d.right.to_string() }),
        );
    }
    Value::Object(v)
}

fn coverage_value(c: &Coverage) -> Value {
    json!({
        "object_tuples": c.object_tuples,
        "available_tuples": c.available_tuples,
        "sampled_maps": c.sampled_maps,
        "notes": c.notes,
    })
}

pub fn entry_value(e: &SuiteEntry) -> Value {
    let r = &e.report;
    let mut v = Map::new();
    v.insert("axiom".into(), json!(r.axiom));
    if e.key != r.axiom {
        v.insert("label".into(), json!(e.key));
    }
    v.insert("verdict".into(), json!(r.verdict.as_str()));
    v.insert("coverage".into(), coverage_value(&r.coverage));
    if let Some(w) = &r.witness {
        v.insert("witness".into(), witness_value(w));
    }
    Value::Object(v)
}

pub fn report_value(scenario_hash: &str, seed: u64, entries: &[SuiteEntry]) -> Value {
    json!({
        "scenario_hash": scenario_hash,
        "seed": seed,
        "checks": entries.iter().map(entry_value).collect::<Vec<_>>(),
    })
}

fn objects_text(objs: &[GradedObject]) -> String {
    objs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ⊗ ")
}

fn map_text(m: &GradedMap) -> String {
    let blocks: Vec<String> = m.blocks().iter().map(|(d, b)| format!("{d}: {b}")).collect();
    if blocks.is_empty() {
        "0".into()
    } else {
        blocks.join(" | ")
    }
}

pub fn entry_text(e: &SuiteEntry) -> String {
    let r = &e.report;
    let c = &r.coverage;
    let mut s = format!("{:<28} {:<4}  tuples {}/{}", e.key, r.verdict.as_str(), c.object_tuples, c.available_tuples);
    if c.sampled_maps > 0 {
        s.push_str(&format!("  maps {}", c.sampled_maps));
    }
    s.push('\n');
    for n in &c.notes {
        s.push_str(&format!("    note: {n}\n"));
    }
    if let Some(w) = &r.witness {
        if !w.objects.is_empty() {
            s.push_str(&format!("    witness: {}\n", objects_text(&w.objects)));
        }
        if !w.degrees.is_empty() {
            let d: Vec<String> = w.degrees.iter().map(ToString::to_string).collect();
            s.push_str(&format!("    degrees: ({})\n", d.join(", ")));
        }
        if let Some(note) = &w.note {
            s.push_str(&format!("    {note}\n"));
        }
        for (i, m) in w.inputs.iter().enumerate() {
            s.push_str(&format!("    input {i}: {}\n", map_text(m)));
        }
        if let Some(cmp) = &w.comparison {
            let d = &cmp.difference;
            s.push_str(&format!(
                "    first difference at degree {} entry ({}, {}): lhs {} vs rhs {}\n",
                d.degree, d.row, d.col, d.left, d.right
            ));
            s.push_str(&format!("    lhs: {}\n    rhs: {}\n", map_text(&cmp.lhs), map_text(&cmp.rhs)));
        }
    }
    s
}

/// Renders a report. JSON output is `{scenario_hash, seed, checks}` with sorted keys.
pub fn emit_report(scenario_hash: &str, seed: u64, entries: &[SuiteEntry], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_value(scenario_hash, seed, entries)).expect("json");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("scenario {scenario_hash}\nseed {seed}\n");
            for e in entries {
                s.push_str(&entry_text(e));
            }
            s
        }
    }
}
