use distmon::harness::builtin::{deviations, BUILTIN_SOURCES};
use distmon::harness::scenario::parse_scenario;
use distmon::harness::suite::run_check;
use distmon::harness::{builtin_examples, emit_report, golden_table, load_scenario, run_suite, Format, HarnessError};
use distmon::report::Verdict;
use serde_json::{json, Value};

fn base() -> Value {
    json!({
        "field": "rational",
        "grading": "parity",
        "universe": [{"0": 1}, {"1": 1}, {"0": 1, "1": 1}],
        "closure_depth": 2,
        "sigma": "koszul",
        "lambda": "identity",
        "checks": ["D1", "D3"],
        "seed": 0,
        "samples": 2
    })
}

fn key_of(v: Value) -> String {
    match parse_scenario(&v.to_string()) {
        Err(HarnessError::Validation { key, .. }) => key,
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn well_formed_scenario_loads() {
    let s = parse_scenario(&base().to_string()).unwrap();
    assert_eq!(s.checks.len(), 2);
    assert_eq!(s.checks[0].env.ds.universe.len(), 3);
}

#[test]
fn missing_seed_names_the_key() {
    let mut v = base();
    v.as_object_mut().unwrap().remove("seed");
    assert_eq!(key_of(v), "seed");
}

#[test]
fn shallow_closure_rejects_ternary_checks() {
    let mut v = base();
    v["closure_depth"] = json!(0);
    assert_eq!(key_of(v.clone()), "closure_depth");
    v["checks"] = json!(["BL"]);
    v["idempotent"] = json!("parity_projector");
    assert_eq!(key_of(v.clone()), "closure_depth");
    v["checks"] = json!(["E0"]);
    assert!(parse_scenario(&v.to_string()).is_ok());
    v["closure_depth"] = json!(3);
    assert_eq!(key_of(v), "closure_depth");
}

#[test]
fn unknown_keys_are_rejected() {
    let mut v = base();
    v["colour"] = json!("blue");
    assert_eq!(key_of(v), "colour");
    let mut v = base();
    v["checks"] = json!([{"axiom": "D1", "extra": 1}]);
    assert!(key_of(v).starts_with("checks[0]"));
}

#[test]
fn bad_values_name_their_location() {
    let mut v = base();
    v["checks"] = json!(["D9"]);
    assert_eq!(key_of(v), "checks[0].axiom");
    let mut v = base();
    v["lambda"] = json!({"character": "1/0"});
    assert_eq!(key_of(v), "lambda");
    let mut v = base();
    v["universe"] = json!([{"0": 1}, {"2": 1}]);
    assert_eq!(key_of(v), "universe[1]");
    let mut v = base();
    v["seed"] = json!("zero");
    assert_eq!(key_of(v), "seed");
    let mut v = base();
    v["field"] = json!({"prime": 4});
    assert_eq!(key_of(v), "field");
    let mut v = base();
    v["checks"] = json!([{"axiom": "lax_axioms"}]);
    assert_eq!(key_of(v), "checks[0].functor");
    let mut v = base();
    v["checks"] = json!([{"axiom": "lax_axioms", "functor": "F"}]);
    assert_eq!(key_of(v), "checks[0].functor");
    let mut v = base();
    v["checks"] = json!(["D1", "D1"]);
    assert_eq!(key_of(v), "checks[1].axiom");
    let mut v = base();
    v["checks"] = json!(["E0"]);
    assert_eq!(key_of(v), "idempotent");
}

#[test]
fn functor_definitions_are_validated() {
    let mut v = base();
    v["grading"] = json!("nat");
    v["universe"] = json!({"max_degree": 2, "max_dim": 1, "max_support": 1});
    v["sigma"] = json!("symmetric");
    v["functors"] = json!({"loop": {"compose": ["loop", "loop"]}});
    v["checks"] = json!([{"axiom": "lax_axioms", "functor": "loop"}]);
    assert_eq!(key_of(v.clone()), "functors.loop");
    v["functors"] = json!({"U": "collapse", "t": {"truncation": 1}, "bad": {"compose": ["t", "U"]}});
    v["checks"] = json!([{"axiom": "lax_axioms", "functor": "bad"}]);
    // truncation cannot act on the ungraded target of the collapse
    assert_eq!(key_of(v.clone()), "functors.t");
    v["grading"] = json!("parity");
    v["universe"] = json!([{"0": 1}]);
    v["checks"] = json!([{"axiom": "lax_axioms", "functor": "t"}]);
    assert_eq!(key_of(v), "functors.t");
}

#[test]
fn malformed_json_is_a_parse_error() {
    assert!(matches!(parse_scenario("{"), Err(HarnessError::Parse(_))));
    assert!(matches!(load_scenario(std::path::Path::new("/nonexistent.json")), Err(HarnessError::Parse(_))));
}

#[test]
fn scenario_files_load_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, base().to_string()).unwrap();
    let s = load_scenario(&path).unwrap();
    assert_eq!(s.hash.len(), 64);
}

#[test]
fn hash_ignores_formatting_but_not_content() {
    let a = parse_scenario(&base().to_string()).unwrap();
    let b = parse_scenario(&serde_json::to_string_pretty(&base()).unwrap()).unwrap();
    assert_eq!(a.hash, b.hash);
    let mut v = base();
    v["samples"] = json!(3);
    assert_ne!(parse_scenario(&v.to_string()).unwrap().hash, a.hash);
}

#[test]
fn empty_report_has_empty_checks() {
    let doc: Value = serde_json::from_str(&emit_report("h", 5, &[], Format::Json)).unwrap();
    assert_eq!(doc, json!({"scenario_hash": "h", "seed": 5, "checks": []}));
}

#[test]
fn witness_scalars_are_exact_strings() {
    let mut v = base();
    v["checks"] = json!([{"axiom": "D1", "sigma": {"table": [{"x": {"1": 1}, "y": {"1": 1}, "blocks": {"0": [["1/2"]]}}]}}]);
    v["universe"] = json!([{"1": 1}]);
    v["closure_depth"] = json!(1);
    let s = parse_scenario(&v.to_string()).unwrap();
    let entries = run_suite(&s, false).unwrap();
    assert!(entries[0].report.passed());

    let mut v = base();
    v["grading"] = json!("nat");
    v["sigma"] = json!("symmetric");
    v["universe"] = json!([{"1": 1}]);
    v["lambda"] = json!({"table": [1, "-1/2", 0]});
    v["checks"] = json!(["D4"]);
    let s = parse_scenario(&v.to_string()).unwrap();
    let entries = run_suite(&s, false).unwrap();
    let doc: Value = serde_json::from_str(&emit_report(&s.hash, s.seed, &entries, Format::Json)).unwrap();
    let d = &doc["checks"][0]["witness"]["first_difference"];
    assert_eq!(d["lhs"], json!("0"));
    assert_eq!(d["rhs"], json!("1/4"));
}

#[test]
fn builtin_catalog_matches_expected_verdicts() {
    let examples = builtin_examples().unwrap();
    assert_eq!(examples.len(), 8);
    let golden = golden_table();
    assert_eq!(golden.len(), 8);
    for (name, s) in &examples {
        let entries = run_suite(s, false).unwrap();
        assert!(deviations(golden.get(name), &entries).is_empty(), "{name}");
    }
    assert!(golden["thm-4-1"].values().all(|v| *v == Verdict::Pass));
    assert_eq!(BUILTIN_SOURCES.len(), 8);
}

#[test]
fn example_5_3_verdict_table() {
    let (_, s) = builtin_examples().unwrap().into_iter().find(|(n, _)| n == "example-5-3").unwrap();
    let entries = run_suite(&s, false).unwrap();
    let verdict = |k: &str| entries.iter().find(|e| e.key == k).unwrap().report.verdict;
    for k in ["E0", "E1", "E2L_cocycle", "E2R_cocycle"] {
        assert_eq!(verdict(k), Verdict::Pass, "{k}");
    }
    for k in ["E2L", "E2R", "BL", "BR"] {
        assert_eq!(verdict(k), Verdict::Fail, "{k}");
    }
    let bl = entries.iter().find(|e| e.key == "BL").unwrap().report.witness.clone().unwrap();
    assert_eq!(bl.degrees, vec![1, 1, 0]);
}

#[test]
fn fail_fast_stops_at_first_failure() {
    let (_, s) = builtin_examples().unwrap().into_iter().find(|(n, _)| n == "example-5-3").unwrap();
    let entries = run_suite(&s, true).unwrap();
    assert_eq!(entries.last().unwrap().key, "E2L");
    assert_eq!(entries.len(), 5);
}

/// Every witness, replayed on a universe made of its own objects, fails again.
#[test]
fn witnesses_replay() {
    for (name, s) in builtin_examples().unwrap() {
        let entries = run_suite(&s, false).unwrap();
        for (p, e) in s.checks.iter().zip(&entries) {
            let Some(w) = &e.report.witness else { continue };
            if w.objects.is_empty() || !matches!(p.target, distmon::harness::scenario::Target::None | distmon::harness::scenario::Target::Family(_)) {
                continue;
            }
            let mut p = p.clone();
            let ds = p.env.ds.with_universe(w.objects.clone()).unwrap();
            p.env.ds = std::sync::Arc::new(ds);
            let replay = run_check(&p, &s.budget()).unwrap();
            assert!(!replay.passed(), "{name}/{}", e.key);
            assert_eq!(replay.witness.as_ref().unwrap().degrees, w.degrees, "{name}/{}", e.key);
        }
    }
}
