//! The builtin scenario catalog and its expected-verdict table.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::report::Verdict;

use super::scenario::{parse_scenario, HarnessError, Scenario};
use super::suite::{entry_text, entry_value, run_suite, Format, SuiteEntry};

pub const BUILTIN_SOURCES: [(&str, &str); 8] = [
    ("example-5-1", include_str!("../../scenarios/example-5-1.json")),
    ("example-5-3", include_str!("../../scenarios/example-5-3.json")),
    ("example-5-4", include_str!("../../scenarios/example-5-4.json")),
    ("example-5-5", include_str!("../../scenarios/example-5-5.json")),
    ("prop-6-2", include_str!("../../scenarios/prop-6-2.json")),
    ("remark-2-3", include_str!("../../scenarios/remark-2-3.json")),
    ("thm-4-1", include_str!("../../scenarios/thm-4-1.json")),
    ("search-parity-idempotents", include_str!("../../scenarios/search-parity-idempotents.json")),
];

const GOLDEN: &str = include_str!("../../scenarios/golden.json");

pub fn builtin_examples() -> Result<Vec<(String, Scenario)>, HarnessError> {
    BUILTIN_SOURCES
        .iter()
        .map(|(name, text)| {
            parse_scenario(text)
                .map(|s| (name.to_string(), s))
                .map_err(|e| HarnessError::Parse(format!("builtin {name}: {e}")))
        })
        .collect()
}

/// Expected verdicts: scenario name → check key → verdict.
pub fn golden_table() -> BTreeMap<String, BTreeMap<String, Verdict>> {
    let raw: BTreeMap<String, BTreeMap<String, String>> = serde_json::from_str(GOLDEN).expect("golden table parses");
    raw.into_iter()
        .map(|(name, checks)| {
            let checks = checks
                .into_iter()
                .map(|(k, v)| {
                    let v = match v.as_str() {
                        "pass" => Verdict::Pass,
                        "fail" => Verdict::Fail,
                        other => panic!("golden verdict {other:?}"),
                    };
                    (k, v)
                })
                .collect();
            (name, checks)
        })
        .collect()
}

/// Keys whose verdict differs from the table, or that the table does not list.
pub fn deviations(expected: Option<&BTreeMap<String, Verdict>>, entries: &[SuiteEntry]) -> Vec<String> {
    let mut out = Vec::new();
    for e in entries {
        match expected.and_then(|t| t.get(&e.key)) {
            Some(v) if *v == e.report.verdict => {}
            Some(v) => out.push(format!("{}: expected {v}, got {}", e.key, e.report.verdict)),
            None => out.push(format!("{}: not in the expected-verdict table", e.key)),
        }
    }
    if let Some(t) = expected {
        for k in t.keys() {
            if !entries.iter().any(|e| &e.key == k) {
                out.push(format!("{k}: expected but not run"));
            }
        }
    }
    out
}

pub struct ExamplesRun {
    pub document: String,
    pub all_match: bool,
}

/// Runs the whole catalog, compares against the expected-verdict table, and renders the result.
pub fn run_examples(seed: Option<u64>, format: Format) -> Result<ExamplesRun, HarnessError> {
    let golden = golden_table();
    let mut all_match = true;
    let mut values = Vec::new();
    let mut text = String::new();
    for (name, mut scenario) in builtin_examples()? {
        if let Some(s) = seed {
            scenario.seed = s;
        }
        let entries = run_suite(&scenario, false)?;
        let dev = deviations(golden.get(&name), &entries);
        all_match &= dev.is_empty();
        match format {
            Format::Json => values.push(json!({
                "name": name,
                "scenario_hash": scenario.hash,
                "seed": scenario.seed,
                "checks": entries.iter().map(entry_value).collect::<Vec<_>>(),
                "deviations": dev,
            })),
            Format::Text => {
                text.push_str(&format!("== {name} (seed {}) ==\n", scenario.seed));
                for e in &entries {
                    text.push_str(&entry_text(e));
                }
                if dev.is_empty() {
                    text.push_str("expected verdicts: all match\n\n");
                } else {
                    for d in &dev {
                        text.push_str(&format!("DEVIATION {d}\n"));
                    }
                    text.push('\n');
                }
            }
        }
    }
    let document = match format {
        Format::Json => {
            let doc: Value = json!({ "scenarios": values, "all_match": all_match });
            let mut s = serde_json::to_string_pretty(&doc).expect("json");
            s.push('\n');
            s
        }
        Format::Text => text,
    };
    Ok(ExamplesRun { document, all_match })
}
