//! Scenario ingestion, sampling, universes, report rendering, and the builtin catalog.

pub mod builtin;
pub mod sampler;
pub mod scenario;
pub mod suite;
pub mod universe;

pub use builtin::{builtin_examples, golden_table, run_examples};
pub use scenario::{load_scenario, parse_scenario, HarnessError, Scenario};
pub use suite::{emit_report, run_suite, Format, SuiteEntry};
