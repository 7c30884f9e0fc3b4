//! Distortion data (σ, Λ) and the axioms (D1)–(D4).

pub mod checks;
pub mod families;

pub use checks::{
    check_d1, check_d2, check_d3, check_d4, check_lambda_sigma_commute, classify_scalar_unit_families,
};
pub use families::{BinaryFamily, DistortedStructure, PairScalars, PairTable, SignRule, UnitFamily};
