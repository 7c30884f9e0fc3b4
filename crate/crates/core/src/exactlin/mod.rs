//! Exact scalars and graded linear algebra.

pub mod coherence;
pub mod graded;
pub mod matrix;
pub mod scalar;
pub mod word;

pub use coherence::{associator, associator_inv, check_base, left_unitor, right_unitor};
pub use graded::{compose, compose_all, tensor_map, tensor_obj, Degree, GradedMap, GradedObject, Grading};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
