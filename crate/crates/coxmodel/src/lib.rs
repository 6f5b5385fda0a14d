//! Exact characters of the classical Weyl groups, characters of model
//! triples, perfect-model classification and a brute-force group oracle.

pub mod char_ring;
pub mod classification;
pub mod error;
pub mod induction;
pub mod lr;
pub mod model_index;
pub mod oracle;
pub mod partitions;
pub mod scalar;

pub use error::{CoxError, Result};
pub use scalar::{IntClassFunction, Rational, Scalar};
