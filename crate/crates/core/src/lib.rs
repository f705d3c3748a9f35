//! Exact ideal arithmetic, sifting sums, the Buchstab function, sieve
//! constants, weight audits and restricted Diophantine approximation in
//! quadratic fields of class number one.

pub mod approx;
pub mod arith;
pub mod buchstab;
pub mod constants;
pub mod error;
pub mod field;
pub mod ideals;
pub mod precision;
pub mod quad;
pub mod sieve;
pub mod special;
pub mod weights;

pub use error::{Error, Result};
pub use field::{AlgInt, FieldSpec};

/// Library version, embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
