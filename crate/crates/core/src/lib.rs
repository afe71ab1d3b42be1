//! Exact class numbers of Eichler orders in totally definite quaternion
//! algebras over Q and real quadratic fields, computed fiber by fiber over
//! the narrow class group and checked against a Brandt-style enumeration
//! over Q.

pub mod arith;
pub mod brandt;
pub mod classnumbers;
pub mod cmorders;
pub mod error;
pub mod numberfield;
pub mod quatalg;
pub mod selectivity;

pub use error::{Error, Result};

/// Exact integer scalar used throughout.
pub type Int = num_bigint::BigInt;
/// Exact rational scalar used throughout.
pub type Rat = num_rational::BigRational;
pub use arith::lattice::Lattice;
