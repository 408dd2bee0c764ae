//! Exact computations for finite and abelian topological field theories.

pub mod abgroup;
pub mod arith;
pub mod dw;
pub mod error;
pub mod exactnum;
pub mod groupoid;
pub mod lattice;
pub mod linalg;
pub mod metric;
pub mod monomial;
pub mod scalar;
pub mod tqft3;
pub mod tqft4;

pub use error::{Error, Result};

/// Exact rational numbers used throughout.
pub type Rational = num_rational::BigRational;
/// Cyclotomic numbers with exact rational coefficients.
pub type Cyclo = exactnum::CycloValue<Rational>;

/// Library version, embedded in command-line outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
