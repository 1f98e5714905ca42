//! Filtered operator algebras for complex reflection groups over cyclotomic fields,
//! with p-adic completions of rational Cherednik algebras.

pub mod cherednik;
pub mod error;
pub mod expr;
pub mod opalg;
pub mod padic;
pub mod poly;
pub mod refgroup;
pub mod sample;
pub mod scalars;
pub mod tdo;

pub use error::{Error, Result};
pub use poly::{Monomial, MultiPoly};
pub use scalars::{FieldSpec, Scalar, TruncatedPadic, Valuation};
