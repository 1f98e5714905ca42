//! Skew group algebras of twisted differential operators localized at a
//! hyperplane arrangement.

mod localized;
mod skew;

pub use crate::poly::{Monomial, MultiPoly};
pub use localized::{Arrangement, LocalizedCoeff, LocalizedSum};
pub use skew::{SkewAlgebra, SkewOp, TwistData};
