//! Homogeneous forms, projective points, divisors and zero-cycles on `ℙⁿ`,
//! with exact intersection on `ℙ¹`/`ℙ²` and normal-crossings checks.

pub mod algebraic;
pub mod cycle;
pub mod divisor;
pub mod form;
pub mod intersect;
pub mod point;
pub mod poly;
pub mod roots;
pub mod snc;

pub use cycle::{chordal_distance, monomial_basis, ExactOrbit, Orbit, ZeroCycle};
pub use divisor::{Component, Divisor, Variety};
pub use form::{FormSpec, HomogeneousForm, TermSpec};
pub use intersect::intersect_zero_cycle;
pub use point::ProjectivePoint;
pub use snc::{snc_check, SncFailure, SncReport};

use crate::error::Result;
use crate::numfield::FieldElement;

/// `f(x)` at the stored representative of `x`.
pub fn evaluate(f: &HomogeneousForm, x: &ProjectivePoint) -> Result<FieldElement> {
    f.evaluate(x.coords())
}

/// `∂^α f`, or `None` when it vanishes identically.
pub fn derivative(f: &HomogeneousForm, alpha: &[u32]) -> Option<HomogeneousForm> {
    f.derivative(alpha)
}
