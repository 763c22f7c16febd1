//! Heights, proximity functions and Runge-type integrality experiments over
//! ℚ and imaginary quadratic fields, with an exact constructive engine for
//! generalized GCD bounds on projective space.

pub mod arith;
pub mod error;
pub mod experiments;
pub mod gcdbound;
pub mod geometry;
pub mod heights;
pub mod linalg;
pub mod numfield;
pub mod points;

pub use error::{Error, Result};
