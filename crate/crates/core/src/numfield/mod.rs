//! Exact arithmetic over ℚ and the class-number-one imaginary quadratic
//! fields, with places, valuations and normalized absolute values.

mod element;
mod ideal;
mod place;

pub use element::{rational_to_f64, FieldElement};
pub use ideal::{ideal_norm, principal_generator, IdealBasis};
pub use place::{
    canonical_associate, decompose_prime, normalized_log_abs, places_dividing, product_formula_defect, valuation, Place,
    PlaceKind, Splitting,
};

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{rat, rat_frac};
use crate::error::{Error, Result};

/// The nine squarefree `m` with `ℚ(√−m)` of class number one.
pub const CLASS_NUMBER_ONE: [u32; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// Base field `k`: either ℚ or `ℚ(√−m)` with class number one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseField {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "imag_quadratic")]
    ImagQuadratic(u32),
}

impl BaseField {
    pub fn imag_quadratic(m: u32) -> Result<Self> {
        let field = BaseField::ImagQuadratic(m);
        field.validate()?;
        Ok(field)
    }

    pub fn gaussian() -> Self {
        BaseField::ImagQuadratic(1)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BaseField::Rationals => Ok(()),
            BaseField::ImagQuadratic(m) if CLASS_NUMBER_ONE.contains(m) => Ok(()),
            BaseField::ImagQuadratic(m) => Err(Error::UnsupportedField(format!(
                "Q(sqrt(-{m})) is not one of the class-number-one fields {CLASS_NUMBER_ONE:?}"
            ))),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            BaseField::Rationals => 1,
            BaseField::ImagQuadratic(_) => 2,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, BaseField::Rationals)
    }

    /// Field discriminant (1 for ℚ).
    pub fn discriminant(&self) -> i64 {
        match *self {
            BaseField::Rationals => 1,
            BaseField::ImagQuadratic(m) if m % 4 == 3 => -(m as i64),
            BaseField::ImagQuadratic(m) => -4 * m as i64,
        }
    }

    /// `(t, c)` with `ω² = t·ω + c`.
    pub(crate) fn omega_relation(&self) -> (i64, BigRational) {
        match *self {
            BaseField::Rationals => (0, rat(0)),
            BaseField::ImagQuadratic(m) if m % 4 == 3 => (1, rat_frac(-(1 + m as i64), 4)),
            BaseField::ImagQuadratic(m) => (0, rat(-(m as i64))),
        }
    }

    /// `(t, c)` as integers; `c` is integral for every supported field.
    pub(crate) fn omega_relation_int(&self) -> (i64, i64) {
        match *self {
            BaseField::Rationals => (0, 0),
            BaseField::ImagQuadratic(m) if m % 4 == 3 => (1, -(1 + m as i64) / 4),
            BaseField::ImagQuadratic(m) => (0, -(m as i64)),
        }
    }

    /// Description of the ℤ-basis `{1, ω}` of the ring of integers.
    pub fn ring_of_integers_basis(&self) -> String {
        match *self {
            BaseField::Rationals => "{1}".to_string(),
            BaseField::ImagQuadratic(m) if m % 4 == 3 => format!("{{1, (1+sqrt(-{m}))/2}}"),
            BaseField::ImagQuadratic(m) => format!("{{1, sqrt(-{m})}}"),
        }
    }

    /// Complex embedding of `ω`.
    pub fn omega_complex(&self) -> (f64, f64) {
        match *self {
            BaseField::Rationals => (0.0, 0.0),
            BaseField::ImagQuadratic(m) if m % 4 == 3 => (0.5, (m as f64).sqrt() / 2.0),
            BaseField::ImagQuadratic(m) => (0.0, (m as f64).sqrt()),
        }
    }

    /// The unit group of the ring of integers.
    pub fn units(&self) -> Vec<FieldElement> {
        let f = *self;
        let mut units = vec![FieldElement::from_int(f, 1), FieldElement::from_int(f, -1)];
        match *self {
            BaseField::ImagQuadratic(1) => {
                let w = FieldElement::omega(f);
                units.push(w.clone());
                units.push(-w);
            }
            BaseField::ImagQuadratic(3) => {
                let w = FieldElement::omega(f);
                let w2 = &w * &w;
                units.push(w.clone());
                units.push(-w);
                units.push(w2.clone());
                units.push(-w2);
            }
            _ => {}
        }
        units
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::ImagQuadratic(m) => write!(f, "Q(sqrt(-{m}))"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supported_fields() {
        for m in CLASS_NUMBER_ONE {
            assert!(BaseField::imag_quadratic(m).is_ok());
        }
        assert!(matches!(
            BaseField::imag_quadratic(5),
            Err(Error::UnsupportedField(_))
        ));
        assert_eq!(BaseField::Rationals.degree(), 1);
        assert_eq!(BaseField::gaussian().degree(), 2);
        assert_eq!(BaseField::gaussian().discriminant(), -4);
        assert_eq!(BaseField::ImagQuadratic(7).discriminant(), -7);
    }

    #[test]
    fn unit_groups() {
        assert_eq!(BaseField::Rationals.units().len(), 2);
        assert_eq!(BaseField::gaussian().units().len(), 4);
        assert_eq!(BaseField::ImagQuadratic(3).units().len(), 6);
        assert_eq!(BaseField::ImagQuadratic(163).units().len(), 2);
        for f in [BaseField::gaussian(), BaseField::ImagQuadratic(3)] {
            for u in f.units() {
                assert_eq!(u.norm(), rat(1));
            }
        }
    }

    #[test]
    fn serde_names() {
        assert_eq!(serde_json::to_string(&BaseField::Rationals).unwrap(), "\"Q\"");
        assert_eq!(
            serde_json::to_string(&BaseField::gaussian()).unwrap(),
            "{\"imag_quadratic\":1}"
        );
    }
}
