use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numfield::{canonical_associate, principal_generator, BaseField, FieldElement};

/// A point of `ℙⁿ(k)`.
///
/// Points built with [`ProjectivePoint::new`] are stored in normal form:
/// integral coordinates generating the unit ideal, with the first nonzero
/// coordinate a canonical associate (positive over ℚ).
/// [`ProjectivePoint::from_representative`] keeps the given coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    field: BaseField,
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<FieldElement>) -> Result<Self> {
        Ok(Self::from_representative(coords)?.normalized())
    }

    pub fn from_representative(coords: Vec<FieldElement>) -> Result<Self> {
        let Some(first) = coords.first() else {
            return Err(Error::InvalidInput("a point needs at least one coordinate".into()));
        };
        let field = first.field();
        if coords.iter().any(|c| c.field() != field) {
            return Err(Error::InvalidInput("coordinates from different fields".into()));
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput("all coordinates are zero".into()));
        }
        Ok(ProjectivePoint { field, coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| FieldElement::from_int(BaseField::Rationals, c)).collect())
    }

    pub fn from_rationals(coords: &[BigRational]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|c| FieldElement::from_rational(BaseField::Rationals, c.clone()))
                .collect(),
        )
    }

    /// Parses `"(a:b:c)"` or `"a,b,c"` with coordinates in `field`.
    pub fn parse(field: BaseField, s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let sep = if inner.contains(':') { ':' } else { ',' };
        let coords = inner
            .split(sep)
            .map(|c| FieldElement::parse(field, c.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn normalized(&self) -> Self {
        let c = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator()));
        let cr = BigRational::from_integer(c);
        let mut coords: Vec<FieldElement> = self.coords.iter().map(|x| x.scale(&cr)).collect();
        let g = principal_generator(self.field, &coords).expect("point has a nonzero coordinate");
        if !g.is_one() {
            coords = coords
                .iter()
                .map(|x| x.exact_quotient(&g).expect("generator divides every coordinate"))
                .collect();
        }
        let lead = coords.iter().find(|x| !x.is_zero()).expect("nonzero coordinate");
        let unit = &canonical_associate(lead) / lead;
        if !unit.is_one() {
            coords = coords.iter().map(|x| x * &unit).collect();
        }
        ProjectivePoint { field: self.field, coords }
    }

    /// Multiplies the representative by `λ ≠ 0`.
    pub fn scaled(&self, lambda: &FieldElement) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::InvalidInput("scaling by zero".into()));
        }
        Ok(ProjectivePoint { field: self.field, coords: self.coords.iter().map(|x| x * lambda).collect() })
    }

    pub fn projectively_equal(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }

    /// Integer coordinates of a normalized point over ℚ that fit in `i64`.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        if !self.field.is_rational() {
            return None;
        }
        self.coords
            .iter()
            .map(|c| if c.a().is_integer() { i64::try_from(c.a().numer()).ok() } else { None })
            .collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coords
            .iter()
            .map(|c| {
                let (re, im) = c.to_complex();
                Complex64::new(re, im)
            })
            .collect()
    }

    pub fn conj(&self) -> Self {
        ProjectivePoint { field: self.field, coords: self.coords.iter().map(|c| c.conj()).collect() }
    }

    /// Multiplicative height `max |x_i|` of a normalized point over ℚ.
    pub fn max_abs_integer(&self) -> Option<BigInt> {
        if !self.field.is_rational() {
            return None;
        }
        let n = self.normalized();
        n.coords.iter().map(|c| c.a().numer().abs()).max()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    field: BaseField,
    coords: Vec<String>,
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr { field: self.field, coords: self.coords.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PointRepr::deserialize(d)?;
        let coords = repr
            .coords
            .iter()
            .map(|c| FieldElement::parse(repr.field, c))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        ProjectivePoint::from_representative(coords).map_err(serde::de::Error::custom)
    }
}
