use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::BaseField;
use crate::arith::{common_denominator, format_rational, parse_rational, rat};
use crate::error::{Error, Result};

/// Element `a + b·ω` of the base field, with `ω` the second basis element
/// of the ring of integers (`b = 0` over ℚ).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    field: BaseField,
    a: BigRational,
    b: BigRational,
}

impl FieldElement {
    pub fn new(field: BaseField, a: BigRational, b: BigRational) -> Self {
        let b = if field.is_rational() { BigRational::zero() } else { b };
        FieldElement { field, a, b }
    }

    pub fn from_rational(field: BaseField, a: BigRational) -> Self {
        FieldElement { field, a, b: BigRational::zero() }
    }

    pub fn from_int(field: BaseField, a: i64) -> Self {
        Self::from_rational(field, rat(a))
    }

    pub fn from_ints(field: BaseField, a: i64, b: i64) -> Self {
        Self::new(field, rat(a), rat(b))
    }

    pub fn zero(field: BaseField) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: BaseField) -> Self {
        Self::from_int(field, 1)
    }

    pub fn omega(field: BaseField) -> Self {
        assert!(!field.is_rational(), "ω is only defined for quadratic fields");
        Self::from_ints(field, 0, 1)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    /// Rational coordinate on `1`.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Rational coordinate on `ω`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn norm(&self) -> BigRational {
        let (t, c) = self.field.omega_relation();
        &self.a * &self.a + &self.a * &self.b * rat(t) - c * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        let (t, _) = self.field.omega_relation();
        &self.a * rat(2) + &self.b * rat(t)
    }

    /// Complex conjugate (the nontrivial automorphism for quadratic fields).
    pub fn conj(&self) -> Self {
        let (t, _) = self.field.omega_relation();
        FieldElement {
            field: self.field,
            a: &self.a + &self.b * rat(t),
            b: -&self.b,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        let n = self.norm();
        let c = self.conj();
        Ok(FieldElement { field: self.field, a: c.a / &n, b: c.b / n })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        FieldElement { field: self.field, a: &self.a * r, b: &self.b * r }
    }

    /// Least positive integer `c` with `c·self` integral.
    pub fn denominator(&self) -> BigInt {
        common_denominator([&self.a, &self.b])
    }

    /// Integer coordinates `(a, b)`; panics if not integral.
    pub fn integer_coords(&self) -> (BigInt, BigInt) {
        assert!(self.is_integral(), "element is not integral");
        (self.a.numer().clone(), self.b.numer().clone())
    }

    /// `self / other` when the quotient is integral, `None` otherwise.
    pub fn exact_quotient(&self, other: &Self) -> Option<Self> {
        let q = self.clone() / other.clone();
        q.is_integral().then_some(q)
    }

    /// Complex embedding `(re, im)` as floating point.
    pub fn to_complex(&self) -> (f64, f64) {
        let a = rational_to_f64(&self.a);
        let b = rational_to_f64(&self.b);
        let (wr, wi) = self.field.omega_complex();
        (a + b * wr, b * wi)
    }

    /// `|x|` under the complex (or real) embedding.
    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    /// Parses `"p/q"`, `"a+bw"`, `"a-bw"`, `"bw"`, `"w"` (with `w = ω`).
    pub fn parse(field: BaseField, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidInput(format!("not an element of {field}: {s:?}"));
        if !s.ends_with('w') && !s.ends_with('i') {
            return Ok(Self::from_rational(field, parse_rational(&s)?));
        }
        if field.is_rational() {
            return Err(bad());
        }
        let body = &s[..s.len() - 1];
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !body[..i].ends_with('/'))
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let b_str = b_str.trim_end_matches('*');
        let b = match b_str {
            "" | "+" => rat(1),
            "-" => rat(-1),
            other => parse_rational(other).map_err(|_| bad())?,
        };
        let a = parse_rational(a_str).map_err(|_| bad())?;
        Ok(Self::new(field, a, b))
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    if r.is_zero() {
        return 0.0;
    }
    sign * crate::arith::ln_abs_rational(r).exp()
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let b = if self.b.is_one() {
            String::new()
        } else if (-&self.b).is_one() {
            "-".to_string()
        } else {
            format_rational(&self.b)
        };
        if self.a.is_zero() {
            write!(f, "{b}w")
        } else if self.b.is_positive() {
            write!(f, "{}+{b}w", format_rational(&self.a))
        } else {
            write!(f, "{}{b}w", format_rational(&self.a))
        }
    }
}

fn check_fields(x: &FieldElement, y: &FieldElement) {
    assert_eq!(x.field, y.field, "mixed-field arithmetic");
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        check_fields(self, rhs);
        FieldElement { field: self.field, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        check_fields(self, rhs);
        FieldElement { field: self.field, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        check_fields(self, rhs);
        if self.b.is_zero() && rhs.b.is_zero() {
            return FieldElement::from_rational(self.field, &self.a * &rhs.a);
        }
        let (t, c) = self.field.omega_relation();
        let bb = &self.b * &rhs.b;
        FieldElement {
            field: self.field,
            a: &self.a * &rhs.a + &bb * c,
            b: &self.a * &rhs.b + &rhs.a * &self.b + bb * rat(t),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field, a: -&self.a, b: -&self.b }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.inverse().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;

    #[test]
    fn gaussian_arithmetic() {
        let f = BaseField::gaussian();
        let x = FieldElement::from_ints(f, 2, 1);
        let y = FieldElement::from_ints(f, 2, -1);
        assert_eq!(&x * &y, FieldElement::from_int(f, 5));
        assert_eq!(x.norm(), rat(5));
        assert_eq!(x.conj(), y);
        assert_eq!(x.trace(), rat(4));
        let i = FieldElement::omega(f);
        assert_eq!(&i * &i, FieldElement::from_int(f, -1));
        assert_eq!((&x / &x), FieldElement::one(f));
    }

    #[test]
    fn half_integral_basis() {
        // ω = (1+√−7)/2 satisfies ω² = ω − 2
        let f = BaseField::ImagQuadratic(7);
        let w = FieldElement::omega(f);
        assert_eq!(&w * &w, FieldElement::from_ints(f, -2, 1));
        assert_eq!(w.norm(), rat(2));
        assert_eq!(w.trace(), rat(1));
        let (re, im) = w.to_complex();
        assert!((re - 0.5).abs() < 1e-15 && (im - 7f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((w.abs_f64().powi(2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn norm_zero_iff_zero() {
        for m in crate::numfield::CLASS_NUMBER_ONE {
            let f = BaseField::ImagQuadratic(m);
            for a in -4..=4 {
                for b in -4..=4 {
                    let x = FieldElement::from_ints(f, a, b);
                    assert_eq!(x.norm().is_zero(), x.is_zero());
                    if !x.is_zero() {
                        assert!(x.norm() > rat(0));
                    }
                }
            }
        }
    }

    #[test]
    fn parsing_and_display() {
        let f = BaseField::gaussian();
        assert_eq!(FieldElement::parse(f, "1+i").unwrap(), FieldElement::from_ints(f, 1, 1));
        assert_eq!(FieldElement::parse(f, "2-w").unwrap(), FieldElement::from_ints(f, 2, -1));
        assert_eq!(FieldElement::parse(f, "-3w").unwrap(), FieldElement::from_ints(f, 0, -3));
        assert_eq!(
            FieldElement::parse(f, "1/2+3/4w").unwrap(),
            FieldElement::new(f, rat_frac(1, 2), rat_frac(3, 4))
        );
        assert_eq!(FieldElement::parse(f, "7").unwrap(), FieldElement::from_int(f, 7));
        assert!(FieldElement::parse(BaseField::Rationals, "1+w").is_err());
        for s in ["2+w", "2-w", "-w", "w", "1/2", "-3+5w"] {
            let x = FieldElement::parse(f, s).unwrap();
            assert_eq!(x.to_string(), s);
        }
    }
}
