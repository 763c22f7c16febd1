//! Ideals of the ring of integers of a quadratic field, as ℤ-lattices in
//! the `{1, ω}` basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BaseField, FieldElement};
use crate::arith::{rational_gcd, rat};

/// Hermite basis `{d1, u1 + d2·ω}` of a nonzero integral ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    pub field: BaseField,
    pub d1: BigInt,
    pub u1: BigInt,
    pub d2: BigInt,
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

impl IdealBasis {
    /// Ideal generated by integral elements; `None` if all are zero.
    pub fn generated_by(field: BaseField, elems: &[FieldElement]) -> Option<Self> {
        assert!(!field.is_rational());
        let (t, c) = field.omega_relation_int();
        let (t, c) = (BigInt::from(t), BigInt::from(c));
        // ℤ-generators: g and g·ω for each g
        let mut vecs: Vec<(BigInt, BigInt)> = Vec::new();
        for g in elems.iter().filter(|g| !g.is_zero()) {
            let (a, b) = g.integer_coords();
            // (a + bω)ω = bc + (a + bt)ω
            vecs.push((&b * &c, &a + &b * &t));
            vecs.push((a, b));
        }
        if vecs.is_empty() {
            return None;
        }
        let mut g = BigInt::zero();
        let mut u = (BigInt::zero(), BigInt::zero());
        for v in &vecs {
            if v.1.is_zero() {
                continue;
            }
            let (ng, s, r) = ext_gcd(&g, &v.1);
            u = (&s * &u.0 + &r * &v.0, &s * &u.1 + &r * &v.1);
            g = ng;
        }
        if g.is_negative() {
            g = -g;
            u = (-u.0, -u.1);
        }
        debug_assert!(!g.is_zero());
        let mut d1 = BigInt::zero();
        for v in &vecs {
            let k = &v.1 / &g;
            let x = &v.0 - &k * &u.0;
            d1 = d1.gcd(&x);
        }
        debug_assert!(!d1.is_zero());
        let u1 = u.0.mod_floor(&d1);
        Some(IdealBasis { field, d1, u1, d2: g })
    }

    pub fn norm(&self) -> BigInt {
        &self.d1 * &self.d2
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.norm().is_one()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        if !x.is_integral() {
            return false;
        }
        let (a, b) = x.integer_coords();
        if !b.is_multiple_of(&self.d2) {
            return false;
        }
        let k = &b / &self.d2;
        (a - k * &self.u1).is_multiple_of(&self.d1)
    }

    /// A generator of the (principal) ideal: a shortest lattice vector for
    /// the norm form.
    pub fn generator(&self) -> FieldElement {
        let f = self.field;
        let mut b1 = FieldElement::from_rational(f, BigRational::from_integer(self.d1.clone()));
        let mut b2 = FieldElement::new(
            f,
            BigRational::from_integer(self.u1.clone()),
            BigRational::from_integer(self.d2.clone()),
        );
        let bilinear = |x: &FieldElement, y: &FieldElement| -> BigRational {
            ((x + y).norm() - x.norm() - y.norm()) / rat(2)
        };
        if b2.norm() < b1.norm() {
            std::mem::swap(&mut b1, &mut b2);
        }
        loop {
            let mu = (bilinear(&b1, &b2) / b1.norm()).round();
            b2 = &b2 - &b1.scale(&mu);
            if b2.norm() >= b1.norm() {
                break;
            }
            std::mem::swap(&mut b1, &mut b2);
        }
        b1
    }
}

/// Absolute norm of the fractional ideal generated by `elems` (over ℚ: the
/// positive rational gcd).
pub fn ideal_norm(field: BaseField, elems: &[FieldElement]) -> Option<BigRational> {
    match field {
        BaseField::Rationals => {
            let g = elems
                .iter()
                .fold(BigRational::zero(), |acc, e| rational_gcd(&acc, e.a()));
            (!g.is_zero()).then_some(g)
        }
        BaseField::ImagQuadratic(_) => {
            let (scaled, c) = scale_integral(field, elems);
            let basis = IdealBasis::generated_by(field, &scaled)?;
            Some(BigRational::new(basis.norm(), &c * &c))
        }
    }
}

/// A generator of the fractional ideal generated by `elems`.
pub fn principal_generator(field: BaseField, elems: &[FieldElement]) -> Option<FieldElement> {
    match field {
        BaseField::Rationals => {
            let g = elems
                .iter()
                .fold(BigRational::zero(), |acc, e| rational_gcd(&acc, e.a()));
            (!g.is_zero()).then(|| FieldElement::from_rational(field, g))
        }
        BaseField::ImagQuadratic(_) => {
            let (scaled, c) = scale_integral(field, elems);
            let basis = IdealBasis::generated_by(field, &scaled)?;
            Some(basis.generator().scale(&BigRational::new(BigInt::one(), c)))
        }
    }
}

fn scale_integral(field: BaseField, elems: &[FieldElement]) -> (Vec<FieldElement>, BigInt) {
    let c = elems
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(&e.denominator()));
    let cr = BigRational::from_integer(c.clone());
    let scaled = elems.iter().map(|e| e.scale(&cr)).collect();
    let _ = field;
    (scaled, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::CLASS_NUMBER_ONE;

    #[test]
    fn gaussian_ideals() {
        let f = BaseField::gaussian();
        let five = FieldElement::from_int(f, 5);
        let p = FieldElement::from_ints(f, 2, 1);
        let basis = IdealBasis::generated_by(f, &[five.clone(), p.clone()]).unwrap();
        assert_eq!(basis.norm(), BigInt::from(5));
        let g = basis.generator();
        assert_eq!(g.norm(), rat(5));
        assert!(p.exact_quotient(&g).is_some());
        assert!(basis.contains(&five));
        assert!(!basis.contains(&FieldElement::one(f)));
    }

    #[test]
    fn generators_have_ideal_norm() {
        for m in CLASS_NUMBER_ONE {
            let f = BaseField::ImagQuadratic(m);
            for (a, b, c, d) in [(6, 2, 4, 10), (3, 0, 0, 3), (7, 1, 2, 5), (12, 6, 9, 3)] {
                let x = FieldElement::from_ints(f, a, b);
                let y = FieldElement::from_ints(f, c, d);
                let basis = IdealBasis::generated_by(f, &[x.clone(), y.clone()]).unwrap();
                let g = basis.generator();
                assert_eq!(g.norm(), BigRational::from_integer(basis.norm()), "m={m}");
                assert!(x.exact_quotient(&g).is_some());
                assert!(y.exact_quotient(&g).is_some());
            }
        }
    }

    #[test]
    fn rational_gcd_norm() {
        let f = BaseField::Rationals;
        let n = ideal_norm(f, &[FieldElement::from_int(f, 6), FieldElement::from_int(f, 10)]).unwrap();
        assert_eq!(n, rat(2));
    }
}
