//! Arithmetic in `ℚ(θ) = ℚ[t]/(m(t))` for an irreducible `m`.

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{QPoly, Scalar};
use crate::numfield::rational_to_f64;

#[derive(Debug, PartialEq)]
pub struct AlgebraicField {
    /// Monic irreducible minimal polynomial of `θ`.
    pub minpoly: QPoly,
}

impl AlgebraicField {
    pub fn new(minpoly: &QPoly) -> Arc<Self> {
        assert!(minpoly.degree().unwrap_or(0) >= 1, "minimal polynomial must be nonconstant");
        Arc::new(AlgebraicField { minpoly: minpoly.monic() })
    }

    /// `ℚ` presented as `ℚ[t]/(t)`.
    pub fn rationals() -> Arc<Self> {
        Self::new(&QPoly::from_ints(&[0, 1]))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }
}

/// Element of `ℚ(θ)` stored by its coefficients on `1, θ, …, θ^{g−1}`.
#[derive(Clone, Debug)]
pub struct NfElem {
    pub field: Arc<AlgebraicField>,
    pub poly: QPoly,
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl NfElem {
    pub fn from_poly(field: &Arc<AlgebraicField>, poly: &QPoly) -> Self {
        NfElem { field: field.clone(), poly: poly.rem(&field.minpoly) }
    }

    pub fn rational(field: &Arc<AlgebraicField>, r: BigRational) -> Self {
        NfElem { field: field.clone(), poly: QPoly::constant(r) }
    }

    pub fn theta(field: &Arc<AlgebraicField>) -> Self {
        Self::from_poly(field, &QPoly::x(&BigRational::zero()))
    }

    /// Coordinates on the power basis, padded to the field degree.
    pub fn basis_coords(&self) -> Vec<BigRational> {
        (0..self.field.degree()).map(|i| self.poly.coeff(i)).collect()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.poly.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }

    /// Value under the embedding `θ ↦ root`.
    pub fn embed(&self, root: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.poly.coeffs().iter().rev() {
            acc = acc * root + Complex64::new(rational_to_f64(c), 0.0);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.mul_elem(self);
        }
        acc
    }
}

impl Scalar for NfElem {
    fn zero_like(&self) -> Self {
        NfElem { field: self.field.clone(), poly: QPoly::zero(&BigRational::zero()) }
    }
    fn one_like(&self) -> Self {
        NfElem { field: self.field.clone(), poly: QPoly::constant(BigRational::one()) }
    }
    fn is_zero_elem(&self) -> bool {
        self.poly.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        NfElem { field: self.field.clone(), poly: self.poly.add(&other.poly) }
    }
    fn sub_elem(&self, other: &Self) -> Self {
        NfElem { field: self.field.clone(), poly: self.poly.sub(&other.poly) }
    }
    fn mul_elem(&self, other: &Self) -> Self {
        if let Some(r) = other.as_rational() {
            return NfElem { field: self.field.clone(), poly: self.poly.scale(&r) };
        }
        NfElem { field: self.field.clone(), poly: self.poly.mul(&other.poly).rem(&self.field.minpoly) }
    }
    fn neg_elem(&self) -> Self {
        NfElem { field: self.field.clone(), poly: self.poly.neg() }
    }
    fn inv_elem(&self) -> Self {
        let (g, s, _) = self.poly.ext_gcd(&self.field.minpoly);
        assert_eq!(g.degree(), Some(0), "inverting zero (or reducible modulus)");
        NfElem::from_poly(&self.field, &s)
    }
    fn from_rational_like(&self, r: &BigRational) -> Self {
        NfElem::rational(&self.field, r.clone())
    }
}
