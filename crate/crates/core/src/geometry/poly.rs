//! Dense univariate polynomials over an exact field.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact field arithmetic. Methods take `&self` so that elements can carry
/// their field context.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, other: &Self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    /// Multiplicative inverse of a nonzero element.
    fn inv_elem(&self) -> Self;
    fn from_rational_like(&self, r: &BigRational) -> Self;
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn inv_elem(&self) -> Self {
        self.recip()
    }
    fn from_rational_like(&self, r: &BigRational) -> Self {
        r.clone()
    }
}

/// Polynomial with coefficients in ascending degree order and no trailing
/// zeros. A template element supplies the field context for the zero
/// polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S: Scalar> {
    coeffs: Vec<S>,
    template: S,
}

pub type QPoly = Poly<BigRational>;

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>, template: S) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            coeffs.pop();
        }
        let template = template.zero_like();
        Poly { coeffs, template }
    }

    pub fn zero(template: &S) -> Self {
        Poly { coeffs: Vec::new(), template: template.zero_like() }
    }

    pub fn constant(c: S) -> Self {
        let t = c.zero_like();
        Poly::new(vec![c], t)
    }

    /// `x`.
    pub fn x(template: &S) -> Self {
        Poly::new(vec![template.zero_like(), template.one_like()], template.clone())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn template(&self) -> &S {
        &self.template
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.template.zero_like())
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = self.template.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_elem(x).add_elem(c);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add_elem(&other.coeff(i))).collect();
        Poly::new(coeffs, self.template.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub_elem(&other.coeff(i))).collect();
        Poly::new(coeffs, self.template.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.template);
        }
        let mut out = vec![self.template.zero_like(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_elem(&a.mul_elem(b));
            }
        }
        Poly::new(out, self.template.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul_elem(c)).collect(), self.template.clone())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.neg_elem()).collect(), self.template.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(self.template.one_like());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv_elem();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.template.zero_like(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap().mul_elem(&lead_inv);
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].sub_elem(&c.mul_elem(d));
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero_elem()) {
                rem.pop();
            }
        }
        (Poly::new(quot, self.template.clone()), Poly::new(rem, self.template.clone()))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv_elem()),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let one = Poly::constant(self.template.one_like());
        let zero = Poly::zero(&self.template);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.inv_elem();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_elem(&c.from_rational_like(&BigRational::from_integer(BigInt::from(i)))))
            .collect();
        Poly::new(coeffs, self.template.clone())
    }

    /// Squarefree decomposition `[(f_1, 1), (f_2, 2), ...]` with monic
    /// nonconstant factors (characteristic zero).
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let y = b.gcd(&a);
            let factor = b.div_rem(&y).0;
            if factor.degree().unwrap_or(0) > 0 {
                out.push((factor.monic(), i));
            }
            a = a.div_rem(&y).0;
            b = y;
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        let mut acc = Poly::constant(self.template.one_like());
        for (f, _) in self.squarefree_decomposition() {
            acc = acc.mul(&f);
        }
        acc
    }
}

impl QPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(),
            BigRational::zero(),
        )
    }

    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        Poly::new(coeffs, BigRational::zero())
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        for c in ints.iter_mut() {
            *c = &*c / &g * &sign;
        }
        ints
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect(), BigRational::zero())
    }

    /// Floating-point coefficients.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::numfield::rational_to_f64).collect()
    }
}

/// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> QPoly {
    let zero = BigRational::zero();
    let mut acc = QPoly::zero(&zero);
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = QPoly::constant(BigRational::one());
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&QPoly::from_rationals(vec![-xj.clone(), BigRational::one()]));
            denom *= xi - xj;
        }
        acc = acc.add(&basis.scale(&(yi / denom)));
    }
    acc
}
