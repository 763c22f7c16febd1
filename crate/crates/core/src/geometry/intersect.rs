use num_rational::BigRational;
use num_traits::{One, Zero};

use super::algebraic::{AlgebraicField, NfElem};
use super::cycle::{ExactOrbit, Orbit, ZeroCycle};
use super::divisor::Divisor;
use super::form::HomogeneousForm;
use super::poly::{interpolate, Poly, QPoly, Scalar};
use super::roots::factor_over_q;
use crate::arith::rat;
use crate::error::{Error, Result};
use crate::linalg::determinant;

/// Resultant of two univariate polynomials via the Sylvester determinant.
pub fn resultant(f: &QPoly, g: &QPoly) -> BigRational {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigRational::zero();
    };
    if m + n == 0 {
        return BigRational::one();
    }
    let size = m + n;
    let mut rows = vec![vec![BigRational::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    determinant(rows)
}

/// Common zeros over `k̄` of `n` divisors on `ℙⁿ`, `n ∈ {1, 2}`, grouped
/// into Galois orbits over ℚ with exact coordinates.
pub fn intersect_zero_cycle(divisors: &[Divisor]) -> Result<ZeroCycle> {
    let Some(first) = divisors.first() else {
        return Err(Error::InvalidInput("no divisors to intersect".into()));
    };
    let n = first.ambient_dim;
    if divisors.iter().any(|d| d.ambient_dim != n) {
        return Err(Error::InvalidInput("divisors live on different projective spaces".into()));
    }
    if divisors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: divisors.len() });
    }
    let forms: Vec<HomogeneousForm> = divisors.iter().map(|d| d.defining_form()).collect();
    let orbits = match n {
        1 => binary_zeros(&forms[0])?,
        2 => plane_intersection(&forms[0], &forms[1])?,
        _ => {
            return Err(Error::Unsupported(format!(
                "intersection on P^{n}; supply the zero-cycle explicitly"
            )))
        }
    };
    ZeroCycle::new(n, orbits, forms)
}

fn binary_zeros(f: &HomogeneousForm) -> Result<Vec<Orbit>> {
    let u = f.binary_to_univariate();
    let at_infinity = f.degree() - u.degree().unwrap_or(0) as u32;
    let mut orbits = Vec::new();
    for (phi, mult) in factor_over_q(&u)? {
        let exact = ExactOrbit::new(&phi, &[QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1])])?;
        orbits.push(Orbit::new(exact, mult));
    }
    if at_infinity > 0 {
        orbits.push(Orbit::new(ExactOrbit::rational(&[rat(1), rat(0)])?, at_infinity));
    }
    Ok(orbits)
}

/// Unimodular changes of coordinates `x0 = y0 + a·y2`, `x1 = c·y0 + y1 + b·y2`,
/// `x2 = y2` in a fixed order of increasing size. The projection centre is
/// `(a:b:1)`.
fn shears() -> impl Iterator<Item = (i64, i64, i64)> {
    (0i64..8).flat_map(|r| {
        let mut out = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                let c_abs = r - a.abs() - b.abs();
                if c_abs < 0 {
                    continue;
                }
                out.push((a, b, c_abs));
                if c_abs > 0 {
                    out.push((a, b, -c_abs));
                }
            }
        }
        out
    })
}

fn plane_intersection(f1: &HomogeneousForm, f2: &HomogeneousForm) -> Result<Vec<Orbit>> {
    let (d1, d2) = (f1.degree(), f2.degree());
    let total = (d1 * d2) as usize;
    'shear: for (a, b, c) in shears() {
        let centre = [rat(a), rat(b), rat(1)];
        let centre_elems: Vec<_> = centre.to_vec();
        if f1.evaluate_scalar(&centre_elems).is_zero() || f2.evaluate_scalar(&centre_elems).is_zero() {
            continue;
        }
        let shear = vec![
            vec![rat(1), rat(0), rat(a)],
            vec![rat(c), rat(1), rat(b)],
            vec![rat(0), rat(0), rat(1)],
        ];
        let g1 = f1.substitute_linear(&shear);
        let g2 = f2.substitute_linear(&shear);
        let zero = BigRational::zero();
        let samples: Vec<(BigRational, BigRational)> = (0..=total as i64)
            .map(|t| {
                let vals = [Some(rat(t)), Some(rat(1)), None];
                let p1 = g1.specialize(&vals, 2, &zero);
                let p2 = g2.specialize(&vals, 2, &zero);
                (rat(t), resultant(&p1, &p2))
            })
            .collect();
        let res = interpolate(&samples);
        if res.is_zero() {
            return Err(Error::NotZeroDimensional);
        }
        if res.degree() != Some(total) {
            // an intersection point projects to (1:0)
            continue;
        }
        let mut orbits = Vec::new();
        for (phi, mult) in factor_over_q(&res)? {
            let field = AlgebraicField::new(&phi);
            let theta = NfElem::theta(&field);
            let one = theta.one_like();
            let vals = [Some(theta.clone()), Some(one.clone()), None];
            let p1: Poly<NfElem> = g1.specialize(&vals, 2, &one);
            let p2: Poly<NfElem> = g2.specialize(&vals, 2, &one);
            let common = p1.gcd(&p2);
            if common.degree() != Some(1) {
                continue 'shear;
            }
            let y2 = common.coeff(0).mul_elem(&common.coeff(1).inv_elem()).neg_elem();
            let ya = y2.mul_elem(&one.from_rational_like(&rat(a)));
            let yb = y2.mul_elem(&one.from_rational_like(&rat(b)));
            let x1 = theta.mul_elem(&one.from_rational_like(&rat(c))).add_elem(&one).add_elem(&yb);
            let coords = [theta.add_elem(&ya).poly, x1.poly, y2.poly];
            orbits.push(Orbit::new(ExactOrbit::new(&phi, &coords)?, mult));
        }
        return Ok(orbits);
    }
    Err(Error::Unsupported("no generic projection found for this intersection".into()))
}
