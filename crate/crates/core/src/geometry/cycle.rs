use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::algebraic::{AlgebraicField, NfElem};
use super::form::{Exponents, HomogeneousForm};
use super::point::ProjectivePoint;
use super::poly::{QPoly, Scalar};
use super::roots::complex_roots;
use crate::arith::{format_rational, parse_rational};
use crate::error::{Error, Result};
use crate::linalg;
use crate::numfield::FieldElement;

/// A Galois orbit over ℚ given exactly: `θ` is a root of the irreducible
/// `minpoly` and the representative point has coordinates `coords[i](θ)`,
/// scaled so that the chart coordinate equals 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactOrbit {
    pub minpoly: QPoly,
    pub coords: Vec<QPoly>,
}

impl ExactOrbit {
    pub fn new(minpoly: &QPoly, coords: &[QPoly]) -> Result<Self> {
        if minpoly.degree().unwrap_or(0) < 1 {
            return Err(Error::InvalidInput("orbit minimal polynomial must be nonconstant".into()));
        }
        let field = AlgebraicField::new(minpoly);
        let elems: Vec<NfElem> = coords.iter().map(|c| NfElem::from_poly(&field, c)).collect();
        let Some(lead) = elems.iter().find(|e| !e.is_zero_elem()) else {
            return Err(Error::InvalidInput("orbit point has all coordinates zero".into()));
        };
        let inv = lead.inv_elem();
        let coords = elems.iter().map(|e| e.mul_elem(&inv).poly).collect();
        Ok(ExactOrbit { minpoly: field.minpoly.clone(), coords })
    }

    /// Orbit of a point with rational coordinates.
    pub fn rational(point: &[BigRational]) -> Result<Self> {
        Self::new(
            &QPoly::from_ints(&[0, 1]),
            &point.iter().map(|c| QPoly::constant(c.clone())).collect::<Vec<_>>(),
        )
    }

    /// Orbit over ℚ of a point with coordinates in the base field.
    pub fn from_point(x: &ProjectivePoint) -> Result<Self> {
        if x.coords().iter().all(|c| c.is_rational()) {
            return Self::rational(&x.coords().iter().map(|c| c.a().clone()).collect::<Vec<_>>());
        }
        // θ = ω with ω² = tω + c
        let (t, c) = omega_relation(x.coords()[0].field());
        let minpoly = QPoly::from_rationals(vec![-c, -t, BigRational::one()]);
        let coords: Vec<QPoly> = x
            .coords()
            .iter()
            .map(|e| QPoly::from_rationals(vec![e.a().clone(), e.b().clone()]))
            .collect();
        Self::new(&minpoly, &coords)
    }

    pub fn field(&self) -> Arc<AlgebraicField> {
        AlgebraicField::new(&self.minpoly)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn point(&self) -> Vec<NfElem> {
        let field = self.field();
        self.coords.iter().map(|c| NfElem::from_poly(&field, c)).collect()
    }

    /// Index of the coordinate normalized to 1.
    pub fn chart(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }

    /// Every conjugate of the representative under the complex embeddings.
    pub fn numeric_points(&self) -> Vec<Vec<Complex64>> {
        let roots = complex_roots(&self.minpoly.to_f64());
        roots
            .iter()
            .map(|&r| self.point().iter().map(|c| c.embed(r)).collect())
            .collect()
    }
}

fn omega_relation(field: crate::numfield::BaseField) -> (BigRational, BigRational) {
    let w = FieldElement::omega(field);
    let w2 = &w * &w;
    (w2.b().clone(), w2.a().clone())
}

/// Galois orbit of geometric points with its intersection multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub degree: usize,
    pub multiplicity: u32,
    pub points: Vec<Vec<Complex64>>,
    pub exact: ExactOrbit,
}

impl Orbit {
    pub fn new(exact: ExactOrbit, multiplicity: u32) -> Self {
        Orbit { degree: exact.degree(), multiplicity, points: exact.numeric_points(), exact }
    }
}

/// A reduced zero-dimensional subscheme of `ℙⁿ` defined over ℚ, together
/// with forms that cut it out set-theoretically.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCycle {
    pub ambient_dim: usize,
    pub orbits: Vec<Orbit>,
    pub generators: Vec<HomogeneousForm>,
}

impl ZeroCycle {
    pub fn new(ambient_dim: usize, orbits: Vec<Orbit>, generators: Vec<HomogeneousForm>) -> Result<Self> {
        for o in &orbits {
            if o.exact.nvars() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch { expected: ambient_dim + 1, got: o.exact.nvars() });
            }
        }
        for g in &generators {
            if g.nvars() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch { expected: ambient_dim + 1, got: g.nvars() });
            }
        }
        let cycle = ZeroCycle { ambient_dim, orbits, generators };
        for g in &cycle.generators {
            for o in &cycle.orbits {
                if !g.evaluate_scalar(&o.exact.point()).is_zero_elem() {
                    return Err(Error::InvalidInput(format!("generator {g} does not vanish on the cycle")));
                }
            }
        }
        Ok(cycle)
    }

    /// Cycle supported on the given orbits, cut out by every form of degree
    /// `Σ g` vanishing on it (the ideal of `d` points is generated in degree
    /// at most `d`).
    pub fn from_orbits(ambient_dim: usize, exact: Vec<ExactOrbit>) -> Result<Self> {
        if exact.is_empty() {
            return Err(Error::NoTarget);
        }
        let orbits: Vec<Orbit> = exact.into_iter().map(|e| Orbit::new(e, 1)).collect();
        let mut cycle = ZeroCycle { ambient_dim, orbits, generators: Vec::new() };
        let d = cycle.geometric_degree() as u32;
        let degree = if d == 1 { 1 } else { d };
        let (rows, basis) = cycle.multiplicity_rows(degree, 1);
        let ech = linalg::echelon(&rows, basis.len());
        cycle.generators = ech
            .nullspace()
            .into_iter()
            .map(|v| form_from_vector(ambient_dim + 1, degree, &basis, &v))
            .collect();
        Ok(cycle)
    }

    pub fn from_points(ambient_dim: usize, points: &[ProjectivePoint]) -> Result<Self> {
        let mut orbits: Vec<ExactOrbit> = Vec::new();
        for p in points {
            let o = ExactOrbit::from_point(p)?;
            // a point and its conjugate give the same orbit over ℚ
            let conj = ExactOrbit::from_point(&p.conj())?;
            if !orbits.contains(&o) && !orbits.contains(&conj) {
                orbits.push(o);
            }
        }
        Self::from_orbits(ambient_dim, orbits)
    }

    /// Number of geometric points `d`.
    pub fn geometric_degree(&self) -> usize {
        self.orbits.iter().map(|o| o.degree).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Every geometric point with its `(orbit, conjugate)` label.
    pub fn geometric_points(&self) -> Vec<((usize, usize), &[Complex64])> {
        self.orbits
            .iter()
            .enumerate()
            .flat_map(|(i, o)| o.points.iter().enumerate().map(move |(j, p)| ((i, j), p.as_slice())))
            .collect()
    }

    /// Whether `x` lies in the support (all generators vanish).
    pub fn contains(&self, x: &ProjectivePoint) -> Result<bool> {
        if self.generators.is_empty() {
            return Err(Error::MissingGenerators);
        }
        for g in &self.generators {
            if !g.evaluate(x.coords())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Linear conditions on the coefficients of a degree-`degree` form for
    /// vanishing to order `μ` at every geometric point, over the monomial
    /// basis in lex-descending order. Each orbit of degree `g` contributes
    /// `g·C(n+μ−1, n)` rational rows.
    pub fn multiplicity_rows(&self, degree: u32, mu: u32) -> (Vec<Vec<BigRational>>, Vec<Exponents>) {
        let nvars = self.ambient_dim + 1;
        let basis = monomial_basis(nvars, degree);
        let mut rows = Vec::new();
        for orbit in &self.orbits {
            let point = orbit.exact.point();
            let chart = orbit.exact.chart();
            let g = orbit.degree;
            let powers: Vec<Vec<NfElem>> = point
                .iter()
                .map(|x| {
                    let mut v = vec![x.one_like()];
                    for k in 1..=degree as usize {
                        let next = v[k - 1].mul_elem(x);
                        v.push(next);
                    }
                    v
                })
                .collect();
            for alpha in multi_indices_excluding(nvars, chart, mu.saturating_sub(1)) {
                let mut block = vec![vec![BigRational::zero(); basis.len()]; g];
                for (col, e) in basis.iter().enumerate() {
                    if e.iter().zip(&alpha).any(|(a, b)| a < b) {
                        continue;
                    }
                    let factor = e.iter().zip(&alpha).fold(BigInt::one(), |acc, (&a, &b)| {
                        (0..b).fold(acc, |acc2, i| acc2 * BigInt::from(a - i))
                    });
                    let mut value = point[0].one_like();
                    for (i, (&a, &b)) in e.iter().zip(&alpha).enumerate() {
                        if a > b {
                            value = value.mul_elem(&powers[i][(a - b) as usize]);
                        }
                    }
                    let coords = value.basis_coords();
                    let f = BigRational::from_integer(factor);
                    for (r, c) in coords.into_iter().enumerate() {
                        block[r][col] = c * &f;
                    }
                }
                rows.extend(block);
            }
        }
        (rows, basis)
    }
}

/// Monomials of the given degree in lexicographically descending order.
pub fn monomial_basis(nvars: usize, degree: u32) -> Vec<Exponents> {
    fn rec(i: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out
}

/// Multi-indices of order at most `max_order` with a zero in position
/// `skip`, in graded order.
pub fn multi_indices_excluding(nvars: usize, skip: usize, max_order: u32) -> Vec<Exponents> {
    if nvars == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for order in 0..=max_order {
        for mut e in monomial_basis(nvars - 1, order) {
            e.insert(skip, 0);
            out.push(e);
        }
    }
    out
}

pub fn form_from_vector(nvars: usize, degree: u32, basis: &[Exponents], v: &[BigInt]) -> HomogeneousForm {
    let form = HomogeneousForm::new(
        nvars,
        degree,
        basis.iter().zip(v).map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone()))),
    )
    .expect("basis monomials have the right degree");
    form.primitive()
}

/// Chordal distance `|x ∧ y| / (|x|·|y|)` between points of `ℙⁿ(ℂ)`.
pub fn chordal_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    let nx: f64 = x.iter().map(|c| c.norm_sqr()).sum();
    let ny: f64 = y.iter().map(|c| c.norm_sqr()).sum();
    let mut wedge = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            wedge += (x[i] * y[j] - x[j] * y[i]).norm_sqr();
        }
    }
    (wedge / (nx * ny)).sqrt().min(1.0)
}

#[derive(Serialize, Deserialize)]
struct OrbitRepr {
    minpoly: Vec<String>,
    coords: Vec<Vec<String>>,
    multiplicity: u32,
    degree: usize,
    points: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct CycleRepr {
    ambient_dim: usize,
    orbits: Vec<OrbitRepr>,
    generators: Vec<HomogeneousForm>,
}

fn poly_strings(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

fn poly_from_strings(v: &[String]) -> Result<QPoly> {
    Ok(QPoly::from_rationals(v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?))
}

impl Serialize for ZeroCycle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycleRepr {
            ambient_dim: self.ambient_dim,
            orbits: self
                .orbits
                .iter()
                .map(|o| OrbitRepr {
                    minpoly: poly_strings(&o.exact.minpoly),
                    coords: o.exact.coords.iter().map(poly_strings).collect(),
                    multiplicity: o.multiplicity,
                    degree: o.degree,
                    points: o.points.iter().map(|p| p.iter().map(|c| [c.re, c.im]).collect()).collect(),
                })
                .collect(),
            generators: self.generators.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZeroCycle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycleRepr::deserialize(d)?;
        let err = serde::de::Error::custom;
        let orbits = repr
            .orbits
            .iter()
            .map(|o| {
                let minpoly = poly_from_strings(&o.minpoly)?;
                let coords = o.coords.iter().map(|c| poly_from_strings(c)).collect::<Result<Vec<_>>>()?;
                Ok(Orbit::new(ExactOrbit::new(&minpoly, &coords)?, o.multiplicity))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(err)?;
        ZeroCycle::new(repr.ambient_dim, orbits, repr.generators).map_err(err)
    }
}
