use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{QPoly, Scalar};
use crate::arith::{format_rational, parse_rational};
use crate::error::{Error, Result};
use crate::numfield::{rational_to_f64, FieldElement};

pub type Exponents = Vec<u32>;

/// Sparse homogeneous polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponents, BigRational>,
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

impl HomogeneousForm {
    pub fn new(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponents, BigRational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Exponents, BigRational> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: exps.len() });
            }
            if exps.iter().sum::<u32>() != degree {
                return Err(Error::InvalidInput(format!(
                    "monomial {exps:?} does not have degree {degree}"
                )));
            }
            *map.entry(exps).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(HomogeneousForm { nvars, degree, terms: map })
    }

    /// Builds a form from integer coefficients; the degree is read off the
    /// first monomial.
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        let degree = terms.first().map(|(e, _)| e.iter().sum()).unwrap_or(0);
        Self::new(
            nvars,
            degree,
            terms.iter().map(|(e, c)| (e.to_vec(), BigRational::from_integer(BigInt::from(*c)))),
        )
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogeneousForm { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Exponents, coeff: BigRational) -> Self {
        let nvars = exps.len();
        let degree = exps.iter().sum();
        Self::new(nvars, degree, [(exps, coeff)]).expect("monomial is homogeneous")
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(coeffs: &[BigRational]) -> Self {
        let n = coeffs.len();
        Self::new(
            n,
            1,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        )
        .expect("linear form")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in descending lexicographic order of exponents.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Coefficient 1-norm `‖F‖₁`.
    pub fn coeff_l1_norm(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).fold(BigRational::zero(), |a, b| a + b)
    }

    /// Coprime integer coefficients with positive leading (lex-largest)
    /// coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c * BigRational::from_integer(den.clone())).to_integer()));
        let mut scale = BigRational::new(den, num);
        if self.terms_desc().next().unwrap().1.is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.nvars, self.degree, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
            .expect("same shape")
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars || (self.degree != other.degree && !self.is_zero() && !other.is_zero()) {
            return Err(Error::InvalidInput("adding forms of different shape".into()));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Self::new(
            self.nvars,
            degree,
            self.terms.iter().chain(other.terms.iter()).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "multiplying forms in different numbers of variables");
        let mut map: BTreeMap<Exponents, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *map.entry(e).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        map.retain(|_, c| !c.is_zero());
        HomogeneousForm { nvars: self.nvars, degree: self.degree + other.degree, terms: map }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Degree-zero form.
    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::new(nvars, 0, [(vec![0; nvars], c)]).expect("constant")
    }

    /// Iterated partial derivative `∂^α F`; `None` when it vanishes
    /// identically.
    pub fn derivative(&self, alpha: &[u32]) -> Option<Self> {
        assert_eq!(alpha.len(), self.nvars, "multi-index length");
        let order: u32 = alpha.iter().sum();
        if order > self.degree {
            return None;
        }
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.iter().zip(alpha).any(|(a, b)| a < b) {
                continue;
            }
            let factor = e
                .iter()
                .zip(alpha)
                .fold(BigInt::one(), |acc, (&a, &b)| acc * falling(a, b));
            let ne: Exponents = e.iter().zip(alpha).map(|(a, b)| a - b).collect();
            map.insert(ne, c * BigRational::from_integer(factor));
        }
        let d = Self::new(self.nvars, self.degree - order, map).expect("derivative shape");
        (!d.is_zero()).then_some(d)
    }

    pub fn gradient(&self) -> Vec<Option<Self>> {
        (0..self.nvars)
            .map(|i| {
                let mut a = vec![0; self.nvars];
                a[i] = 1;
                self.derivative(&a)
            })
            .collect()
    }

    /// Value at base-field coordinates.
    pub fn evaluate(&self, coords: &[FieldElement]) -> Result<FieldElement> {
        if coords.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: coords.len() });
        }
        let field = coords[0].field();
        let powers = power_table(coords, self.degree, |x, y| x * y, FieldElement::one(field));
        let mut acc = FieldElement::zero(field);
        for (e, c) in &self.terms {
            let mut term = FieldElement::from_rational(field, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Value at coordinates in any exact field.
    pub fn evaluate_scalar<S: Scalar>(&self, coords: &[S]) -> S {
        assert_eq!(coords.len(), self.nvars);
        let one = coords[0].one_like();
        let powers = power_table(coords, self.degree, |x, y| x.mul_elem(y), one);
        let mut acc = coords[0].zero_like();
        for (e, c) in &self.terms {
            let mut term = coords[0].from_rational_like(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul_elem(&powers[i][k as usize]);
                }
            }
            acc = acc.add_elem(&term);
        }
        acc
    }

    pub fn evaluate_complex(&self, coords: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = Complex64::new(rational_to_f64(c), 0.0);
            for (i, &k) in e.iter().enumerate() {
                term *= coords[i].powu(k);
            }
            acc += term;
        }
        acc
    }

    /// Univariate polynomial in variable `free` after fixing the others.
    pub fn specialize<S: Scalar>(&self, values: &[Option<S>], free: usize, template: &S) -> super::poly::Poly<S> {
        assert_eq!(values.len(), self.nvars);
        let mut coeffs = vec![template.zero_like(); self.degree as usize + 1];
        for (e, c) in &self.terms {
            let mut term = template.from_rational_like(c);
            for (i, &k) in e.iter().enumerate() {
                if i == free || k == 0 {
                    continue;
                }
                let v = values[i].as_ref().expect("value for fixed variable");
                for _ in 0..k {
                    term = term.mul_elem(v);
                }
            }
            let k = e[free] as usize;
            coeffs[k] = coeffs[k].add_elem(&term);
        }
        super::poly::Poly::new(coeffs, template.clone())
    }

    /// `F(B·y)` for a square matrix `B` given by rows.
    pub fn substitute_linear(&self, b: &[Vec<BigRational>]) -> Self {
        assert_eq!(b.len(), self.nvars);
        let images: Vec<HomogeneousForm> = b.iter().map(|row| Self::linear(row)).collect();
        let mut acc = Self::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            let mut term = Self::constant(self.nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&images[i]);
                }
            }
            acc = acc.add(&term).expect("same degree");
        }
        acc
    }

    /// Binary form `F(x0, x1)` as the univariate polynomial `F(t, 1)`.
    pub fn binary_to_univariate(&self) -> QPoly {
        assert_eq!(self.nvars, 2, "binary form expected");
        let mut coeffs = vec![BigRational::zero(); self.degree as usize + 1];
        for (e, c) in &self.terms {
            coeffs[e[0] as usize] = c.clone();
        }
        QPoly::from_rationals(coeffs)
    }

    /// Homogenizes `p(t)` to the binary form `x1^d·p(x0/x1)`.
    pub fn binary_from_univariate(p: &QPoly, degree: u32) -> Self {
        Self::new(
            2,
            degree,
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32, degree - k as u32], c.clone())),
        )
        .expect("degree bounds the polynomial")
    }

    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let terms = parse_terms(s, nvars)?;
        let degree = terms.keys().next().map(|e| e.iter().sum()).unwrap_or(0);
        Self::new(nvars, degree, terms)
    }
}

fn power_table<S: Clone>(coords: &[S], degree: u32, mul: impl Fn(&S, &S) -> S, one: S) -> Vec<Vec<S>> {
    coords
        .iter()
        .map(|x| {
            let mut v = vec![one.clone()];
            for k in 1..=degree as usize {
                let next = mul(&v[k - 1], x);
                v.push(next);
            }
            v
        })
        .collect()
}

/// Parses a sum of terms such as `"x0^3 - 2*x1^3"` or `"1/2*x0*x2 + x1^2"`
/// in variables `x0 … x{nvars-1}`.
pub fn parse_terms(s: &str, nvars: usize) -> Result<BTreeMap<Exponents, BigRational>> {
    let bad = |msg: &str| Error::InvalidInput(format!("cannot parse polynomial {s:?}: {msg}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty"));
    }
    let mut pieces = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        let c = bytes[i];
        let prev = bytes[i - 1];
        if (c == b'+' || c == b'-') && prev != b'^' && prev != b'*' && prev != b'/' {
            pieces.push(&compact[start..i]);
            start = i;
        }
    }
    pieces.push(&compact[start..]);
    let mut terms: BTreeMap<Exponents, BigRational> = BTreeMap::new();
    for piece in pieces {
        let (sign, body) = match piece.as_bytes()[0] {
            b'-' => (-BigRational::one(), &piece[1..]),
            b'+' => (BigRational::one(), &piece[1..]),
            _ => (BigRational::one(), piece),
        };
        if body.is_empty() {
            return Err(bad("dangling sign"));
        }
        let mut coeff = sign;
        let mut exps = vec![0u32; nvars];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(bad("empty factor"));
            }
            if let Some(var) = factor.strip_prefix('x') {
                let (idx, pow) = match var.split_once('^') {
                    Some((i, p)) => (i, p.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (var, 1),
                };
                let idx: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
                if idx >= nvars {
                    return Err(bad(&format!("variable x{idx} out of range")));
                }
                exps[idx] += pow;
            } else {
                coeff *= parse_rational(factor).map_err(|_| bad(&format!("bad factor {factor:?}")))?;
            }
        }
        *terms.entry(exps).or_insert_with(BigRational::zero) += coeff;
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(terms)
}

/// Renders terms in descending lexicographic order.
pub fn format_terms<'a>(terms: impl Iterator<Item = (&'a Exponents, &'a BigRational)>) -> String {
    let mut out = String::new();
    for (e, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
            .collect();
        let body = if mono.is_empty() {
            format_rational(&mag)
        } else if mag.is_one() {
            mono.join("*")
        } else {
            format!("{}*{}", format_rational(&mag), mono.join("*"))
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_terms(self.terms_desc()))
    }
}

/// Serialized monomial: `{exponents: [..], coeff: "p/q"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

/// A form as written in input files: a term list, or a string such as
/// `"x0^2 - 2*x1^2"` which needs the ambient variable count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormSpec {
    Text(String),
    Terms(Vec<TermSpec>),
}

impl FormSpec {
    pub fn to_form(&self, nvars: usize) -> Result<HomogeneousForm> {
        match self {
            FormSpec::Text(s) => HomogeneousForm::parse(s, nvars),
            FormSpec::Terms(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidInput("empty term list".into()));
                }
                let degree = terms[0].exponents.iter().sum();
                let parsed = terms
                    .iter()
                    .map(|t| Ok((t.exponents.clone(), parse_rational(&t.coeff)?)))
                    .collect::<Result<Vec<_>>>()?;
                HomogeneousForm::new(nvars, degree, parsed)
            }
        }
    }

    pub fn from_form(f: &HomogeneousForm) -> Self {
        FormSpec::Terms(term_specs(f))
    }
}

fn term_specs(f: &HomogeneousForm) -> Vec<TermSpec> {
    f.terms_desc()
        .map(|(e, c)| TermSpec { exponents: e.clone(), coeff: format_rational(c) })
        .collect()
}

impl Serialize for HomogeneousForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        term_specs(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HomogeneousForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermSpec>::deserialize(deserializer)?;
        let nvars = terms
            .first()
            .map(|t| t.exponents.len())
            .ok_or_else(|| serde::de::Error::custom("empty term list"))?;
        FormSpec::Terms(terms).to_form(nvars).map_err(serde::de::Error::custom)
    }
}
