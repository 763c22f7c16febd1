use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{ideal::IdealBasis, BaseField, FieldElement};
use crate::arith::{ln_abs_rational, padic_valuation, padic_valuation_rational, rational_primes};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    /// The unique place of ℚ above `p`.
    Rational,
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    Archimedean,
    Finite {
        p: u64,
        splitting: Splitting,
        /// Generator of the prime ideal.
        generator: FieldElement,
        f: u32,
        e: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub field: BaseField,
    pub kind: PlaceKind,
}

impl Place {
    /// The unique archimedean place.
    pub fn infinity(field: BaseField) -> Self {
        Place { field, kind: PlaceKind::Archimedean }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self.kind, PlaceKind::Archimedean)
    }

    pub fn prime(&self) -> Option<u64> {
        match &self.kind {
            PlaceKind::Finite { p, .. } => Some(*p),
            PlaceKind::Archimedean => None,
        }
    }

    pub fn local_degree(&self) -> u32 {
        match &self.kind {
            PlaceKind::Archimedean => self.field.degree(),
            PlaceKind::Finite { e, f, .. } => e * f,
        }
    }

    pub fn residue_degree(&self) -> u32 {
        match &self.kind {
            PlaceKind::Archimedean => 0,
            PlaceKind::Finite { f, .. } => *f,
        }
    }

    pub fn ramification(&self) -> u32 {
        match &self.kind {
            PlaceKind::Archimedean => 0,
            PlaceKind::Finite { e, .. } => *e,
        }
    }

    /// The finite place `p` of ℚ.
    pub fn rational_prime(p: u64) -> Self {
        let field = BaseField::Rationals;
        Place {
            field,
            kind: PlaceKind::Finite {
                p,
                splitting: Splitting::Rational,
                generator: FieldElement::from_int(field, p as i64),
                f: 1,
                e: 1,
            },
        }
    }

    /// Norm `N(P) = p^f` of the prime ideal, as a rational.
    pub fn ideal_norm(&self) -> Option<BigRational> {
        match &self.kind {
            PlaceKind::Archimedean => None,
            PlaceKind::Finite { p, f, .. } => {
                Some(BigRational::from_integer(num_traits::pow(BigInt::from(*p), *f as usize)))
            }
        }
    }

    /// Short stable label: `inf`, `2`, or `5:(2+w)`.
    pub fn label(&self) -> String {
        match &self.kind {
            PlaceKind::Archimedean => "inf".to_string(),
            PlaceKind::Finite { p, splitting: Splitting::Rational, .. } => p.to_string(),
            PlaceKind::Finite { p, generator, .. } => format!("{p}:({generator})"),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Square root of a quadratic residue modulo an odd prime.
fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(n, (p + 1) / 4, p));
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Roots modulo `p` of the minimal polynomial `X² − tX − c` of `ω`.
fn omega_roots_mod(field: BaseField, p: u64) -> Vec<u64> {
    let (t, c) = field.omega_relation_int();
    let t_mod = t.rem_euclid(p as i64) as u64;
    let c_mod = c.rem_euclid(p as i64) as u64;
    let eval = |x: u64| -> u64 {
        let v = mul_mod(x, x, p) as i128 - mul_mod(t_mod, x, p) as i128 - c_mod as i128;
        v.rem_euclid(p as i128) as u64
    };
    if p == 2 {
        return (0..2).filter(|&x| eval(x) == 0).collect();
    }
    let disc = field.discriminant().rem_euclid(p as i64) as u64;
    let Some(s) = sqrt_mod(disc, p) else {
        return Vec::new();
    };
    let inv2 = (p + 1) / 2;
    let mut roots: Vec<u64> = [(t_mod + s) % p, (t_mod + p - s) % p]
        .into_iter()
        .map(|x| mul_mod(x, inv2, p))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    debug_assert!(roots.iter().all(|&r| eval(r) == 0));
    roots
}

/// Canonical associate: the unit multiple with lexicographically largest
/// `(a, b)` coordinates.
pub fn canonical_associate(x: &FieldElement) -> FieldElement {
    x.field()
        .units()
        .iter()
        .map(|u| u * x)
        .max_by(|p, q| (p.a(), p.b()).cmp(&(q.a(), q.b())))
        .expect("unit group is nonempty")
}

/// All places of `field` above the rational prime `p`.
pub fn decompose_prime(field: BaseField, p: u64) -> Result<Vec<Place>> {
    field.validate()?;
    if p < 2 || !num_prime::nt_funcs::is_prime64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if field.is_rational() {
        return Ok(vec![Place::rational_prime(p)]);
    }
    let roots = omega_roots_mod(field, p);
    let disc = field.discriminant();
    let ramified = disc.rem_euclid(p as i64) == 0;
    let place = |gen: FieldElement, splitting, f, e| Place {
        field,
        kind: PlaceKind::Finite { p, splitting, generator: canonical_associate(&gen), f, e },
    };
    if roots.is_empty() {
        return Ok(vec![place(FieldElement::from_int(field, p as i64), Splitting::Inert, 2, 1)]);
    }
    let generator_for = |r: u64| {
        // P = ⟨p, ω − r⟩
        let basis = IdealBasis::generated_by(
            field,
            &[
                FieldElement::from_int(field, p as i64),
                FieldElement::from_ints(field, -(r as i64), 1),
            ],
        )
        .expect("nonzero ideal");
        debug_assert_eq!(basis.norm(), BigInt::from(p));
        basis.generator()
    };
    if ramified {
        return Ok(vec![place(generator_for(roots[0]), Splitting::Ramified, 1, 2)]);
    }
    debug_assert_eq!(roots.len(), 2);
    Ok(roots
        .iter()
        .map(|&r| place(generator_for(r), Splitting::Split, 1, 1))
        .collect())
}

/// `v_P(x)` for a finite place.
pub fn valuation(place: &Place, x: &FieldElement) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    let PlaceKind::Finite { p, splitting, generator, f, .. } = &place.kind else {
        return Err(Error::InvalidInput("valuation at the archimedean place".into()));
    };
    match splitting {
        Splitting::Rational => Ok(padic_valuation_rational(x.a(), *p)),
        Splitting::Inert | Splitting::Ramified => {
            Ok(padic_valuation_rational(&x.norm(), *p) / *f as i64)
        }
        Splitting::Split => {
            let c = x.denominator();
            let cr = BigRational::from_integer(c.clone());
            let mut y = x.scale(&cr);
            let bound = padic_valuation_rational(&y.norm(), *p);
            let mut v = 0;
            while v < bound {
                match y.exact_quotient(generator) {
                    Some(q) => {
                        y = q;
                        v += 1;
                    }
                    None => break,
                }
            }
            Ok(v - padic_valuation(&c, *p))
        }
    }
}

/// `(d_v/[K:ℚ])·log|x|_v` with natural logarithms.
pub fn normalized_log_abs(place: &Place, x: &FieldElement) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    match &place.kind {
        PlaceKind::Archimedean => Ok(match place.field {
            BaseField::Rationals => ln_abs_rational(x.a()),
            BaseField::ImagQuadratic(_) => 0.5 * ln_abs_rational(&x.norm()),
        }),
        PlaceKind::Finite { p, f, .. } => {
            let v = valuation(place, x)?;
            Ok(-(*f as f64) / place.field.degree() as f64 * v as f64 * (*p as f64).ln())
        }
    }
}

/// Finite places where some element of `elems` has nonzero valuation.
pub fn places_dividing(field: BaseField, elems: &[&FieldElement]) -> Result<Vec<Place>> {
    let mut primes = Vec::new();
    for x in elems.iter().filter(|x| !x.is_zero()) {
        primes.extend(rational_primes(&x.norm())?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places = Vec::new();
    for p in primes {
        places.extend(decompose_prime(field, p)?);
    }
    Ok(places)
}

/// `Σ_v normalized_log_abs(v, x)` over every place of the field.
pub fn product_formula_defect(x: &FieldElement) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    let field = x.field();
    let mut total = normalized_log_abs(&Place::infinity(field), x)?;
    for place in places_dividing(field, &[x])? {
        total += normalized_log_abs(&place, x)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};
    use crate::numfield::CLASS_NUMBER_ONE;

    fn gi(a: i64, b: i64) -> FieldElement {
        FieldElement::from_ints(BaseField::gaussian(), a, b)
    }

    #[test]
    fn gaussian_decompositions() {
        let f = BaseField::gaussian();
        let five = decompose_prime(f, 5).unwrap();
        assert_eq!(five.len(), 2);
        let gens: Vec<_> = five
            .iter()
            .map(|p| match &p.kind {
                PlaceKind::Finite { generator, splitting, f, e, .. } => {
                    assert_eq!((*splitting, *f, *e), (Splitting::Split, 1, 1));
                    generator.clone()
                }
                _ => unreachable!(),
            })
            .collect();
        assert!(gens.contains(&gi(2, 1)) && gens.contains(&gi(2, -1)));

        let three = decompose_prime(f, 3).unwrap();
        assert_eq!(three.len(), 1);
        assert!(matches!(
            &three[0].kind,
            PlaceKind::Finite { splitting: Splitting::Inert, f: 2, generator, .. } if *generator == gi(3, 0)
        ));

        let two = decompose_prime(f, 2).unwrap();
        assert_eq!(two.len(), 1);
        match &two[0].kind {
            PlaceKind::Finite { splitting, e, generator, .. } => {
                assert_eq!((*splitting, *e), (Splitting::Ramified, 2));
                assert_eq!(generator.norm(), rat(2));
                assert!(gi(1, 1).exact_quotient(generator).is_some());
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn decomposition_degrees_sum() {
        for m in CLASS_NUMBER_ONE {
            let f = BaseField::ImagQuadratic(m);
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 43, 67, 163, 1_000_003] {
                let places = decompose_prime(f, p).unwrap();
                let total: u32 = places.iter().map(|pl| pl.local_degree()).sum();
                assert_eq!(total, 2, "m={m} p={p}");
                for pl in &places {
                    let PlaceKind::Finite { generator, f: fdeg, .. } = &pl.kind else { unreachable!() };
                    let expected = num_traits::pow(rat(p as i64), *fdeg as usize);
                    assert_eq!(generator.norm(), expected, "m={m} p={p}");
                }
            }
        }
        assert!(matches!(decompose_prime(BaseField::ImagQuadratic(5), 3), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn valuations() {
        let f = BaseField::gaussian();
        let two = decompose_prime(f, 2).unwrap().remove(0);
        assert_eq!(valuation(&two, &gi(2, 0)).unwrap(), 2);
        assert_eq!(valuation(&two, &gi(1, 0)).unwrap(), 0);
        let five = decompose_prime(f, 5).unwrap();
        let p_plus = five
            .iter()
            .find(|p| matches!(&p.kind, PlaceKind::Finite { generator, .. } if *generator == gi(2, 1)))
            .unwrap();
        assert_eq!(valuation(p_plus, &gi(5, 0)).unwrap(), 1);
        assert_eq!(valuation(p_plus, &gi(2, 1)).unwrap(), 1);
        assert_eq!(valuation(p_plus, &gi(2, -1)).unwrap(), 0);
        let x = FieldElement::new(f, rat_frac(1, 5), rat(0));
        assert_eq!(valuation(p_plus, &x).unwrap(), -1);
        assert_eq!(valuation(p_plus, &FieldElement::zero(f)), Err(Error::InfiniteValuation));
    }

    #[test]
    fn normalized_values() {
        let q = BaseField::Rationals;
        let inf = Place::infinity(q);
        assert!((normalized_log_abs(&inf, &FieldElement::from_int(q, -3)).unwrap() - 3f64.ln()).abs() < 1e-15);
        let two = Place::rational_prime(2);
        assert!((normalized_log_abs(&two, &FieldElement::from_int(q, 8)).unwrap() + 3.0 * 2f64.ln()).abs() < 1e-15);
        let f = BaseField::gaussian();
        let v = normalized_log_abs(&Place::infinity(f), &gi(1, 1)).unwrap();
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn product_formula_examples() {
        let q = BaseField::Rationals;
        assert_eq!(product_formula_defect(&FieldElement::one(q)).unwrap(), 0.0);
        let x = FieldElement::from_rational(q, rat_frac(3, 7));
        assert!(product_formula_defect(&x).unwrap().abs() < 1e-12);
        assert!(product_formula_defect(&gi(2, 1)).unwrap().abs() < 1e-12);
    }
}
