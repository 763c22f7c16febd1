//! Integer and rational helpers shared by every module.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Natural log of a positive big integer, accurate to f64 rounding.
pub fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top: BigUint = n >> shift;
    (top.to_u64().unwrap() as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

/// `ln |r|` for a nonzero rational.
pub fn ln_abs_rational(r: &BigRational) -> f64 {
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int_part.abs() * &scale + frac_part;
        let signed = if negative { -mag } else { mag };
        return Ok(BigRational::new(signed, scale));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Canonical `"p/q"` (or `"p"` for integers) string.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter storing a rational as its `"p/q"` string.
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Gcd of two rationals: gcd of numerators over lcm of denominators.
pub fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    BigRational::new(
        a.numer().gcd(b.numer()),
        a.denom().lcm(b.denom()),
    )
}

/// Least common multiple of denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// p-adic valuation of a nonzero integer.
pub fn padic_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn padic_valuation_rational(r: &BigRational, p: u64) -> i64 {
    padic_valuation(r.numer(), p) - padic_valuation(r.denom(), p)
}

/// Prime factorization of a positive integer. Primes must fit in `u64`.
pub fn factorize(n: &BigUint) -> Result<BTreeMap<u64, u32>> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    if n.is_one() {
        return Ok(out);
    }
    if let Some(small) = n.to_u128() {
        for (p, e) in num_prime::nt_funcs::factorize128(small) {
            let p = u64::try_from(p).map_err(|_| Error::FactorizationTooLarge(n.to_string()))?;
            out.insert(p, e as u32);
        }
        return Ok(out);
    }
    let (found, rest) = num_prime::nt_funcs::factors(n.clone(), None);
    if rest.is_some() {
        return Err(Error::FactorizationTooLarge(n.to_string()));
    }
    for (p, e) in found {
        let p = p
            .to_u64()
            .ok_or_else(|| Error::FactorizationTooLarge(n.to_string()))?;
        *out.entry(p).or_insert(0) += e as u32;
    }
    Ok(out)
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn rational_primes(r: &BigRational) -> Result<Vec<u64>> {
    let mut primes: Vec<u64> = factorize(r.numer().magnitude())?.into_keys().collect();
    primes.extend(factorize(r.denom().magnitude())?.into_keys());
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// Integer square root (floor).
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn to_bigint_exact(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.numer().clone())
}

pub fn sign_of(n: &BigInt) -> Sign {
    n.sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_large_integers() {
        let n = num_traits::pow(BigUint::from(10u32), 40);
        assert!((ln_biguint(&n) - 40.0 * 10f64.ln()).abs() < 1e-12);
        assert!((ln_biguint(&BigUint::from(7u32)) - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), rat_frac(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4));
        assert_eq!(parse_rational("0.25").unwrap(), rat_frac(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat_frac(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat_frac(-6, 4)), "-3/2");
    }

    #[test]
    fn binomials_and_gcds() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(gcd_u64(12, 18), 6);
        assert_eq!(gcd_u64(0, 7), 7);
        assert_eq!(rational_gcd(&rat_frac(4, 3), &rat_frac(6, 5)), rat_frac(2, 15));
    }

    #[test]
    fn factorization() {
        let f = factorize(&BigUint::from(360u32)).unwrap();
        assert_eq!(f, BTreeMap::from([(2, 3), (3, 2), (5, 1)]));
        let big = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64) * BigUint::from(1u64 << 40);
        let f = factorize(&big).unwrap();
        assert_eq!(f[&2], 40);
        assert_eq!(f[&1_000_000_007], 1);
        assert_eq!(padic_valuation(&BigInt::from(-48), 2), 4);
    }
}
