//! Numerical root finding and factorization over ℚ.
//!
//! Roots are located in floating point (Aberth–Ehrlich); every factor and
//! every integer root reported is verified with exact arithmetic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::QPoly;
use crate::error::{Error, Result};

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots (with multiplicity) of a polynomial given by ascending
/// floating-point coefficients.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut coeffs: Vec<f64> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| *c == 0.0) {
        coeffs.pop();
    }
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let mut zero_roots = 0;
    while coeffs[0] == 0.0 {
        coeffs.remove(0);
        zero_roots += 1;
    }
    let n = coeffs.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_roots];
    if n == 0 {
        return roots;
    }
    let lead = coeffs[n];
    let c: Vec<Complex64> = coeffs.iter().map(|&a| Complex64::new(a / lead, 0.0)).collect();
    if n == 1 {
        roots.push(-c[0]);
        return roots;
    }
    // Fujiwara-type bound for the initial circle
    let radius = (0..n)
        .map(|k| c[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() == 0.0 || !denom.is_finite() { ratio } else { ratio / denom };
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    roots.extend(z);
    roots
}

/// Monic irreducible factorization over ℚ with multiplicities, sorted by
/// degree and then by coefficients.
pub fn factor_over_q(f: &QPoly) -> Result<Vec<(QPoly, u32)>> {
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        for g in split_squarefree(&part)? {
            out.push((g, mult));
        }
    }
    out.sort_by(|(a, ma), (b, mb)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
            .then(ma.cmp(mb))
    });
    Ok(out)
}

fn mignotte_bound(ints: &[BigInt]) -> f64 {
    let norm2: f64 = ints
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY).powi(2))
        .sum::<f64>()
        .sqrt();
    let lead = ints.last().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).unwrap_or(1.0);
    2f64.powi(ints.len() as i32) * norm2 * lead
}

fn split_squarefree(f: &QPoly) -> Result<Vec<QPoly>> {
    let Some(deg) = f.degree() else {
        return Ok(Vec::new());
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg == 1 {
        return Ok(vec![f.monic()]);
    }
    let ints = f.primitive_integer();
    if mignotte_bound(&ints) > 2f64.powi(50) {
        return Err(Error::PrecisionExhausted(format!(
            "coefficients of degree-{deg} polynomial too large for certified splitting"
        )));
    }
    let roots = complex_roots(&QPoly::from_bigints(&ints).to_f64());
    let mut remaining: Vec<Complex64> = roots;
    let mut current = QPoly::from_bigints(&ints);
    let mut factors = Vec::new();
    let mut k = 1;
    while 2 * k <= remaining.len() {
        let lead = current.primitive_integer().last().unwrap().to_f64().unwrap();
        let mut found = None;
        for combo in combinations(remaining.len(), k) {
            let mut prod = vec![Complex64::new(lead, 0.0)];
            for &i in &combo {
                let r = remaining[i];
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (j, &c) in prod.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * r;
                }
                prod = next;
            }
            let plausible = prod
                .iter()
                .all(|c| c.im.abs() < 1e-3 * c.re.abs().max(1.0) && (c.re - c.re.round()).abs() < 1e-3 * c.re.abs().max(1.0));
            if !plausible {
                continue;
            }
            let cand: Vec<BigInt> = prod.iter().map(|c| BigInt::from(c.re.round() as i128)).collect();
            let cand = QPoly::from_bigints(&cand);
            if cand.degree() != Some(k) {
                continue;
            }
            let (q, r) = current.div_rem(&cand);
            if r.is_zero() {
                found = Some((combo, cand, q));
                break;
            }
        }
        match found {
            Some((combo, cand, q)) => {
                factors.push(cand.monic());
                current = QPoly::from_bigints(&q.primitive_integer());
                let mut keep = Vec::new();
                for (i, r) in remaining.iter().enumerate() {
                    if !combo.contains(&i) {
                        keep.push(*r);
                    }
                }
                remaining = keep;
            }
            None => k += 1,
        }
    }
    if current.degree().unwrap_or(0) >= 1 {
        factors.push(current.monic());
    }
    Ok(factors)
}

/// k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn eval_i128(coeffs: &[i128], x: i128) -> Option<i128> {
    let mut acc: i128 = 0;
    for &c in coeffs.iter().rev() {
        acc = acc.checked_mul(x)?.checked_add(c)?;
    }
    Some(acc)
}

fn eval_exact_is_zero(coeffs: &[i128], x: i64) -> bool {
    match eval_i128(coeffs, x as i128) {
        Some(v) => v == 0,
        None => {
            let x = BigInt::from(x);
            let mut acc = BigInt::zero();
            for &c in coeffs.iter().rev() {
                acc = acc * &x + BigInt::from(c);
            }
            acc.is_zero()
        }
    }
}

fn integer_kth_root(v: i128, k: u32) -> Option<i128> {
    if v == 0 {
        return Some(0);
    }
    if v < 0 && k % 2 == 0 {
        return None;
    }
    let mag = v.unsigned_abs() as f64;
    let guess = mag.powf(1.0 / k as f64).round() as i128;
    for cand in [guess - 1, guess, guess + 1] {
        if cand < 0 {
            continue;
        }
        if let Some(p) = cand.checked_pow(k) {
            if p == v.abs() {
                return Some(if v < 0 { -cand } else { cand });
            }
        }
    }
    None
}

/// Integer roots in `[-bound, bound]` of a nonzero integer polynomial
/// (ascending coefficients). The zero polynomial is handled by the caller.
pub fn integer_roots_in_box(coeffs: &[i128], bound: i64) -> Vec<i64> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    let n = match coeffs.len() {
        0 | 1 => return Vec::new(),
        len => len - 1,
    };
    let in_box = |x: i128| x.abs() <= bound as i128;
    if n == 1 {
        let (c0, c1) = (coeffs[0], coeffs[1]);
        if c0 % c1 == 0 {
            let x = -c0 / c1;
            if in_box(x) {
                return vec![x as i64];
            }
        }
        return Vec::new();
    }
    // a·x^n + c
    if coeffs[1..n].iter().all(|&c| c == 0) {
        let (c0, cn) = (coeffs[0], coeffs[n]);
        if c0 % cn != 0 {
            return Vec::new();
        }
        let v = -c0 / cn;
        let Some(r) = integer_kth_root(v, n as u32) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for cand in [r, -r] {
            if in_box(cand) && !out.contains(&(cand as i64)) && eval_exact_is_zero(&coeffs, cand as i64) {
                out.push(cand as i64);
            }
        }
        out.sort_unstable();
        return out;
    }
    let fc: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
    let mut out = Vec::new();
    for r in complex_roots(&fc) {
        if r.im.abs() > 0.5 + 1e-6 * r.re.abs() || !r.re.is_finite() {
            continue;
        }
        let base = r.re.floor();
        for cand in [base - 1.0, base, base + 1.0, base + 2.0] {
            if cand.abs() > bound as f64 {
                continue;
            }
            let c = cand as i64;
            if !out.contains(&c) && eval_exact_is_zero(&coeffs, c) {
                out.push(c);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Rational value of a form's coefficient list as `i128`, if every
/// coefficient is an integer that fits.
pub fn to_i128_coeffs(coeffs: &[BigRational]) -> Option<Vec<i128>> {
    coeffs
        .iter()
        .map(|c| if c.is_integer() { c.numer().to_i128() } else { None })
        .collect()
}
