//! Machine-integer evaluation for points of `ℙⁿ(ℚ)` with small primitive
//! coordinates. Every function reports overflow instead of wrapping so
//! callers can fall back to the exact path.

use num_traits::ToPrimitive;

use crate::arith::{gcd_u128, gcd_u64};
use crate::geometry::HomogeneousForm;

/// A form with integer coefficients that fit in `i128`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntForm {
    degree: u32,
    /// Coefficient and the range of its `(variable, exponent)` factors.
    terms: Vec<(i128, usize, usize)>,
    factors: Vec<(usize, u32)>,
    /// Below these `max |x_i|` no partial sum can overflow `i128`, resp.
    /// `i64` (the latter only when every coefficient fits).
    safe_max: u128,
    safe_max_64: u128,
}

impl IntForm {
    pub fn new(f: &HomogeneousForm) -> Option<Self> {
        let mut terms = Vec::new();
        let mut factors = Vec::new();
        let mut l1 = 0f64;
        for (e, c) in f.terms() {
            if !c.is_integer() {
                return None;
            }
            let c = c.numer().to_i128()?;
            l1 += (c as f64).abs();
            let start = factors.len();
            factors.extend(e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k)));
            terms.push((c, start, factors.len()));
        }
        // Σ|c|·m^deg < 2^(bits−2), with margin for rounding in the float bound
        let safe = |bits: f64| {
            let s = 2f64.powf((bits - 3.0 - l1.max(1.0).log2()) / f.degree().max(1) as f64);
            if s.is_finite() && s >= 1.0 { s.floor() as u128 } else { 0 }
        };
        Some(IntForm { degree: f.degree(), terms, factors, safe_max: safe(128.0), safe_max_64: safe(64.0) })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `F(x)`, or `None` on overflow.
    pub fn eval(&self, x: &[i64]) -> Option<i128> {
        self.eval_with_max(x, max_abs(x))
    }

    /// [`IntForm::eval`] with `max |x_i|` supplied by the caller.
    #[inline]
    pub fn eval_with_max(&self, x: &[i64], max: u128) -> Option<i128> {
        if max < self.safe_max_64 {
            let mut acc: i64 = 0;
            for &(c, a, b) in &self.terms {
                let mut term = c as i64;
                for &(i, k) in &self.factors[a..b] {
                    for _ in 0..k {
                        term *= x[i];
                    }
                }
                acc += term;
            }
            return Some(acc as i128);
        }
        if max < self.safe_max {
            let mut acc: i128 = 0;
            for &(c, a, b) in &self.terms {
                let mut term = c;
                for &(i, k) in &self.factors[a..b] {
                    for _ in 0..k {
                        term *= x[i] as i128;
                    }
                }
                acc += term;
            }
            return Some(acc);
        }
        let mut acc: i128 = 0;
        for &(c, a, b) in &self.terms {
            let mut term = c;
            for &(i, k) in &self.factors[a..b] {
                term = term.checked_mul((x[i] as i128).checked_pow(k)?)?;
            }
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }
}

/// `ln n` for `n ≥ 1`, tabulated below a cutoff.
#[derive(Clone, Debug)]
pub struct LnTable {
    table: Vec<f64>,
}

impl LnTable {
    pub fn new(size: usize) -> Self {
        LnTable { table: (0..=size).map(|n| if n == 0 { f64::NEG_INFINITY } else { (n as f64).ln() }).collect() }
    }

    #[inline]
    pub fn ln(&self, n: u128) -> f64 {
        match self.table.get(n as usize) {
            Some(&v) if n < self.table.len() as u128 => v,
            _ => (n as f64).ln(),
        }
    }
}

pub fn max_abs(x: &[i64]) -> u128 {
    x.iter().map(|v| v.unsigned_abs() as u128).max().unwrap_or(0)
}

/// `h(x)` for primitive integer coordinates.
pub fn weil_height(x: &[i64], ln: &LnTable) -> f64 {
    ln.ln(max_abs(x))
}

/// Archimedean local height `deg·log max|x_i| − log|F(x)|`: `Some(None)`
/// when `F(x) = 0`, `None` on overflow.
pub fn local_height_inf(f: &IntForm, x: &[i64], ln: &LnTable) -> Option<Option<f64>> {
    let v = f.eval(x)?;
    if v == 0 {
        return Some(None);
    }
    Some(Some(f.degree as f64 * ln.ln(max_abs(x)) - ln.ln(v.unsigned_abs())))
}

/// Generalized GCD height data of a primitive integer point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GcdValue {
    /// `min_g λ_{g,∞}(x)`.
    pub archimedean: f64,
    /// Positive gcd of the generator values: `exp` of the finite part.
    pub finite_gcd: u128,
}

impl GcdValue {
    pub fn finite(&self, ln: &LnTable) -> f64 {
        ln.ln(self.finite_gcd)
    }

    pub fn total(&self, ln: &LnTable) -> f64 {
        self.archimedean + self.finite(ln)
    }
}

/// `Some(None)` when every generator vanishes (the point lies on the cycle),
/// `None` on overflow.
pub fn gcd_value(gens: &[IntForm], x: &[i64], ln: &LnTable) -> Option<Option<GcdValue>> {
    let max = max_abs(x);
    let m = ln.ln(max);
    let mut arch = f64::INFINITY;
    let mut g: u128 = 0;
    for f in gens {
        let v = f.eval_with_max(x, max)?;
        if v == 0 {
            continue;
        }
        let a = v.unsigned_abs();
        g = gcd_u128(g, a);
        arch = arch.min(f.degree as f64 * m - ln.ln(a));
    }
    if g == 0 {
        return Some(None);
    }
    Some(Some(GcdValue { archimedean: arch, finite_gcd: g }))
}

impl IntForm {
    /// Coefficients (ascending) in the last variable after fixing the
    /// others to `prefix`; `None` on overflow.
    fn specialize_last(&self, prefix: &[i64]) -> Option<Vec<i128>> {
        let last = prefix.len();
        let mut coeffs = vec![0i128; self.degree as usize + 1];
        for &(c, a, b) in &self.terms {
            let mut term = c;
            let mut k_last = 0;
            for &(i, k) in &self.factors[a..b] {
                if i == last {
                    k_last = k as usize;
                } else {
                    term = term.checked_mul((prefix[i] as i128).checked_pow(k)?)?;
                }
            }
            coeffs[k_last] = coeffs[k_last].checked_add(term)?;
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Some(coeffs)
    }
}

/// A univariate integer polynomial with the cheapest evaluation that is
/// provably exact on `|t| ≤ bound`.
enum Horner {
    Constant(i128),
    Small(Vec<i64>),
    Wide(Vec<i128>),
    Checked(Vec<i128>),
}

impl Horner {
    fn new(coeffs: Vec<i128>, bound: i64) -> Self {
        if coeffs.len() == 1 {
            return Horner::Constant(coeffs[0]);
        }
        let b = (bound.max(1)) as f64;
        let size: f64 = coeffs.iter().enumerate().map(|(k, &c)| (c as f64).abs() * b.powi(k as i32)).sum();
        if size < 2f64.powi(60) {
            Horner::Small(coeffs.iter().map(|&c| c as i64).collect())
        } else if size < 2f64.powi(124) {
            Horner::Wide(coeffs)
        } else {
            Horner::Checked(coeffs)
        }
    }

    #[inline]
    fn eval(&self, t: i64) -> Option<i128> {
        match self {
            Horner::Constant(c) => Some(*c),
            Horner::Small(c) => Some(c.iter().rev().fold(0i64, |acc, &a| acc * t + a) as i128),
            Horner::Wide(c) => Some(c.iter().rev().fold(0i128, |acc, &a| acc * t as i128 + a)),
            Horner::Checked(c) => {
                c.iter().rev().try_fold(0i128, |acc, &a| acc.checked_mul(t as i128)?.checked_add(a))
            }
        }
    }
}

/// A point handed out by [`sweep_box`].
pub struct SweepPoint<'a> {
    pub x: &'a [i64],
    pub max: u128,
    /// Form values, `None` where machine arithmetic would overflow.
    pub values: &'a [Option<i128>],
    /// Forms that do not depend on the last coordinate for this prefix.
    pub constant: &'a [bool],
    /// Increases whenever the first `n − 1` coordinates change.
    pub prefix: u64,
}

/// Visits the same points as [`crate::points::visit_box`], in the same
/// order, with the values of `forms`. Forms are specialized once per prefix
/// of the first `n − 1` coordinates and then evaluated by Horner's rule.
pub fn sweep_box(nvars: usize, bound: i64, forms: &[IntForm], f: &mut impl FnMut(&SweepPoint)) {
    struct State<'f, F> {
        forms: &'f [IntForm],
        bound: i64,
        x: Vec<i64>,
        values: Vec<Option<i128>>,
        constant: Vec<bool>,
        prefix: u64,
        f: F,
    }
    fn inner<F: FnMut(&SweepPoint)>(st: &mut State<'_, F>, g: u64, started: bool) {
        let last = st.x.len() - 1;
        let polys: Vec<Option<Horner>> =
            st.forms.iter().map(|p| p.specialize_last(&st.x[..last]).map(|c| Horner::new(c, st.bound))).collect();
        for (i, p) in polys.iter().enumerate() {
            st.constant[i] = matches!(p, Some(Horner::Constant(_)));
            if let Some(Horner::Constant(c)) = p {
                st.values[i] = Some(*c);
            }
        }
        st.prefix += 1;
        let head_max = st.x[..last].iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
        let lo = if started { -st.bound } else { 1 };
        // x is primitive iff no prime factor of the prefix gcd divides t
        let primes = prime_factors(g);
        for t in lo..=st.bound {
            if g != 1 && (g == 0 && t != 1 || primes.iter().any(|&p| t.unsigned_abs() % p == 0)) {
                continue;
            }
            st.x[last] = t;
            for (i, p) in polys.iter().enumerate() {
                if !st.constant[i] {
                    st.values[i] = p.as_ref().and_then(|p| p.eval(t));
                }
            }
            let point = SweepPoint {
                x: &st.x,
                max: head_max.max(t.unsigned_abs()) as u128,
                values: &st.values,
                constant: &st.constant,
                prefix: st.prefix,
            };
            (st.f)(&point);
        }
    }
    fn rec<F: FnMut(&SweepPoint)>(st: &mut State<'_, F>, i: usize, g: u64, started: bool) {
        if i + 1 == st.x.len() {
            inner(st, g, started);
            return;
        }
        let lo = if started { -st.bound } else { 0 };
        for v in lo..=st.bound {
            st.x[i] = v;
            rec(st, i + 1, gcd_u64(g, v.unsigned_abs()), started || v != 0);
        }
        st.x[i] = 0;
    }
    if nvars == 0 || bound < 1 {
        return;
    }
    let mut st = State {
        forms,
        bound,
        x: vec![0; nvars],
        values: vec![None; forms.len()],
        constant: vec![false; forms.len()],
        prefix: 0,
        f,
    };
    rec(&mut st, 0, 0, false);
}

fn prime_factors(mut g: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= g {
        if g % p == 0 {
            out.push(p);
            while g % p == 0 {
                g /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if g > 1 {
        out.push(g);
    }
    out
}

/// [`gcd_value`] over a [`sweep_box`] stream, reusing logarithms and the
/// partial gcd of generators that are constant along the current prefix.
pub struct GcdSweep {
    degrees: Vec<f64>,
    prefix: u64,
    const_gcd: u128,
    const_logs: Vec<(f64, f64)>,
}

impl GcdSweep {
    pub fn new(gens: &[IntForm]) -> Self {
        GcdSweep {
            degrees: gens.iter().map(|g| g.degree as f64).collect(),
            prefix: 0,
            const_gcd: 0,
            const_logs: Vec::new(),
        }
    }

    /// Generator values occupy `values[offset..offset + #gens]`; `None` on
    /// overflow, `Some(None)` on the cycle.
    pub fn eval(&mut self, p: &SweepPoint, offset: usize, ln: &LnTable) -> Option<Option<GcdValue>> {
        let n = self.degrees.len();
        let vals = &p.values[offset..offset + n];
        if p.prefix != self.prefix {
            self.prefix = p.prefix;
            self.const_gcd = 0;
            self.const_logs.clear();
            for i in 0..n {
                if p.constant[offset + i] {
                    let v = vals[i]?.unsigned_abs();
                    if v != 0 {
                        self.const_gcd = gcd_u128(self.const_gcd, v);
                        self.const_logs.push((self.degrees[i], ln.ln(v)));
                    }
                }
            }
        }
        let m = ln.ln(p.max);
        let mut g = self.const_gcd;
        let mut arch = self.const_logs.iter().map(|&(d, l)| d * m - l).fold(f64::INFINITY, f64::min);
        for i in 0..n {
            if p.constant[offset + i] {
                continue;
            }
            let v = vals[i]?.unsigned_abs();
            if v != 0 {
                g = gcd_u128(g, v);
                arch = arch.min(self.degrees[i] * m - ln.ln(v));
            }
        }
        if g == 0 {
            return Some(None);
        }
        Some(Some(GcdValue { archimedean: arch, finite_gcd: g }))
    }
}
