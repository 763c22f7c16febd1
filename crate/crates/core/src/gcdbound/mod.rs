//! Constructive generalized GCD bound on `ℙⁿ`: parameter choice, the
//! multiplicity linear system, an exact auxiliary form vanishing to order
//! `μ` on a zero-cycle, its certification, and empirical height checks.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, format_rational, rational_string};
use crate::error::{Error, Result};
use crate::geometry::algebraic::NfElem;
use crate::geometry::cycle::{form_from_vector, monomial_basis};
use crate::geometry::form::Exponents;
use crate::geometry::poly::Scalar;
use crate::geometry::{HomogeneousForm, ProjectivePoint, ZeroCycle};
use crate::heights::fast::{self, sweep_box, GcdSweep, IntForm, LnTable, SweepPoint};
use crate::heights::{cycle_proximity, gcd_height, log_coeff_norm, weil_height};
use crate::numfield::Place;
use crate::linalg;

/// Orbits of larger degree are rejected: their conditions would dominate
/// any desk-scale system.
pub const MAX_ORBIT_DEGREE: usize = 64;

/// Parameters `(n, d, e, η, δ, s, μ)` for a section of `O(s)` on `ℙⁿ`
/// vanishing to order `μ` on `d` points, with `𝓛 = O(e)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcdParameters {
    pub n: u32,
    pub d: u32,
    pub e: u32,
    #[serde(with = "rational_string")]
    pub eta: BigRational,
    #[serde(with = "rational_string")]
    pub delta: BigRational,
    pub s_total: u32,
    pub mu: u32,
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn binom_q(n: u64, k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n, k)))
}

/// `x < y^{1/n} + δ` (or `≤` when `strict` is false), exactly, for `y > 0`.
fn below_root_plus(x: &BigRational, y: &BigRational, n: u32, delta: &BigRational, strict: bool) -> bool {
    let lhs = x - delta;
    if !lhs.is_positive() {
        return true;
    }
    let p = num_traits::pow(lhs, n as usize);
    if strict {
        &p < y
    } else {
        &p <= y
    }
}

impl GcdParameters {
    /// `dim H⁰(ℙⁿ, O(s)) = C(n+s, n)`.
    pub fn section_dimension(&self) -> BigUint {
        binomial((self.n + self.s_total) as u64, self.n as u64)
    }

    /// `d·C(n+μ−1, n)`: conditions for vanishing to order `μ`.
    pub fn exact_condition_count(&self) -> BigUint {
        BigUint::from(self.d) * binomial((self.n + self.mu - 1) as u64, self.n as u64)
    }

    /// `d·C(n+μ, n)`: the conservative count used when choosing parameters.
    pub fn conservative_condition_count(&self) -> BigUint {
        BigUint::from(self.d) * binomial((self.n + self.mu) as u64, self.n as u64)
    }

    pub fn volume(&self) -> BigRational {
        num_traits::pow(big(self.e as u64), self.n as usize)
    }

    /// `s/μ` in units of `𝓛`: `s_total/(μ·e)`.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.s_total), BigInt::from(self.mu as u64 * self.e as u64))
    }

    pub fn kernel_condition_holds(&self) -> bool {
        self.section_dimension() > self.exact_condition_count()
    }

    /// `s_total/(μe) < (d/η)^{1/n} + δ`.
    pub fn ratio_condition_holds(&self) -> bool {
        let y = big(self.d as u64) / &self.eta;
        below_root_plus(&self.ratio(), &y, self.n, &self.delta, true)
    }

    /// `(d/vol)^{1/n}`, the exponent the GCD bound approaches.
    pub fn target_exponent(&self) -> f64 {
        (self.d as f64 / crate::numfield::rational_to_f64(&self.volume())).powf(1.0 / self.n as f64)
    }

    /// The auxiliary section can feed the Main Criterion only when the
    /// exponent is below 1.
    pub fn criterion_applicable(&self) -> bool {
        // (d/vol)^{1/n} + δ < 1  ⇔  1 − δ > 0 and (1 − δ)^n > d/vol
        let one_minus = BigRational::one() - &self.delta;
        one_minus.is_positive()
            && num_traits::pow(one_minus, self.n as usize) > big(self.d as u64) / self.volume()
    }
}

/// Lexicographically smallest `(μ, s_total)` with
/// `C(n+s, n) > d·C(n+μ, n)` and `s/(μe) ≤ (d/eⁿ)^{1/n} + δ`; `η` is
/// `eⁿ·max(1 − δ/2, 1/2)`.
pub fn choose_parameters(n: u32, d: u32, e: u32, delta: &BigRational) -> Result<GcdParameters> {
    if n == 0 || d == 0 || e == 0 || !delta.is_positive() {
        return Err(Error::InvalidInput("need n, d, e ≥ 1 and δ > 0".into()));
    }
    let vol = num_traits::pow(big(e as u64), n as usize);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let factor = (BigRational::one() - delta * &half).max(half.clone());
    let eta = &vol * factor;
    let target = big(d as u64) / &vol;
    let mut s: u64 = 1;
    for mu in 1u64..=1_000_000 {
        let conditions = big(d as u64) * binom_q(n as u64 + mu, n as u64);
        while binom_q(n as u64 + s, n as u64) <= conditions {
            s += 1;
        }
        let ratio = BigRational::new(BigInt::from(s), BigInt::from(mu * e as u64));
        if below_root_plus(&ratio, &target, n, delta, false) {
            let params =
                GcdParameters { n, d, e, eta, delta: delta.clone(), s_total: s as u32, mu: mu as u32 };
            debug_assert!(params.kernel_condition_holds() && params.ratio_condition_holds());
            return Ok(params);
        }
    }
    Err(Error::Unsupported("no parameters with μ ≤ 10⁶; increase δ".into()))
}

/// Linear conditions on the coefficients of a degree-`s_total` form.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicitySystem {
    pub rows: Vec<Vec<BigRational>>,
    /// Column monomials, lexicographically descending.
    pub basis: Vec<Exponents>,
    pub nvars: usize,
    pub degree: u32,
    pub mu: u32,
}

pub fn build_multiplicity_system(cycle: &ZeroCycle, s_total: u32, mu: u32) -> Result<MultiplicitySystem> {
    if mu == 0 {
        return Err(Error::InvalidInput("multiplicity must be at least 1".into()));
    }
    if let Some(i) = cycle.orbits.iter().position(|o| o.degree > MAX_ORBIT_DEGREE) {
        return Err(Error::UnsupportedOrbit(i));
    }
    let (rows, basis) = cycle.multiplicity_rows(s_total, mu);
    Ok(MultiplicitySystem { rows, basis, nvars: cycle.ambient_dim + 1, degree: s_total, mu })
}

/// A kernel form with the dimension of the solution space.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelForm {
    pub form: HomogeneousForm,
    pub kernel_dim: usize,
    pub rank: usize,
}

/// The primitive integer kernel vector attached to the first free column.
pub fn kernel_form(system: &MultiplicitySystem) -> Result<KernelForm> {
    let ech = linalg::echelon(&system.rows, system.basis.len());
    let free = ech.free_columns();
    let Some(&first) = free.first() else {
        return Err(Error::NoKernel);
    };
    let v = ech.kernel_vector(first);
    debug_assert!(linalg::apply(&system.rows, &v).iter().all(|x| x.is_zero()));
    Ok(KernelForm {
        form: form_from_vector(system.nvars, system.degree, &system.basis, &v),
        kernel_dim: free.len(),
        rank: ech.rank(),
    })
}

/// Every partial derivative of order `≤ μ−1` of `F` vanishes at every
/// geometric point of the cycle, checked in each orbit's field.
pub fn certify_multiplicity(f: &HomogeneousForm, cycle: &ZeroCycle, mu: u32) -> bool {
    if f.is_zero() || f.nvars() != cycle.ambient_dim + 1 {
        return false;
    }
    for orbit in &cycle.orbits {
        let point: Vec<NfElem> = orbit.exact.point();
        for order in 0..mu {
            for alpha in monomial_basis(f.nvars(), order) {
                if let Some(g) = f.derivative(&alpha) {
                    if !g.evaluate_scalar(&point).is_zero_elem() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub point: ProjectivePoint,
    pub defect: f64,
}

/// Auxiliary form `F` with its parameters and verification record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionCertificate {
    pub params: GcdParameters,
    pub cycle: ZeroCycle,
    pub form: HomogeneousForm,
    pub monomial_order: String,
    pub kernel_dim: usize,
    pub rank: usize,
    pub exact_condition_count: String,
    pub conservative_condition_count: String,
    pub multiplicity_verified: bool,
    #[serde(with = "rational_string")]
    pub coeff_norm: BigRational,
    /// `log ‖F‖₁ + n·log(s_total + 1)`.
    pub slack: f64,
    pub sample_size: usize,
    pub exceptional_count: usize,
    pub exceptional_examples: Vec<ProjectivePoint>,
    /// `max (μ·h(Y,x) − s_total·h(x))` over sampled points off `div(F)`.
    pub empirical_constant: Option<f64>,
    pub witness: Option<ProjectivePoint>,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    /// `max (m_∞(Y,x) − h(Y,x))` over sampled points off `Y`; never positive
    /// since the finite places contribute nonnegative terms.
    pub proximity_excess: Option<f64>,
    pub proximity_violations: usize,
}

const KEPT_EXAMPLES: usize = 32;
const TOLERANCE: f64 = 1e-9;

/// Builds, solves and certifies the multiplicity system.
pub fn construct_certificate(cycle: &ZeroCycle, params: &GcdParameters) -> Result<SectionCertificate> {
    let system = build_multiplicity_system(cycle, params.s_total, params.mu)?;
    let kernel = kernel_form(&system)?;
    let verified = certify_multiplicity(&kernel.form, cycle, params.mu);
    let coeff_norm = kernel.form.coeff_l1_norm();
    let slack = log_coeff_norm(&kernel.form) + params.n as f64 * ((params.s_total + 1) as f64).ln();
    Ok(SectionCertificate {
        params: params.clone(),
        cycle: cycle.clone(),
        form: kernel.form,
        monomial_order: "lex-descending".into(),
        kernel_dim: kernel.kernel_dim,
        rank: kernel.rank,
        exact_condition_count: system.rows.len().to_string(),
        conservative_condition_count: (BigUint::from(cycle.geometric_degree() as u64)
            * binomial((params.n + params.mu) as u64, params.n as u64))
        .to_string(),
        multiplicity_verified: verified,
        coeff_norm,
        slack,
        sample_size: 0,
        exceptional_count: 0,
        exceptional_examples: Vec::new(),
        empirical_constant: None,
        witness: None,
        violation_count: 0,
        violations: Vec::new(),
        proximity_excess: None,
        proximity_violations: 0,
    })
}

impl SectionCertificate {
    fn record(&mut self, e: PointEval, x: impl Fn() -> ProjectivePoint) {
        self.sample_size += 1;
        if let Some((arch, total)) = e.gcd {
            let excess = arch - total;
            self.proximity_excess = Some(self.proximity_excess.map_or(excess, |m| m.max(excess)));
            if excess > TOLERANCE {
                self.proximity_violations += 1;
            }
        }
        let Some(defect) = e.defect else {
            self.exceptional_count += 1;
            if self.exceptional_examples.len() < KEPT_EXAMPLES {
                self.exceptional_examples.push(x());
            }
            return;
        };
        if self.empirical_constant.is_none_or(|c| defect > c) {
            self.empirical_constant = Some(defect);
            self.witness = Some(x());
        }
        if defect > self.slack + TOLERANCE {
            self.violation_count += 1;
            if self.violations.len() < KEPT_EXAMPLES {
                self.violations.push(Violation { point: x(), defect });
            }
        }
    }

    pub fn coeff_norm_string(&self) -> String {
        format_rational(&self.coeff_norm)
    }
}

/// One sampled point: `(m_∞(Y,x), h(Y,x))` off `Y`, and the defect
/// `μ·h(Y,x) − s_total·h(x)` off `div(F)`.
struct PointEval {
    gcd: Option<(f64, f64)>,
    defect: Option<f64>,
}

struct FastContext {
    f: IntForm,
    gens: Vec<IntForm>,
    ln: LnTable,
    mu: f64,
    s: f64,
}

impl FastContext {
    fn new(cert: &SectionCertificate) -> Option<Self> {
        Some(FastContext {
            f: IntForm::new(&cert.form)?,
            gens: cert.cycle.generators.iter().map(IntForm::new).collect::<Option<Vec<_>>>()?,
            ln: LnTable::new(1 << 16),
            mu: cert.params.mu as f64,
            s: cert.params.s_total as f64,
        })
    }

    /// `None` on overflow.
    fn eval(&self, x: &[i64]) -> Option<PointEval> {
        let on_f = self.f.eval(x)? == 0;
        let gcd = fast::gcd_value(&self.gens, x, &self.ln)?.map(|g| (g.archimedean, g.total(&self.ln)));
        let defect = match gcd {
            Some((_, total)) if !on_f => Some(self.mu * total - self.s * fast::weil_height(x, &self.ln)),
            _ => None,
        };
        Some(PointEval { gcd, defect })
    }
}

fn exact_eval(cert: &SectionCertificate, x: &ProjectivePoint) -> Result<PointEval> {
    let on_f = cert.form.evaluate(x.coords())?.is_zero();
    let gcd = match cert.cycle.contains(x)? {
        true => None,
        false => {
            let arch = cycle_proximity(&cert.cycle, &[Place::infinity(x.field())], x)?;
            Some((arch, gcd_height(&cert.cycle, x)?))
        }
    };
    let defect = match gcd {
        Some((_, total)) if !on_f => {
            Some(cert.params.mu as f64 * total - cert.params.s_total as f64 * weil_height(x))
        }
        _ => None,
    };
    Ok(PointEval { gcd, defect })
}

/// Evaluates `μ·h(Y,x) − s_total·h(x)` over the sample, recording the
/// maximum, violations of the slack bound, and points on `div(F)`.
pub fn empirical_gcd_bound_check(cert: &SectionCertificate, sample: &[ProjectivePoint]) -> Result<SectionCertificate> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if !cert.multiplicity_verified {
        return Err(Error::InvalidInput("certificate is not multiplicity-verified".into()));
    }
    let mut out = cert.clone();
    let fast_ctx = FastContext::new(cert);
    for x in sample {
        let x = x.normalized();
        let fast = match (&fast_ctx, x.to_i64()) {
            (Some(ctx), Some(c)) => ctx.eval(&c),
            _ => None,
        };
        let e = match fast {
            Some(e) => e,
            None => exact_eval(cert, &x)?,
        };
        out.record(e, || x.clone());
    }
    Ok(out)
}

/// [`empirical_gcd_bound_check`] over every point of `ℙⁿ(ℚ)` with
/// `max |x_i| ≤ bound`.
pub fn box_gcd_bound_check(cert: &SectionCertificate, bound: i64) -> Result<SectionCertificate> {
    if !cert.multiplicity_verified {
        return Err(Error::InvalidInput("certificate is not multiplicity-verified".into()));
    }
    let ctx = FastContext::new(cert)
        .ok_or_else(|| Error::Unsupported("box sweeps need integer forms that fit in 128 bits".into()))?;
    let mut out = cert.clone();
    let mut err = None;
    let point = |x: &[i64]| ProjectivePoint::from_ints(x).expect("nonzero");
    let mut forms = vec![ctx.f.clone()];
    forms.extend(ctx.gens.iter().cloned());
    let mut gcds = GcdSweep::new(&ctx.gens);
    sweep_box(cert.cycle.ambient_dim + 1, bound, &forms, &mut |p: &SweepPoint| {
        let fast = (|| {
            let on_f = p.values[0]? == 0;
            let gcd = gcds.eval(p, 1, &ctx.ln)?.map(|g| (g.archimedean, g.total(&ctx.ln)));
            let defect = match gcd {
                Some((_, total)) if !on_f => Some(ctx.mu * total - ctx.s * ctx.ln.ln(p.max)),
                _ => None,
            };
            Some(PointEval { gcd, defect })
        })();
        let e = match fast {
            Some(e) => e,
            None => match exact_eval(cert, &point(p.x)) {
                Ok(e) => e,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            },
        };
        out.record(e, || point(p.x));
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Exponents attached to the GCD problem on `n`-folds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VojtaExponents {
    pub n: u32,
    /// `1/(n−1)`.
    pub vojta_exponent: f64,
    /// `1/(2·(n!)^{1/n})`.
    pub homo_exponent: f64,
    /// `2·(n!)^{1/n} ≥ n − 1`, decided on integers as `2ⁿ·n! ≥ (n−1)ⁿ`.
    pub corollary_holds: bool,
    pub corollary_lhs: f64,
    pub corollary_rhs: f64,
}

impl VojtaExponents {
    /// `(d/vol)^{1/n}`.
    pub fn runge_exponent(&self, d: f64, vol: f64) -> f64 {
        (d / vol).powf(1.0 / self.n as f64)
    }
}

pub fn vojta_gcd_exponents(n: u32) -> Result<VojtaExponents> {
    if n < 2 {
        return Err(Error::Undefined(format!("1/(n−1) at n = {n}")));
    }
    let factorial: BigUint = (1..=n as u64).map(BigUint::from).product();
    let lhs = BigUint::from(2u32).pow(n) * &factorial;
    let rhs = BigUint::from(n - 1).pow(n);
    // (n!)^{1/n} via logs; only the reported magnitudes use floats
    let ln_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let root = (ln_fact / n as f64).exp();
    Ok(VojtaExponents {
        n,
        vojta_exponent: 1.0 / (n - 1) as f64,
        homo_exponent: 1.0 / (2.0 * root),
        corollary_holds: lhs >= rhs,
        corollary_lhs: 2.0 * root,
        corollary_rhs: (n - 1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};
    use crate::geometry::cycle::ExactOrbit;
    use crate::geometry::poly::QPoly;

    fn origin() -> ZeroCycle {
        ZeroCycle::from_points(2, &[ProjectivePoint::from_ints(&[0, 0, 1]).unwrap()]).unwrap()
    }

    #[test]
    fn parameter_examples() {
        let p = choose_parameters(2, 1, 1, &rat_frac(1, 2)).unwrap();
        assert_eq!((p.mu, p.s_total), (2, 3));
        let q = choose_parameters(1, 1, 1, &rat_frac(1, 100)).unwrap();
        assert_eq!(q.s_total, q.mu + 1);
        assert!(q.mu >= 100);
        let r = choose_parameters(2, 4, 1, &rat_frac(1, 4)).unwrap();
        assert!(r.ratio() <= rat_frac(9, 4));
        assert!(r.kernel_condition_holds() && r.ratio_condition_holds());
    }

    #[test]
    fn system_and_kernel() {
        let sys = build_multiplicity_system(&origin(), 3, 2).unwrap();
        assert_eq!((sys.rows.len(), sys.basis.len()), (3, 10));
        let k = kernel_form(&sys).unwrap();
        assert_eq!(k.kernel_dim, 7);
        for m in [[0, 0, 3], [1, 0, 2], [0, 1, 2]] {
            assert!(k.form.coeff(&m).is_zero());
        }
        assert!(certify_multiplicity(&k.form, &origin(), 2));

        let empty = MultiplicitySystem { rows: Vec::new(), basis: monomial_basis(2, 2), nvars: 2, degree: 2, mu: 1 };
        assert_eq!(kernel_form(&empty).unwrap().form, HomogeneousForm::parse("x0^2", 2).unwrap());

        let full = MultiplicitySystem {
            rows: vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]],
            basis: monomial_basis(2, 1),
            nvars: 2,
            degree: 1,
            mu: 1,
        };
        assert_eq!(kernel_form(&full), Err(Error::NoKernel));
    }

    #[test]
    fn sqrt_two_rows() {
        let orbit = ExactOrbit::new(&QPoly::from_ints(&[-2, 0, 1]), &[QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1])]).unwrap();
        let y = ZeroCycle::from_orbits(1, vec![orbit]).unwrap();
        let sys = build_multiplicity_system(&y, 2, 1).unwrap();
        assert_eq!(sys.rows.len(), 2);
        let f = HomogeneousForm::parse("x0^2 - 2*x1^2", 2).unwrap();
        assert!(certify_multiplicity(&f, &y, 1));
        assert!(!certify_multiplicity(&f, &y, 2));
    }

    #[test]
    fn certify_examples() {
        let y = origin();
        assert!(certify_multiplicity(&HomogeneousForm::parse("x0^2*x2", 3).unwrap(), &y, 2));
        assert!(!certify_multiplicity(&HomogeneousForm::parse("x2^3", 3).unwrap(), &y, 1));
    }

    #[test]
    fn empirical_examples() {
        let y = origin();
        let params = choose_parameters(2, 1, 1, &rat_frac(1, 2)).unwrap();
        let mut cert = construct_certificate(&y, &params).unwrap();
        cert.form = HomogeneousForm::parse("x0^2*x2", 3).unwrap();
        let mut sample = Vec::new();
        for a in 1..=30 {
            for b in 1..=30 {
                sample.push(ProjectivePoint::from_ints(&[a, b, 1]).unwrap());
            }
        }
        sample.push(ProjectivePoint::from_ints(&[1, 0, 0]).unwrap());
        let out = empirical_gcd_bound_check(&cert, &sample).unwrap();
        assert_eq!(out.exceptional_count, 1);
        assert!(out.empirical_constant.unwrap() <= 1e-12);
        assert_eq!(out.violation_count, 0);
        // (g:g:1): defect −log g
        let g = empirical_gcd_bound_check(&cert, &[ProjectivePoint::from_ints(&[7, 7, 1]).unwrap()]).unwrap();
        assert!((g.empirical_constant.unwrap() + 7f64.ln()).abs() < 1e-12);
        assert_eq!(empirical_gcd_bound_check(&cert, &[]), Err(Error::EmptySample));
    }

    #[test]
    fn vojta_boundary() {
        for n in 2..=10 {
            assert!(vojta_gcd_exponents(n).unwrap().corollary_holds, "n = {n}");
        }
        assert!(!vojta_gcd_exponents(11).unwrap().corollary_holds);
        let two = vojta_gcd_exponents(2).unwrap();
        assert!((two.homo_exponent - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(two.vojta_exponent, 1.0);
        assert!(matches!(vojta_gcd_exponents(1), Err(Error::Undefined(_))));
    }
}
