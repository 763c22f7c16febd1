//! Empirical τ-profiles: the largest ratio `m_∞(Y,x)/(e·h(x))` over points
//! of growing height. These are lower-bound profiles, never certified
//! values of τ.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::problem::Problem;
use crate::error::{Error, Result};
use crate::geometry::cycle::{form_from_vector, monomial_basis};
use crate::geometry::{HomogeneousForm, ProjectivePoint, Variety, ZeroCycle};
use crate::heights::fast::{sweep_box, GcdSweep, IntForm, LnTable, SweepPoint};
use crate::heights::{cycle_proximity, weil_height};
use crate::linalg;
use crate::numfield::{BaseField, Place};
use crate::points::{enumerate_projective_points, EnumerationSpec};

pub const DEFAULT_H_MIN: f64 = 2.0;

pub const PROFILE_LABEL: &str = "empirical lower-bound profile for tau; not a certified value";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauRow {
    pub tier: usize,
    /// Multiplicative height bound `H_k` of the tier.
    pub height_bound: f64,
    /// Points with `h_min ≤ h(x) ≤ log H_k` that entered the maximum.
    pub points: usize,
    pub tau_hat: Option<f64>,
    pub witness: Option<ProjectivePoint>,
    pub witness_proximity: Option<f64>,
    pub witness_height: Option<f64>,
}

/// A low-degree form through all tier witnesses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeelReport {
    pub degree: u32,
    pub form: HomogeneousForm,
    pub witnesses: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauProfile {
    pub label: String,
    pub cycle: ZeroCycle,
    pub e: u32,
    pub h_min: f64,
    pub height_bound: f64,
    pub exceptional: Vec<HomogeneousForm>,
    pub examined: usize,
    pub excluded_exceptional: usize,
    pub excluded_on_cycle: usize,
    pub rows: Vec<TauRow>,
    pub peel: Option<PeelReport>,
}

/// Tier bounds `10, 100, …` below `H`, then `H` itself.
pub fn tiers(h: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = 10.0;
    while t < h {
        out.push(t);
        t *= 10.0;
    }
    out.push(h);
    out
}

/// What an estimation run needs besides the cycle.
#[derive(Clone, Debug)]
pub struct TauSettings<'a> {
    pub field: BaseField,
    pub variety: &'a Variety,
    pub exceptional: &'a [HomogeneousForm],
    pub e: u32,
    pub height_bound: f64,
    pub h_min: f64,
    pub peel: bool,
}

#[derive(Clone, Debug)]
struct Best {
    ratio: f64,
    height: f64,
    proximity: f64,
    key: Vec<String>,
    point: ProjectivePoint,
}

impl Best {
    /// Larger ratio wins, then larger height, then the larger coordinate
    /// key, so the result does not depend on visiting order.
    fn beats(&self, other: &Option<Best>) -> bool {
        match other {
            None => true,
            Some(o) => (self.ratio, self.height)
                .partial_cmp(&(o.ratio, o.height))
                .map(|c| c.then_with(|| self.key.cmp(&o.key)))
                .is_some_and(|c| c.is_gt()),
        }
    }
}

struct Tally {
    bounds: Vec<f64>,
    log_bounds: Vec<f64>,
    best: Vec<Option<Best>>,
    counts: Vec<usize>,
    examined: usize,
    excluded_exceptional: usize,
    excluded_on_cycle: usize,
}

impl Tally {
    fn new(bounds: Vec<f64>) -> Self {
        let k = bounds.len();
        Tally {
            log_bounds: bounds.iter().map(|b| b.ln() + 1e-12).collect(),
            bounds,
            best: vec![None; k],
            counts: vec![0; k],
            examined: 0,
            excluded_exceptional: 0,
            excluded_on_cycle: 0,
        }
    }

    fn tier_of(&self, height: f64) -> usize {
        self.log_bounds.iter().position(|&b| height <= b).unwrap_or(self.bounds.len() - 1)
    }

    fn offer(&mut self, height: f64, proximity: f64, e: u32, key: impl FnOnce() -> (Vec<String>, ProjectivePoint)) {
        let t = self.tier_of(height);
        self.counts[t] += 1;
        let ratio = proximity / (e as f64 * height);
        // cheap rejection before building the key
        if let Some(b) = &self.best[t] {
            if ratio < b.ratio || (ratio == b.ratio && height < b.height) {
                return;
            }
        }
        let (key, point) = key();
        let cand = Best { ratio, height, proximity, key, point };
        if cand.beats(&self.best[t]) {
            self.best[t] = Some(cand);
        }
    }

    fn rows(&self) -> Vec<TauRow> {
        let mut acc: Option<Best> = None;
        let mut points = 0;
        let mut rows = Vec::new();
        for (k, &b) in self.bounds.iter().enumerate() {
            points += self.counts[k];
            if let Some(cand) = &self.best[k] {
                if cand.beats(&acc) {
                    acc = Some(cand.clone());
                }
            }
            rows.push(TauRow {
                tier: k,
                height_bound: b,
                points,
                tau_hat: acc.as_ref().map(|a| a.ratio),
                witness: acc.as_ref().map(|a| a.point.clone()),
                witness_proximity: acc.as_ref().map(|a| a.proximity),
                witness_height: acc.as_ref().map(|a| a.height),
            });
        }
        rows
    }
}

fn int_key(x: &[i64]) -> Vec<String> {
    // offset, fixed-width keys keep the string order equal to the numeric order
    x.iter().map(|&v| format!("{:020}", (v as i128 + (1i128 << 63)) as u64)).collect()
}

/// Estimates τ for `cycle` against `O(e)` over the points of `X(k)` with
/// `h(x) ≥ h_min` and multiplicative height at most the bound.
pub fn estimate_tau(cycle: &ZeroCycle, s: &TauSettings) -> Result<TauProfile> {
    if cycle.is_empty() {
        return Err(Error::NoTarget);
    }
    if cycle.generators.is_empty() {
        return Err(Error::MissingGenerators);
    }
    if !(s.height_bound >= 1.0) {
        return Err(Error::InvalidInput("height bound must be at least 1".into()));
    }
    let mut tally = Tally::new(tiers(s.height_bound));
    let fast = s.field.is_rational() && s.height_bound <= i64::MAX as f64;
    let forms: Option<Vec<IntForm>> = cycle
        .generators
        .iter()
        .chain(s.exceptional)
        .chain(&s.variety.defining_forms)
        .map(IntForm::new)
        .collect();
    match forms {
        Some(forms) if fast => sweep_rational(cycle, s, &forms, &mut tally)?,
        _ => sweep_exact(cycle, s, &mut tally)?,
    }
    let rows = tally.rows();
    let peel = if s.peel { peel_witnesses(&rows, cycle.ambient_dim + 1)? } else { None };
    Ok(TauProfile {
        label: PROFILE_LABEL.into(),
        cycle: cycle.clone(),
        e: s.e,
        h_min: s.h_min,
        height_bound: s.height_bound,
        exceptional: s.exceptional.to_vec(),
        examined: tally.examined,
        excluded_exceptional: tally.excluded_exceptional,
        excluded_on_cycle: tally.excluded_on_cycle,
        rows,
        peel,
    })
}

fn sweep_rational(cycle: &ZeroCycle, s: &TauSettings, forms: &[IntForm], tally: &mut Tally) -> Result<()> {
    let ng = cycle.generators.len();
    let ne = s.exceptional.len();
    let ln = LnTable::new(1 << 16);
    let mut gcds = GcdSweep::new(&forms[..ng]);
    let mut err = None;
    let bound = s.height_bound.floor() as i64;
    let exact_point = |x: &[i64]| ProjectivePoint::from_ints(x).expect("nonzero");
    sweep_box(cycle.ambient_dim + 1, bound, forms, &mut |p: &SweepPoint| {
        let h = ln.ln(p.max);
        if h < s.h_min {
            return;
        }
        // off X: some defining form is nonzero (overflow means nonzero too,
        // but fall back to the exact test to be safe)
        for v in &p.values[ng + ne..] {
            match v {
                Some(0) => {}
                Some(_) => return,
                None => match s.variety.contains(&exact_point(p.x)) {
                    Ok(true) => break,
                    Ok(false) => return,
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                },
            }
        }
        tally.examined += 1;
        let on_exceptional = p.values[ng..ng + ne].iter().enumerate().any(|(i, v)| match v {
            Some(v) => *v == 0,
            None => s.exceptional[i].evaluate(exact_point(p.x).coords()).is_ok_and(|v| v.is_zero()),
        });
        if on_exceptional {
            tally.excluded_exceptional += 1;
            return;
        }
        let m = match gcds.eval(p, 0, &ln) {
            Some(Some(g)) => g.archimedean,
            Some(None) => {
                tally.excluded_on_cycle += 1;
                return;
            }
            None => match cycle_proximity(cycle, &[Place::infinity(BaseField::Rationals)], &exact_point(p.x)) {
                Ok(m) => m,
                Err(Error::OnCycle) => {
                    tally.excluded_on_cycle += 1;
                    return;
                }
                Err(e) => {
                    err = Some(e);
                    return;
                }
            },
        };
        tally.offer(h, m, s.e, || (int_key(p.x), exact_point(p.x)));
    });
    err.map_or(Ok(()), Err)
}

fn sweep_exact(cycle: &ZeroCycle, s: &TauSettings, tally: &mut Tally) -> Result<()> {
    let spec = EnumerationSpec::by_height(cycle.ambient_dim, s.field, s.height_bound);
    let inf = Place::infinity(s.field);
    for x in enumerate_projective_points(&spec)? {
        let h = weil_height(&x);
        if h < s.h_min || !s.variety.contains(&x)? {
            continue;
        }
        tally.examined += 1;
        let mut on_exceptional = false;
        for f in s.exceptional {
            on_exceptional |= f.evaluate(x.coords())?.is_zero();
        }
        if on_exceptional {
            tally.excluded_exceptional += 1;
            continue;
        }
        if cycle.contains(&x)? {
            tally.excluded_on_cycle += 1;
            continue;
        }
        let m = cycle_proximity(cycle, std::slice::from_ref(&inf), &x)?;
        tally.offer(h, m, s.e, || (x.coords().iter().map(|c| c.to_string()).collect(), x.clone()));
    }
    Ok(())
}

/// Re-evaluates a witness exactly: `m_∞(Y,x)/(e·h(x))`.
pub fn witness_ratio(profile: &TauProfile, row: &TauRow) -> Result<Option<f64>> {
    let Some(x) = &row.witness else {
        return Ok(None);
    };
    let m = cycle_proximity(&profile.cycle, &[Place::infinity(x.field())], x)?;
    Ok(Some(m / (profile.e as f64 * weil_height(x))))
}

/// Smallest-degree form (degree ≤ 3) through every distinct witness when
/// the witnesses outnumber the monomials, so that the fit is a genuine
/// coincidence rather than a dimension count.
pub fn peel_witnesses(rows: &[TauRow], nvars: usize) -> Result<Option<PeelReport>> {
    let mut pts: Vec<&ProjectivePoint> = Vec::new();
    for w in rows.iter().filter_map(|r| r.witness.as_ref()) {
        if !pts.iter().any(|p| p.projectively_equal(w)) {
            pts.push(w);
        }
    }
    if pts.iter().any(|p| p.coords().iter().any(|c| !c.is_rational())) {
        return Ok(None);
    }
    for degree in 1..=3u32 {
        let basis = monomial_basis(nvars, degree);
        if pts.len() < basis.len() {
            break;
        }
        let matrix: Vec<Vec<BigRational>> = pts
            .iter()
            .map(|p| {
                let c: Vec<BigRational> = p.coords().iter().map(|c| c.a().clone()).collect();
                basis
                    .iter()
                    .map(|e| e.iter().zip(&c).fold(BigRational::from_integer(1.into()), |acc, (&k, v)| acc * num_traits::pow(v.clone(), k as usize)))
                    .collect()
            })
            .collect();
        let ech = linalg::echelon(&matrix, basis.len());
        if let Some(&free) = ech.free_columns().first() {
            let v = ech.kernel_vector(free);
            return Ok(Some(PeelReport {
                degree,
                form: form_from_vector(nvars, degree, &basis, &v),
                witnesses: pts.len(),
            }));
        }
    }
    Ok(None)
}

/// τ-profile of the problem's cycle (explicit, or the intersection of its
/// divisors) against `O(e)`.
pub fn run_tau_estimate(problem: &Problem) -> Result<TauProfile> {
    let cycle = problem.target_cycle()?;
    let f = &problem.file;
    let h = f.bounds.height.ok_or_else(|| Error::InvalidInput("bounds.height is required".into()))?;
    estimate_tau(
        &cycle,
        &TauSettings {
            field: f.field,
            variety: &problem.variety,
            exceptional: &problem.exceptional,
            e: f.e,
            height_bound: h,
            h_min: f.bounds.h_min.unwrap_or(DEFAULT_H_MIN),
            peel: f.peel,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::problem::ProblemFile;

    fn profile(cycle: &str, e: u32, h: u32) -> TauProfile {
        let f = ProblemFile::from_json(&format!(
            r#"{{"ambient_dim": 1, "cycle": {cycle}, "e": {e}, "bounds": {{"height": {h}}}}}"#
        ))
        .unwrap();
        run_tau_estimate(&f.resolve().unwrap()).unwrap()
    }

    const SQRT2: &str = r#"{"orbits": [{"minpoly": ["-2", "0", "1"], "coords": [["0", "1"], ["1"]]}]}"#;

    #[test]
    fn rational_point() {
        let p = profile(r#"{"points": ["(1:1)"]}"#, 1, 300);
        let last = p.rows.last().unwrap();
        assert_eq!(last.tau_hat, Some(1.0));
        assert_eq!(last.witness.as_ref().unwrap().to_string(), "(300:299)");
        assert_eq!(p.rows.iter().map(|r| r.height_bound).collect::<Vec<_>>(), vec![10.0, 100.0, 300.0]);
        assert_eq!(p.excluded_on_cycle, 0);
    }

    #[test]
    fn sqrt_two_and_scaling() {
        let p = profile(SQRT2, 1, 500);
        assert_eq!(p.rows.last().unwrap().tau_hat, Some(2.0));
        assert_eq!(p.rows.last().unwrap().witness.as_ref().unwrap().to_string(), "(239:169)");
        let q = profile(SQRT2, 3, 500);
        assert!((q.rows.last().unwrap().tau_hat.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        for r in &p.rows {
            assert_eq!(witness_ratio(&p, r).unwrap(), r.tau_hat);
        }
        let taus: Vec<f64> = p.rows.iter().map(|r| r.tau_hat.unwrap()).collect();
        assert!(taus.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn exceptional_forms_are_skipped() {
        let f = ProblemFile::from_json(
            r#"{"ambient_dim": 1, "cycle": {"points": ["(1:1)"]}, "exceptional": ["x0 - 10*x1"],
                "bounds": {"height": 50}}"#,
        )
        .unwrap();
        let p = run_tau_estimate(&f.resolve().unwrap()).unwrap();
        assert!(p.excluded_exceptional > 0);
        assert_eq!(p.rows.last().unwrap().witness.as_ref().unwrap().to_string(), "(50:49)");
    }

    #[test]
    fn peeling_reports_common_curve() {
        // tier witnesses (10:9), (100:99) on P^1: two distinct points, fewer
        // than the 3 monomials of degree 2, so degree 1 is tried and fails
        let p = profile(r#"{"points": ["(1:1)"]}"#, 1, 100);
        assert_eq!(peel_witnesses(&p.rows, 2).unwrap(), None);
    }
}
