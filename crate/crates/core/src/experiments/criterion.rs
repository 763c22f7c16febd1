//! Main Criterion runs: integral candidates, heights and proximities per
//! point, the bounded-min-height constant with a two-bound stability
//! check, and the pigeonhole step over the geometric points of `Y`.

use std::collections::HashSet;

use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::problem::{Problem, TauSource};
use super::tau::{estimate_tau, TauSettings, DEFAULT_H_MIN};
use crate::arith::{format_rational, parse_rational};
use crate::error::{Error, Result};
use crate::geometry::{chordal_distance, snc_check, Divisor, ProjectivePoint, SncReport, Variety, ZeroCycle};
use crate::heights::fast::{IntForm, LnTable};
use crate::heights::{cycle_proximity, divisor_height, integrality_defect, proximity};
use crate::numfield::{rational_to_f64, Place};
use crate::points::{coords_strings, enumerate_affine_integral, filter_d_integral, EnumerationSpec, IntegralityReport};

/// Slack allowed in the pigeonhole inequality.
pub const PIGEONHOLE_TOLERANCE: f64 = 1e-6;
/// Largest growth of the min-height constant still called stable.
pub const STABILITY_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionRow {
    pub point: ProjectivePoint,
    /// `h(D_j, x)`.
    pub h: Vec<f64>,
    /// `m_∞(D_j, x)`.
    pub m: Vec<f64>,
    pub min_h: f64,
    /// Label `orbit.conjugate` of the closest geometric point of `Y`.
    pub nearest_orbit: Option<String>,
    pub nearest_proximity: Option<f64>,
    pub second_proximity: Option<f64>,
    /// `m_∞(Y, x)` from the generators of `Y`.
    pub cycle_proximity: Option<f64>,
    pub on_exceptional: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauEntry {
    pub orbit: usize,
    pub divisor: usize,
    /// `asserted`, `estimated` or `missing`.
    pub source: String,
    pub value: Option<f64>,
    pub exact: Option<String>,
    pub justification: Option<String>,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub a: String,
    pub b: String,
    /// `log(2/δ(P_a, P_b))` with `δ` the chordal distance.
    pub separation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pigeonhole {
    pub separations: Vec<Separation>,
    pub separation_constant: Option<f64>,
    /// Points off `D` on which the inequality was checked.
    pub checked: usize,
    pub violations: usize,
    /// `max (min(m_a, m_b) − sep_ab)` over checked points and pairs.
    pub max_excess: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub hypothesis_satisfied: bool,
    pub notes: Vec<String>,
    /// Two-bound stability of the min-height constant; `None` when no
    /// larger bound was run.
    pub bounded_min_height: Option<bool>,
    pub constant: Option<f64>,
    pub stability_box: Option<u64>,
    pub stability_constant: Option<f64>,
    pub growth: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub ambient_dim: usize,
    pub divisor_count: usize,
    pub cycle: ZeroCycle,
    pub snc: SncReport,
    pub snc_waived: bool,
    pub tau: Vec<TauEntry>,
    pub box_bound: u64,
    pub integrality: IntegralityReport,
    pub rows: Vec<CriterionRow>,
    /// `max min_j h(D_j, x)` over rows off the declared exceptional set.
    pub eq2_constant: Option<f64>,
    /// `max` second-largest geometric-point proximity over rows.
    pub pigeonhole_constant: Option<f64>,
    /// `max |m_∞(Y,x) − min_j m_∞(D_j,x)|` over rows.
    pub decomposition_constant: Option<f64>,
    pub pigeonhole: Pigeonhole,
    pub verdict: Verdict,
}

/// Geometric points of `Y` with their pairwise separations.
pub struct GeometricPoints {
    labels: Vec<String>,
    points: Vec<Vec<Complex64>>,
    seps: Vec<(usize, usize, f64)>,
}

impl GeometricPoints {
    pub fn new(cycle: &ZeroCycle) -> Self {
        let (labels, points): (Vec<String>, Vec<Vec<Complex64>>) = cycle
            .geometric_points()
            .into_iter()
            .map(|((i, j), p)| (format!("{i}.{j}"), p.to_vec()))
            .unzip();
        let mut seps = Vec::new();
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                seps.push((a, b, (2.0 / chordal_distance(&points[a], &points[b])).ln()));
            }
        }
        GeometricPoints { labels, points, seps }
    }

    pub fn proximities(&self, x: &[Complex64]) -> Vec<f64> {
        self.points.iter().map(|p| -chordal_distance(x, p).ln()).collect()
    }

    fn empty_stats(&self) -> Pigeonhole {
        Pigeonhole {
            separations: self
                .seps
                .iter()
                .map(|&(a, b, s)| Separation { a: self.labels[a].clone(), b: self.labels[b].clone(), separation: s })
                .collect(),
            separation_constant: self.seps.iter().map(|s| s.2).reduce(f64::max),
            checked: 0,
            violations: 0,
            max_excess: None,
        }
    }

    fn check(&self, prox: &[f64], stats: &mut Pigeonhole) {
        stats.checked += 1;
        let mut worst = f64::NEG_INFINITY;
        for &(a, b, s) in &self.seps {
            worst = worst.max(prox[a].min(prox[b]) - s);
        }
        if self.seps.is_empty() {
            return;
        }
        if worst > PIGEONHOLE_TOLERANCE {
            stats.violations += 1;
        }
        stats.max_excess = Some(stats.max_excess.map_or(worst, |m| m.max(worst)));
    }

    /// Index of the nearest point, its proximity and the second largest.
    fn nearest_two(&self, prox: &[f64]) -> (Option<usize>, Option<f64>, Option<f64>) {
        let mut order: Vec<usize> = (0..prox.len()).collect();
        order.sort_by(|&a, &b| prox[b].total_cmp(&prox[a]).then(a.cmp(&b)));
        let finite = |v: f64| v.is_finite().then_some(v);
        (
            order.first().copied(),
            order.first().and_then(|&i| finite(prox[i])),
            order.get(1).and_then(|&i| finite(prox[i])),
        )
    }
}

fn int_complex(x: &[i64]) -> Vec<Complex64> {
    x.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect()
}

/// D-integral candidates in a box with the pigeonhole check on every
/// examined point off `D`.
pub struct Candidates {
    pub points: Vec<ProjectivePoint>,
    pub integrality: IntegralityReport,
    pub pigeonhole: Pigeonhole,
}

fn sum_divisor(divisors: &[Divisor], n: usize) -> Result<Divisor> {
    let comps = divisors.iter().flat_map(|d| d.components.iter().map(|c| (c.form.clone(), c.multiplicity))).collect();
    Divisor::new(n, comps)
}

/// Enumerates integral points of the configured patch (or cover), keeps
/// those with integrality defect at most the bound, and checks the
/// pigeonhole inequality along the way.
pub fn integral_candidates(problem: &Problem, geo: &GeometricPoints, bound: u64) -> Result<Candidates> {
    let f = &problem.file;
    let n = f.ambient_dim;
    let d = sum_divisor(&problem.divisors, n)?;
    let mut stats = geo.empty_stats();
    let comps: Option<Vec<(IntForm, u32)>> =
        d.components.iter().map(|c| IntForm::new(&c.form).map(|i| (i, c.multiplicity))).collect();
    let fast = f.field.is_rational()
        && f.candidates.cover.is_none()
        && problem.variety.defining_forms.is_empty()
        && i64::try_from(bound).is_ok();
    if let (true, Some(comps)) = (fast, comps) {
        return patch_sweep(&d, &comps, n, f.candidates.patch, bound as i64, f.candidates.defect_bound, geo, stats);
    }
    let pts = match &f.candidates.cover {
        None => enumerate_affine_integral(&EnumerationSpec::by_box(
            n,
            f.field,
            bound,
            Some(problem.variety.clone()),
            f.candidates.patch,
        ))?,
        Some(cover) => {
            let forms = cover.variety.iter().map(|s| s.to_form(cover.ambient_dim + 1)).collect::<Result<Vec<_>>>()?;
            let w = Variety::new(cover.ambient_dim, forms)?;
            let raw = enumerate_affine_integral(&EnumerationSpec::by_box(
                cover.ambient_dim,
                f.field,
                bound,
                Some(w),
                cover.patch,
            ))?;
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for w in raw {
                let coords: Vec<_> = cover.map.iter().map(|&i| w.coords()[i].clone()).collect();
                if coords.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let x = ProjectivePoint::new(coords)?;
                if problem.variety.contains(&x)? && seen.insert(coords_strings(&x)) {
                    out.push(x);
                }
            }
            out
        }
    };
    for x in &pts {
        if !d.contains(x)? {
            geo.check(&geo.proximities(&x.to_complex()), &mut stats);
        }
    }
    let (points, integrality) = filter_d_integral(pts, &d, f.candidates.defect_bound)?;
    Ok(Candidates { points, integrality, pigeonhole: stats })
}

#[allow(clippy::too_many_arguments)]
fn patch_sweep(
    d: &Divisor,
    comps: &[(IntForm, u32)],
    n: usize,
    patch: usize,
    b: i64,
    defect_bound: f64,
    geo: &GeometricPoints,
    mut stats: Pigeonhole,
) -> Result<Candidates> {
    let ln = LnTable::new(1 << 16);
    let mut report =
        IntegralityReport { examined: 0, retained: 0, on_divisor: 0, max_defect: None, max_defect_seen: None };
    let mut points = Vec::new();
    let mut y = vec![-b; n];
    let mut x = vec![0i64; n + 1];
    loop {
        x[..patch].copy_from_slice(&y[..patch]);
        x[patch] = 1;
        x[patch + 1..].copy_from_slice(&y[patch..]);
        report.examined += 1;
        // defect = Σ m·log|F(x)| for a primitive integer point
        let mut defect = Some(0.0);
        let mut on_d = false;
        for (c, m) in comps {
            match c.eval(&x) {
                Some(0) => on_d = true,
                Some(v) => defect = defect.map(|s| s + *m as f64 * ln.ln(v.unsigned_abs())),
                None => defect = None,
            }
        }
        let exact = || ProjectivePoint::from_ints(&x).expect("patch coordinate is 1");
        if on_d {
            report.on_divisor += 1;
        } else {
            let defect = match defect {
                Some(v) => v,
                None => integrality_defect(d, &exact())?,
            };
            geo.check(&geo.proximities(&int_complex(&x)), &mut stats);
            report.max_defect_seen = Some(report.max_defect_seen.map_or(defect, |m: f64| m.max(defect)));
            if defect <= defect_bound {
                report.max_defect = Some(report.max_defect.map_or(defect, |m: f64| m.max(defect)));
                points.push(exact());
            }
        }
        // odometer over [−b, b]^n, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                report.retained = points.len();
                return Ok(Candidates { points, integrality: report, pigeonhole: stats });
            }
            i -= 1;
            if y[i] < b {
                y[i] += 1;
                break;
            }
            y[i] = -b;
        }
    }
}

fn row(problem: &Problem, cycle: &ZeroCycle, geo: &GeometricPoints, x: &ProjectivePoint) -> Result<CriterionRow> {
    let inf = [Place::infinity(x.field())];
    let h: Vec<f64> = problem.divisors.iter().map(|d| divisor_height(d, x)).collect();
    let m = problem.divisors.iter().map(|d| proximity(d, &inf, x)).collect::<Result<Vec<_>>>()?;
    let prox = geo.proximities(&x.to_complex());
    let (nearest, nearest_proximity, second_proximity) = geo.nearest_two(&prox);
    let cycle_prox = match cycle_proximity(cycle, &inf, x) {
        Ok(v) => Some(v),
        Err(Error::OnCycle | Error::MissingGenerators) => None,
        Err(e) => return Err(e),
    };
    let mut on_exceptional = false;
    for f in &problem.exceptional {
        on_exceptional |= f.evaluate(x.coords())?.is_zero();
    }
    Ok(CriterionRow {
        point: x.clone(),
        min_h: h.iter().copied().fold(f64::INFINITY, f64::min),
        h,
        m,
        nearest_orbit: nearest.map(|i| geo.labels[i].clone()),
        nearest_proximity,
        second_proximity,
        cycle_proximity: cycle_prox,
        on_exceptional,
    })
}

fn max_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.reduce(f64::max)
}

fn eq2_constant(rows: &[CriterionRow]) -> Option<f64> {
    max_of(rows.iter().filter(|r| !r.on_exceptional).map(|r| r.min_h))
}

fn tau_entries(problem: &Problem, cycle: &ZeroCycle) -> Result<Vec<TauEntry>> {
    let f = &problem.file;
    let mut out = Vec::new();
    for (i, orbit) in cycle.orbits.iter().enumerate() {
        for (j, d) in problem.divisors.iter().enumerate() {
            let entry = match problem.tau_assumption(i, j).map(|a| &a.source) {
                None => TauEntry {
                    orbit: i,
                    divisor: j,
                    source: "missing".into(),
                    value: None,
                    exact: None,
                    justification: None,
                    satisfied: false,
                },
                Some(TauSource::Asserted { value, justification }) => {
                    let q = parse_rational(value)?;
                    TauEntry {
                        orbit: i,
                        divisor: j,
                        source: "asserted".into(),
                        value: Some(rational_to_f64(&q)),
                        exact: Some(format_rational(&q)),
                        justification: justification.clone(),
                        satisfied: q < num_rational::BigRational::one(),
                    }
                }
                Some(TauSource::Estimate) => {
                    let h = f.bounds.height.ok_or_else(|| {
                        Error::InvalidInput("bounds.height is required to estimate tau".into())
                    })?;
                    let sub = ZeroCycle::from_orbits(cycle.ambient_dim, vec![orbit.exact.clone()])?;
                    let profile = estimate_tau(
                        &sub,
                        &TauSettings {
                            field: f.field,
                            variety: &problem.variety,
                            exceptional: &problem.exceptional,
                            e: d.degree(),
                            height_bound: h,
                            h_min: f.bounds.h_min.unwrap_or(DEFAULT_H_MIN),
                            peel: false,
                        },
                    )?;
                    let value = profile.rows.last().and_then(|r| r.tau_hat);
                    TauEntry {
                        orbit: i,
                        divisor: j,
                        source: "estimated".into(),
                        value,
                        exact: None,
                        justification: None,
                        satisfied: value.is_some_and(|v| v < 1.0),
                    }
                }
            };
            out.push(entry);
        }
    }
    Ok(out)
}

/// Checks the hypotheses, tabulates the integral candidates in the box and
/// compares the min-height constant with a run at a larger box.
pub fn run_main_criterion(problem: &Problem) -> Result<CriterionReport> {
    let f = &problem.file;
    let n = problem.variety.dim;
    if problem.divisors.len() != n || n == 0 {
        return Err(Error::HypothesisViolation(format!(
            "{} divisors on a variety of dimension {n}",
            problem.divisors.len()
        )));
    }
    let cycle = problem.target_cycle()?;
    let snc = snc_check(&problem.divisors, &cycle)?;
    if !snc.snc && !f.waive_snc {
        let reasons: Vec<String> = snc
            .failures
            .iter()
            .map(|e| format!("orbit {}: {}", e.orbit, e.reason))
            .collect();
        return Err(Error::NotSnc(reasons.join("; ")));
    }
    let tau = tau_entries(problem, &cycle)?;
    let mut notes = Vec::new();
    for t in tau.iter().filter(|t| !t.satisfied) {
        notes.push(match t.value {
            Some(v) => format!("tau(orbit {}, D{}) = {v} ({}) is not below 1", t.orbit, t.divisor + 1, t.source),
            None => format!("no usable tau value for orbit {} and D{}", t.orbit, t.divisor + 1),
        });
    }
    for (j, d) in problem.divisors.iter().enumerate() {
        if !d.reduced {
            notes.push(format!("D{} is not reduced", j + 1));
        }
    }
    if !snc.snc {
        notes.push("SNC check failed and was waived".into());
    }
    if tau.iter().any(|t| t.source == "estimated") {
        notes.push("estimated tau values are empirical lower bounds".into());
    }
    let hypothesis_satisfied = tau.iter().all(|t| t.satisfied) && snc.snc && problem.divisors.iter().all(|d| d.reduced);

    let box_bound = f.bounds.box_bound.ok_or_else(|| Error::InvalidInput("bounds.box is required".into()))?;
    let geo = GeometricPoints::new(&cycle);
    let cands = integral_candidates(problem, &geo, box_bound)?;
    let rows = cands.points.iter().map(|x| row(problem, &cycle, &geo, x)).collect::<Result<Vec<_>>>()?;
    let constant = eq2_constant(&rows);

    let stability_box = f.bounds.stability_box.unwrap_or(box_bound.saturating_mul(10));
    let (stability_constant, growth, bounded) = if stability_box > box_bound {
        let big = integral_candidates(problem, &geo, stability_box)?;
        let big_rows = big.points.iter().map(|x| row(problem, &cycle, &geo, x)).collect::<Result<Vec<_>>>()?;
        let c2 = eq2_constant(&big_rows);
        // heights are nonnegative, so an empty set contributes 0
        let growth = c2.unwrap_or(0.0) - constant.unwrap_or(0.0);
        (c2, Some(growth), Some(growth <= STABILITY_TOLERANCE))
    } else {
        (None, None, None)
    };

    let pigeonhole_constant = max_of(rows.iter().filter_map(|r| r.second_proximity));
    let decomposition_constant = max_of(rows.iter().filter_map(|r| {
        let min_m = r.m.iter().copied().fold(f64::INFINITY, f64::min);
        r.cycle_proximity.map(|c| (c - min_m).abs())
    }));
    Ok(CriterionReport {
        ambient_dim: f.ambient_dim,
        divisor_count: problem.divisors.len(),
        cycle,
        snc_waived: !snc.snc && f.waive_snc,
        snc,
        tau,
        box_bound,
        integrality: cands.integrality,
        eq2_constant: constant,
        pigeonhole_constant,
        decomposition_constant,
        pigeonhole: cands.pigeonhole,
        verdict: Verdict {
            hypothesis_satisfied,
            notes,
            bounded_min_height: bounded,
            constant,
            stability_box: (stability_box > box_bound).then_some(stability_box),
            stability_constant,
            growth,
        },
        rows,
    })
}
