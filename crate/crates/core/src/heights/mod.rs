//! Weil heights, local heights, proximity functions and generalized GCD
//! heights, decomposed over the places of the base field.
//!
//! Local heights use the representative
//! `λ_{F,v}(x) = (d_v/[k:ℚ])·(deg F·log max_i |x_i|_v − log |F(x)|_v)`,
//! so that summing over all places recovers `deg F · h(x)` exactly.

pub mod fast;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::ln_abs_rational;
use crate::error::{Error, Result};
use crate::geometry::{chordal_distance, Divisor, HomogeneousForm, ProjectivePoint, ZeroCycle};
use crate::numfield::{ideal_norm, normalized_log_abs, places_dividing, FieldElement, Place};

/// `max_i (d_v/[k:ℚ])·log |x_i|_v` over the nonzero coordinates.
fn log_max(v: &Place, coords: &[FieldElement]) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for c in coords.iter().filter(|c| !c.is_zero()) {
        best = best.max(normalized_log_abs(v, c)?);
    }
    Ok(best)
}

/// Absolute logarithmic Weil height.
pub fn weil_height(x: &ProjectivePoint) -> f64 {
    // In normal form every finite place contributes zero.
    let n = x.normalized();
    log_max(&Place::infinity(x.field()), n.coords()).expect("nonzero coordinates")
}

/// Local height of a single form, `+∞` when the form vanishes at `x`.
pub fn form_local_height(f: &HomogeneousForm, v: &Place, x: &ProjectivePoint) -> Result<f64> {
    let value = f.evaluate(x.coords())?;
    if value.is_zero() {
        return Ok(f64::INFINITY);
    }
    Ok(f.degree() as f64 * log_max(v, x.coords())? - normalized_log_abs(v, &value)?)
}

/// `λ_{D,v}(x)`.
pub fn local_height(d: &Divisor, v: &Place, x: &ProjectivePoint) -> Result<f64> {
    let mut total = 0.0;
    for c in &d.components {
        let l = form_local_height(&c.form, v, x)?;
        if l.is_infinite() {
            return Err(Error::OnDivisor);
        }
        total += c.multiplicity as f64 * l;
    }
    Ok(total)
}

/// `h(D, x) = deg D · h(x)` on `ℙⁿ`.
pub fn divisor_height(d: &Divisor, x: &ProjectivePoint) -> f64 {
    d.degree() as f64 * weil_height(x)
}

/// `m_S(D, x) = Σ_{v ∈ S} λ_{D,v}(x)`.
pub fn proximity(d: &Divisor, s: &[Place], x: &ProjectivePoint) -> Result<f64> {
    let mut total = 0.0;
    for v in s {
        total += local_height(d, v, x)?;
    }
    Ok(total)
}

/// `min_g λ_{g,v}(x)` over the generators of `Y` not vanishing at `x`.
pub fn cycle_local_height(y: &ZeroCycle, v: &Place, x: &ProjectivePoint) -> Result<f64> {
    if y.generators.is_empty() {
        return Err(Error::MissingGenerators);
    }
    let mut best = f64::INFINITY;
    for g in &y.generators {
        best = best.min(form_local_height(g, v, x)?);
    }
    if best.is_infinite() {
        return Err(Error::OnCycle);
    }
    Ok(best)
}

/// `m_S(Y, x)`: the generator-min local heights summed over `S`.
pub fn cycle_proximity(y: &ZeroCycle, s: &[Place], x: &ProjectivePoint) -> Result<f64> {
    let mut total = 0.0;
    for v in s {
        total += cycle_local_height(y, v, x)?;
    }
    Ok(total)
}

/// Finite places at which some generator value has nonzero valuation.
fn generator_places(y: &ZeroCycle, x: &ProjectivePoint) -> Result<Vec<Place>> {
    let values = y
        .generators
        .iter()
        .map(|g| g.evaluate(x.coords()))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&FieldElement> = values.iter().collect();
    places_dividing(x.field(), &refs)
}

/// Generalized GCD height `h(Y, x)`: the generator-min local heights summed
/// over every place.
pub fn gcd_height(y: &ZeroCycle, x: &ProjectivePoint) -> Result<f64> {
    Ok(cycle_report(y, &[Place::infinity(x.field())], x)?.total)
}

/// Norm of the ideal generated by the generator values at the normal form
/// of `x`; the finite part of `h(Y, x)` is `log(norm)/[k:ℚ]`.
pub fn gcd_finite_norm(y: &ZeroCycle, x: &ProjectivePoint) -> Result<BigRational> {
    let n = x.normalized();
    let values = y
        .generators
        .iter()
        .map(|g| g.evaluate(n.coords()))
        .collect::<Result<Vec<_>>>()?;
    ideal_norm(x.field(), &values).ok_or(Error::OnCycle)
}

/// `h(D, x) − m_∞(D, x)`; bounded on `D`-integral sets.
pub fn integrality_defect(d: &Divisor, x: &ProjectivePoint) -> Result<f64> {
    Ok(divisor_height(d, x) - proximity(d, &[Place::infinity(x.field())], x)?)
}

/// Archimedean proximity `−log δ(x, P)` to a geometric point, with `δ` the
/// chordal distance.
pub fn point_proximity(p: &[Complex64], x: &ProjectivePoint) -> f64 {
    -chordal_distance(&x.to_complex(), p).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Divisor(Divisor),
    Cycle(ZeroCycle),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceValue {
    pub place: String,
    pub value: f64,
}

/// Place-by-place decomposition of a height against a divisor or cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightReport {
    pub point: ProjectivePoint,
    pub target: Target,
    pub per_place: Vec<PlaceValue>,
    pub total: f64,
    pub proximity_s: f64,
    pub finite_part: f64,
}

fn assemble(point: ProjectivePoint, target: Target, values: Vec<(Place, f64)>, s: &[Place]) -> HeightReport {
    let total = values.iter().map(|(_, v)| v).sum();
    let finite_part = values.iter().filter(|(p, _)| !p.is_archimedean()).map(|(_, v)| v).sum();
    let proximity_s = values.iter().filter(|(p, _)| s.contains(p)).map(|(_, v)| v).sum();
    HeightReport {
        point,
        target,
        per_place: values.into_iter().map(|(p, value)| PlaceValue { place: p.label(), value }).collect(),
        total,
        proximity_s,
        finite_part,
    }
}

/// Local heights of `D` at every place where they can be nonzero.
pub fn divisor_report(d: &Divisor, s: &[Place], x: &ProjectivePoint) -> Result<HeightReport> {
    let n = x.normalized();
    let values = d
        .components
        .iter()
        .map(|c| c.form.evaluate(n.coords()))
        .collect::<Result<Vec<_>>>()?;
    if values.iter().any(|v| v.is_zero()) {
        return Err(Error::OnDivisor);
    }
    let refs: Vec<&FieldElement> = values.iter().collect();
    let mut places = vec![Place::infinity(x.field())];
    places.extend(places_dividing(x.field(), &refs)?);
    for v in s {
        if !places.contains(v) {
            places.push(v.clone());
        }
    }
    let per_place = places
        .into_iter()
        .map(|v| Ok((v.clone(), local_height(d, &v, &n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(n, Target::Divisor(d.clone()), per_place, s))
}

/// Generator-min local heights of `Y` at every place where they can be
/// nonzero; `total` is `h(Y, x)`.
pub fn cycle_report(y: &ZeroCycle, s: &[Place], x: &ProjectivePoint) -> Result<HeightReport> {
    let n = x.normalized();
    let mut places = vec![Place::infinity(x.field())];
    places.extend(generator_places(y, &n)?);
    for v in s {
        if !places.contains(v) {
            places.push(v.clone());
        }
    }
    let per_place = places
        .into_iter()
        .map(|v| Ok((v.clone(), cycle_local_height(y, &v, &n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(n, Target::Cycle(y.clone()), per_place, s))
}

/// `log ‖F‖₁`, the archimedean slack in the lower bound for local heights.
pub fn log_coeff_norm(f: &HomogeneousForm) -> f64 {
    ln_abs_rational(&f.coeff_l1_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::BaseField;

    fn pt(c: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_ints(c).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn weil_height_examples() {
        assert!(close(weil_height(&pt(&[1, 1])), 0.0));
        assert!(close(weil_height(&pt(&[3, 4])), 4f64.ln()));
        let f = BaseField::gaussian();
        let x = ProjectivePoint::new(vec![FieldElement::from_ints(f, 1, 1), FieldElement::one(f)]).unwrap();
        assert!(close(weil_height(&x), 0.5 * 2f64.ln()));
    }

    #[test]
    fn local_height_examples() {
        let inf = Place::infinity(BaseField::Rationals);
        let two = Place::rational_prime(2);
        let d = Divisor::parse("x1", 1).unwrap();
        assert!(close(local_height(&d, &inf, &pt(&[3, 1])).unwrap(), 3f64.ln()));
        assert!(close(local_height(&d, &two, &pt(&[1, 8])).unwrap(), 3.0 * 2f64.ln()));
        let e = Divisor::parse("x0 - x1", 1).unwrap();
        assert!(close(local_height(&e, &inf, &pt(&[101, 100])).unwrap(), 101f64.ln()));
        assert_eq!(local_height(&e, &inf, &pt(&[1, 1])), Err(Error::OnDivisor));
    }

    #[test]
    fn divisor_height_decomposes() {
        let d = Divisor::parse("x0^3 - 2*x1^3", 1).unwrap();
        let x = pt(&[5, 4]);
        let r = divisor_report(&d, &[], &x).unwrap();
        assert!((r.total - 3.0 * 5f64.ln()).abs() < 1e-12);
        assert!(close(divisor_height(&d, &x), 3.0 * 5f64.ln()));
        assert_eq!(r.per_place.len(), 2);
    }

    #[test]
    fn proximity_examples() {
        let inf = Place::infinity(BaseField::Rationals);
        let d = Divisor::parse("x1", 1).unwrap();
        assert!(close(proximity(&d, &[inf.clone()], &pt(&[7, 1])).unwrap(), 7f64.ln()));
        let e = Divisor::parse("x0 - x1", 1).unwrap();
        assert!(close(proximity(&e, &[inf.clone()], &pt(&[1, 0])).unwrap(), 0.0));
        let s = [inf, Place::rational_prime(2)];
        assert!(close(proximity(&d, &s, &pt(&[1, 8])).unwrap(), 3.0 * 2f64.ln()));
    }

    #[test]
    fn cycle_examples() {
        let y = ZeroCycle::from_points(2, &[pt(&[0, 0, 1])]).unwrap();
        let inf = [Place::infinity(BaseField::Rationals)];
        assert!(close(cycle_proximity(&y, &inf, &pt(&[6, 10, 1])).unwrap(), 0.0));
        assert!(close(cycle_proximity(&y, &inf, &pt(&[1, 1, 100])).unwrap(), 100f64.ln()));
        assert_eq!(cycle_proximity(&y, &inf, &pt(&[0, 0, 1])), Err(Error::OnCycle));
        assert!(close(gcd_height(&y, &pt(&[6, 10, 1])).unwrap(), 2f64.ln()));
        // coprime coordinates: no finite contribution, but (1:1:5) is
        // archimedean-close to (0:0:1)
        let r = cycle_report(&y, &inf, &pt(&[1, 1, 5])).unwrap();
        assert!(close(r.finite_part, 0.0));
        assert!(close(r.total, 5f64.ln()));
        assert!(close(gcd_height(&y, &pt(&[4, 6, 1])).unwrap(), 2f64.ln()));
        assert_eq!(gcd_finite_norm(&y, &pt(&[12, 18, 1])).unwrap(), crate::arith::rat(6));
    }

    #[test]
    fn integrality_examples() {
        let d = Divisor::parse("x0", 1).unwrap();
        assert!(close(integrality_defect(&d, &pt(&[1, 17])).unwrap(), 0.0));
        assert!(close(integrality_defect(&d, &pt(&[2, 1])).unwrap(), 2f64.ln()));
        let e = Divisor::parse("x1", 1).unwrap();
        assert!(close(integrality_defect(&e, &pt(&[1, 1])).unwrap(), 0.0));
    }
}
