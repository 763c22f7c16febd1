//! Enumeration of projective points by height and of integral points on
//! affine patches, in a fixed deterministic order.

use std::collections::BTreeMap;
use std::io::Write;

use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, gcd_u64};
use crate::error::{Error, Result};
use crate::geometry::roots::integer_roots_in_box;
use crate::geometry::{Divisor, HomogeneousForm, ProjectivePoint, Variety};
use crate::heights::{integrality_defect, weil_height};
use crate::numfield::{canonical_associate, BaseField, FieldElement};

/// What to enumerate: points of `ℙⁿ(k)` of multiplicative height at most
/// `H`, or integral points of an affine patch in a box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationSpec {
    pub ambient_dim: usize,
    pub field: BaseField,
    #[serde(default)]
    pub height_bound: Option<f64>,
    #[serde(default)]
    pub box_bound: Option<u64>,
    #[serde(default)]
    pub variety: Option<Variety>,
    #[serde(default)]
    pub affine_patch: usize,
}

impl EnumerationSpec {
    pub fn by_height(ambient_dim: usize, field: BaseField, h: f64) -> Self {
        EnumerationSpec { ambient_dim, field, height_bound: Some(h), box_bound: None, variety: None, affine_patch: 0 }
    }

    pub fn by_box(ambient_dim: usize, field: BaseField, b: u64, variety: Option<Variety>, patch: usize) -> Self {
        EnumerationSpec { ambient_dim, field, height_bound: None, box_bound: Some(b), variety, affine_patch: patch }
    }

    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        if self.height_bound.is_some() == self.box_bound.is_some() {
            return Err(Error::InvalidInput("set exactly one of height_bound and box_bound".into()));
        }
        if self.affine_patch > self.ambient_dim {
            return Err(Error::InvalidInput(format!("affine patch {} out of range", self.affine_patch)));
        }
        if let Some(v) = &self.variety {
            if v.ambient_dim != self.ambient_dim {
                return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: v.ambient_dim });
            }
        }
        Ok(())
    }
}

/// Ring integers `a + bω` of norm at most `bound`, sorted by norm and then
/// coordinates.
fn integers_up_to_norm(field: BaseField, bound: u64) -> Vec<(u64, i64, i64)> {
    let (t, c) = field.omega_relation_int();
    // N(a + bω) = a² + t·a·b − c·b², positive definite
    let norm = |a: i64, b: i64| (a as i128 * a as i128 + (t * a) as i128 * b as i128 - c as i128 * b as i128 * b as i128) as u64;
    let mut out = Vec::new();
    // N ≥ (|d|/4)·b², so |b| ≤ 2·sqrt(bound/|d|) + 1
    let disc = field.discriminant().unsigned_abs().max(1);
    let bmax = (2.0 * (bound as f64 / disc as f64).sqrt()).ceil() as i64 + 1;
    let amax = (bound as f64).sqrt().ceil() as i64 + bmax + 1;
    for b in -bmax..=bmax {
        for a in -amax..=amax {
            let n = norm(a, b);
            if n <= bound {
                out.push((n, a, b));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Lazy stream of the points of `ℙⁿ(k)` with height at most `H`, level by
/// level (one height value at a time), each level in lexicographic order.
pub struct ProjectivePoints {
    field: BaseField,
    nvars: usize,
    /// Largest admissible level: `max |x_i|` over ℚ, `max N(x_i)` otherwise.
    max_level: u64,
    level: u64,
    pending: std::vec::IntoIter<ProjectivePoint>,
    elements: Vec<(u64, i64, i64)>,
}

impl ProjectivePoints {
    fn level_points(&self, level: u64) -> Vec<ProjectivePoint> {
        if self.field.is_rational() {
            let mut pts: Vec<Vec<i64>> = rational_level(self.nvars, level as i64);
            pts.sort_unstable();
            pts.into_iter()
                .map(|c| {
                    ProjectivePoint::from_representative(
                        c.iter().map(|&x| FieldElement::from_int(BaseField::Rationals, x)).collect(),
                    )
                    .expect("nonzero")
                })
                .collect()
        } else {
            self.quadratic_level(level)
        }
    }

    fn quadratic_level(&self, level: u64) -> Vec<ProjectivePoint> {
        let below: Vec<&(u64, i64, i64)> = self.elements.iter().filter(|e| e.0 < level).collect();
        let at: Vec<&(u64, i64, i64)> = self.elements.iter().filter(|e| e.0 == level).collect();
        let upto: Vec<&(u64, i64, i64)> = self.elements.iter().filter(|e| e.0 <= level).collect();
        if at.is_empty() {
            return Vec::new();
        }
        let f = self.field;
        let relation = f.omega_relation_int();
        let canonical: std::collections::HashSet<(i64, i64)> = upto
            .iter()
            .filter(|e| {
                let x = FieldElement::from_ints(f, e.1, e.2);
                canonical_associate(&x) == x
            })
            .map(|e| (e.1, e.2))
            .collect();
        let mut out: Vec<(Vec<(i64, i64)>, ProjectivePoint)> = Vec::new();
        // index of the first coordinate attaining the level
        for i in 0..self.nvars {
            let mut choices: Vec<Vec<&(u64, i64, i64)>> = Vec::new();
            for j in 0..self.nvars {
                choices.push(match j.cmp(&i) {
                    std::cmp::Ordering::Less => below.clone(),
                    std::cmp::Ordering::Equal => at.clone(),
                    std::cmp::Ordering::Greater => upto.clone(),
                });
            }
            for_each_product(&choices, &mut |tuple: &[&(u64, i64, i64)]| {
                let key: Vec<(i64, i64)> = tuple.iter().map(|e| (e.1, e.2)).collect();
                let Some(lead) = key.iter().find(|c| **c != (0, 0)) else {
                    return;
                };
                if !canonical.contains(lead) || !generates_unit_ideal(relation, &key) {
                    return;
                }
                let coords = key.iter().map(|&(a, b)| FieldElement::from_ints(f, a, b)).collect();
                out.push((key, ProjectivePoint::from_representative(coords).expect("nonzero")));
            });
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out.into_iter().map(|(_, p)| p).collect()
    }
}

/// Whether `a + bω` for `(a, b)` in `elems` generate the whole ring, where
/// `ω² = tω + c`. Tracks the Hermite form of the ideal lattice in the basis
/// `{1, ω}`; the ideal is the ring exactly when the lattice index is 1.
fn generates_unit_ideal((t, c): (i64, i64), elems: &[(i64, i64)]) -> bool {
    let (t, c) = (t as i128, c as i128);
    // rows (h11, h12) and (0, h22)
    let (mut h11, mut h12, mut h22) = (0i128, 0i128, 0i128);
    for &(a, b) in elems {
        let (a, b) = (a as i128, b as i128);
        // x and x·ω = b·c + (a + b·t)·ω
        for (v1, v2) in [(a, b), (b * c, a + b * t)] {
            let e = h11.extended_gcd(&v1);
            if e.gcd == 0 {
                h22 = h22.gcd(&v2);
                continue;
            }
            let w2 = (v1 / e.gcd) * h12 - (h11 / e.gcd) * v2;
            h12 = e.x * h12 + e.y * v2;
            h11 = e.gcd;
            h22 = h22.gcd(&w2);
            if h22 != 0 {
                h12 = h12.rem_euclid(h22);
            }
        }
        if h11.abs() == 1 && h22 == 1 {
            return true;
        }
    }
    false
}

fn for_each_product<T: Copy>(choices: &[Vec<T>], f: &mut impl FnMut(&[T])) {
    fn rec<T: Copy>(choices: &[Vec<T>], cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if cur.len() == choices.len() {
            f(cur);
            return;
        }
        for &c in &choices[cur.len()] {
            cur.push(c);
            rec(choices, cur, f);
            cur.pop();
        }
    }
    rec(choices, &mut Vec::with_capacity(choices.len()), f);
}

/// Primitive integer tuples with `max |x_i| = k` and first nonzero entry
/// positive.
fn rational_level(nvars: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for i in 0..nvars {
        let ranges: Vec<Vec<i64>> = (0..nvars)
            .map(|j| match j.cmp(&i) {
                std::cmp::Ordering::Less => (-(k - 1)..=(k - 1)).collect(),
                std::cmp::Ordering::Equal => vec![-k, k],
                std::cmp::Ordering::Greater => (-k..=k).collect(),
            })
            .collect();
        for_each_product(&ranges, &mut |t: &[i64]| {
            let lead = t.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            if lead <= 0 {
                return;
            }
            let g = t.iter().fold(0u64, |acc, &x| gcd_u64(acc, x.unsigned_abs()));
            if g == 1 {
                out.push(t.to_vec());
            }
        });
    }
    out
}

impl Iterator for ProjectivePoints {
    type Item = ProjectivePoint;

    fn next(&mut self) -> Option<ProjectivePoint> {
        loop {
            if let Some(p) = self.pending.next() {
                return Some(p);
            }
            if self.level >= self.max_level {
                return None;
            }
            self.level += 1;
            self.pending = self.level_points(self.level).into_iter();
        }
    }
}

/// Every point of `ℙⁿ(k)` with multiplicative height `≤ H` exactly once,
/// in normal form, ordered by height and then lexicographically.
pub fn enumerate_projective_points(spec: &EnumerationSpec) -> Result<ProjectivePoints> {
    spec.validate()?;
    let h = spec.height_bound.ok_or_else(|| Error::InvalidInput("height_bound is required".into()))?;
    let max_level = if h < 1.0 || !h.is_finite() {
        0
    } else if spec.field.is_rational() {
        h.floor() as u64
    } else {
        (h * h).floor() as u64
    };
    let elements = if spec.field.is_rational() { Vec::new() } else { integers_up_to_norm(spec.field, max_level) };
    Ok(ProjectivePoints {
        field: spec.field,
        nvars: spec.ambient_dim + 1,
        max_level,
        level: 0,
        pending: Vec::new().into_iter(),
        elements,
    })
}

/// Calls `f` once for each point of `ℙⁿ(ℚ)` with `max |x_i| ≤ bound`, given
/// by its primitive coordinates with positive first nonzero entry.
pub fn visit_box(nvars: usize, bound: i64, f: &mut impl FnMut(&[i64])) {
    fn rec(x: &mut Vec<i64>, i: usize, g: u64, started: bool, bound: i64, f: &mut impl FnMut(&[i64])) {
        if i == x.len() {
            if started && g == 1 {
                f(x);
            }
            return;
        }
        let lo = if started { -bound } else { 0 };
        for v in lo..=bound {
            x[i] = v;
            rec(x, i + 1, gcd_u64(g, v.unsigned_abs()), started || v != 0, bound, f);
        }
    }
    rec(&mut vec![0; nvars], 0, 0, false, bound, f);
}

/// A polynomial in the affine coordinates of a patch, with integer
/// coefficients.
#[derive(Clone, Debug)]
struct AffineIntPoly {
    terms: Vec<(Vec<u32>, i128)>,
}

impl AffineIntPoly {
    fn from_form(f: &HomogeneousForm, patch: usize) -> Option<Self> {
        let prim = f.primitive();
        let mut map: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for (e, c) in prim.terms() {
            let mut e = e.clone();
            e.remove(patch);
            *map.entry(e).or_insert(0) += c.numer().to_i128()?;
        }
        Some(AffineIntPoly { terms: map.into_iter().filter(|(_, c)| *c != 0).collect() })
    }

    /// Coefficients (ascending) in variable `free` after fixing the others.
    fn specialize(&self, y: &[i64], free: usize) -> Option<Vec<i128>> {
        let mut coeffs: Vec<i128> = Vec::new();
        for (e, c) in &self.terms {
            let mut term = *c;
            for (j, &k) in e.iter().enumerate() {
                if j != free && k > 0 {
                    term = term.checked_mul((y[j] as i128).checked_pow(k)?)?;
                }
            }
            let k = e[free] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = coeffs[k].checked_add(term)?;
        }
        Some(coeffs)
    }
}

fn embed(values: &[i64], patch: usize, field: BaseField) -> ProjectivePoint {
    let mut coords: Vec<FieldElement> = values.iter().map(|&v| FieldElement::from_int(field, v)).collect();
    coords.insert(patch, FieldElement::one(field));
    ProjectivePoint::new(coords).expect("patch coordinate is 1")
}

/// Integral points of `X ∩ {x_patch ≠ 0}` with every affine coordinate in
/// the box, re-embedded in `ℙⁿ`, in lexicographic order of affine
/// coordinates. Over quadratic fields the box bounds the norm.
pub fn enumerate_affine_integral(spec: &EnumerationSpec) -> Result<Vec<ProjectivePoint>> {
    spec.validate()?;
    let bound = spec.box_bound.ok_or_else(|| Error::InvalidInput("box_bound is required".into()))?;
    let variety = spec.variety.clone().unwrap_or_else(|| Variety::projective_space(spec.ambient_dim));
    let n = spec.ambient_dim;
    let patch = spec.affine_patch;
    if !spec.field.is_rational() {
        return affine_quadratic(spec.field, &variety, bound, patch);
    }
    let b = i64::try_from(bound).map_err(|_| Error::InvalidInput("box bound too large".into()))?;
    if n == 0 {
        return Ok(vec![embed(&[], patch, spec.field)]);
    }
    let polys: Vec<Option<AffineIntPoly>> =
        variety.defining_forms.iter().map(|f| AffineIntPoly::from_form(f, patch)).collect();
    if polys.iter().any(|p| p.is_none()) {
        return Err(Error::Unsupported("defining form coefficients exceed 128 bits".into()));
    }
    let polys: Vec<AffineIntPoly> = polys.into_iter().map(Option::unwrap).collect();
    let free = n - 1;
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut y = vec![0i64; n];
    let mut overflow = false;
    let ranges: Vec<Vec<i64>> = (0..free).map(|_| (-b..=b).collect()).collect();
    for_each_product(&ranges, &mut |head: &[i64]| {
        y[..free].copy_from_slice(head);
        let mut candidates: Option<Vec<i64>> = None;
        for p in &polys {
            let Some(coeffs) = p.specialize(&y, free) else {
                overflow = true;
                return;
            };
            if coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            let roots = integer_roots_in_box(&coeffs, b);
            candidates = Some(match candidates {
                None => roots,
                Some(prev) => prev.into_iter().filter(|r| roots.contains(r)).collect(),
            });
        }
        let values = candidates.unwrap_or_else(|| (-b..=b).collect());
        for v in values {
            let mut full = y.clone();
            full[free] = v;
            out.push(full);
        }
    });
    if overflow {
        return Err(Error::Unsupported("integer overflow while scanning the box".into()));
    }
    out.sort_unstable();
    Ok(out.iter().map(|v| embed(v, patch, spec.field)).collect())
}

fn affine_quadratic(field: BaseField, variety: &Variety, bound: u64, patch: usize) -> Result<Vec<ProjectivePoint>> {
    let n = variety.ambient_dim;
    let elems: Vec<FieldElement> = integers_up_to_norm(field, bound)
        .into_iter()
        .map(|(_, a, b)| FieldElement::from_ints(field, a, b))
        .collect();
    let mut keyed: Vec<(Vec<(BigRational, BigRational)>, ProjectivePoint)> = Vec::new();
    let choices: Vec<Vec<&FieldElement>> = (0..n).map(|_| elems.iter().collect()).collect();
    let mut err = None;
    for_each_product(&choices, &mut |t: &[&FieldElement]| {
        let mut coords: Vec<FieldElement> = t.iter().map(|&e| e.clone()).collect();
        coords.insert(patch, FieldElement::one(field));
        let x = ProjectivePoint::from_representative(coords.clone()).expect("patch coordinate is 1");
        match variety.contains(&x) {
            Ok(true) => {
                let key = t.iter().map(|e| (e.a().clone(), e.b().clone())).collect();
                keyed.push((key, x.normalized()));
            }
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

/// Outcome of an integrality filter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub examined: usize,
    pub retained: usize,
    pub on_divisor: usize,
    /// Largest defect among retained points.
    pub max_defect: Option<f64>,
    /// Largest defect among all points off `D`.
    pub max_defect_seen: Option<f64>,
}

/// Points off `D` whose integrality defect `h(D,x) − m_∞(D,x)` is at most
/// `defect_bound`.
pub fn filter_d_integral(
    points: impl IntoIterator<Item = ProjectivePoint>,
    d: &Divisor,
    defect_bound: f64,
) -> Result<(Vec<ProjectivePoint>, IntegralityReport)> {
    let mut kept = Vec::new();
    let mut report =
        IntegralityReport { examined: 0, retained: 0, on_divisor: 0, max_defect: None, max_defect_seen: None };
    for x in points {
        report.examined += 1;
        if d.contains(&x)? {
            report.on_divisor += 1;
            continue;
        }
        let defect = integrality_defect(d, &x)?;
        report.max_defect_seen = Some(report.max_defect_seen.map_or(defect, |m: f64| m.max(defect)));
        if defect <= defect_bound {
            report.max_defect = Some(report.max_defect.map_or(defect, |m: f64| m.max(defect)));
            kept.push(x);
        }
    }
    report.retained = kept.len();
    Ok((kept, report))
}

/// One row per point: `coord_0..coord_n, height` (coordinates as exact
/// strings, height as the natural-log Weil height).
pub fn write_points_csv<W: Write>(points: impl IntoIterator<Item = ProjectivePoint>, nvars: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..nvars).map(|i| format!("coord_{i}")).collect();
    header.push("height".into());
    w.write_record(&header)?;
    for p in points {
        let mut row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        row.push(format!("{:.17e}", weil_height(&p)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Rational coordinates of a normalized point as strings.
pub fn coords_strings(p: &ProjectivePoint) -> Vec<String> {
    p.coords()
        .iter()
        .map(|c| if c.b().is_zero() { format_rational(c.a()) } else { c.to_string() })
        .collect()
}
