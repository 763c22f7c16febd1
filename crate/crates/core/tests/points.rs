use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;
use runge::geometry::{Divisor, ProjectivePoint, Variety};
use runge::heights::weil_height;
use runge::numfield::{BaseField, FieldElement};
use runge::points::{
    enumerate_affine_integral, enumerate_projective_points, filter_d_integral, visit_box, write_points_csv,
    EnumerationSpec,
};

/// Points of `ℙⁿ(ℚ)` with `max |x_i| ≤ h`: primitive nonzero vectors up to sign.
fn coprime_count(nvars: u32, h: i64) -> usize {
    let side = (2 * h + 1) as usize;
    let mut count = 0;
    for idx in 0..side.pow(nvars) {
        let mut i = idx;
        let mut g = 0i64;
        for _ in 0..nvars {
            g = g.gcd(&((i % side) as i64 - h));
            i /= side;
        }
        if g == 1 {
            count += 1;
        }
    }
    count / 2
}

type Gauss = (i64, i64);

fn gauss_gcd(mut a: Gauss, mut b: Gauss) -> Gauss {
    while b != (0, 0) {
        // a / b rounded to the nearest Gaussian integer
        let n = b.0 * b.0 + b.1 * b.1;
        let (re, im) = (a.0 * b.0 + a.1 * b.1, a.1 * b.0 - a.0 * b.1);
        let qt = ((2 * re + n).div_euclid(2 * n), (2 * im + n).div_euclid(2 * n));
        let r = (a.0 - (qt.0 * b.0 - qt.1 * b.1), a.1 - (qt.0 * b.1 + qt.1 * b.0));
        a = b;
        b = r;
    }
    a
}

/// Points of `ℙ¹(ℚ(i))` of height `≤ h`: coprime pairs of norm `≤ h²` up to
/// the four units.
fn gaussian_p1_count(h: i64) -> usize {
    let elems: Vec<Gauss> = (-h..=h)
        .flat_map(|a| (-h..=h).map(move |b| (a, b)))
        .filter(|&(a, b)| a * a + b * b <= h * h)
        .collect();
    let mut count = 0;
    for &x in &elems {
        for &y in &elems {
            let g = gauss_gcd(x, y);
            if g.0 * g.0 + g.1 * g.1 == 1 {
                count += 1;
            }
        }
    }
    count / 4
}

fn collect(spec: &EnumerationSpec) -> Vec<ProjectivePoint> {
    enumerate_projective_points(spec).unwrap().collect()
}

#[test]
fn rational_counts_match_brute_force() {
    for (n, h) in [(1, 1), (1, 17), (1, 50), (2, 1), (2, 9), (3, 4)] {
        let pts = collect(&EnumerationSpec::by_height(n, BaseField::Rationals, h as f64));
        assert_eq!(pts.len(), coprime_count(n as u32 + 1, h), "n = {n}, H = {h}");
        let mut boxed = 0;
        visit_box(n + 1, h, &mut |_| boxed += 1);
        assert_eq!(boxed, pts.len());
    }
}

#[test]
fn gaussian_counts_match_brute_force() {
    for h in 1..=4 {
        let pts = collect(&EnumerationSpec::by_height(1, BaseField::gaussian(), h as f64));
        assert_eq!(pts.len(), gaussian_p1_count(h), "H = {h}");
        assert!(pts.iter().all(|p| weil_height(p) <= (h as f64).ln() + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn enumeration_is_unique_sorted_and_deterministic(m in prop::sample::select(vec![0u32, 1, 2, 3, 7]), n in 1usize..3, h in 1u32..5) {
        let field = if m == 0 { BaseField::Rationals } else { BaseField::imag_quadratic(m).unwrap() };
        let spec = EnumerationSpec::by_height(n, field, h as f64);
        let pts = collect(&spec);
        prop_assert_eq!(&pts, &collect(&spec));
        let normal: BTreeSet<String> = pts.iter().map(|p| p.normalized().to_string()).collect();
        prop_assert_eq!(normal.len(), pts.len());
        let heights: Vec<f64> = pts.iter().map(weil_height).collect();
        prop_assert!(heights.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        prop_assert!(heights.iter().all(|&x| x <= (h as f64).ln() + 1e-12));
        for i in 0..pts.len().min(40) {
            for j in i + 1..pts.len().min(40) {
                prop_assert!(!pts[i].projectively_equal(&pts[j]));
            }
        }
    }

    #[test]
    fn affine_points_are_hyperplane_integral(n in 1usize..3, b in 1u64..6, patch in 0usize..3) {
        prop_assume!(patch <= n);
        let spec = EnumerationSpec::by_box(n, BaseField::Rationals, b, None, patch);
        let affine = enumerate_affine_integral(&spec).unwrap();
        prop_assert_eq!(affine.len(), (2 * b as usize + 1).pow(n as u32));
        let mut hyperplane = vec![0u32; n + 1];
        hyperplane[patch] = 1;
        let d = Divisor::parse(&format!("x{patch}"), n).unwrap();
        let (kept, report) = filter_d_integral(affine.clone(), &d, 1e-9).unwrap();
        prop_assert_eq!(kept.len(), affine.len());
        prop_assert_eq!(report.on_divisor, 0);
        // among all points of height ≤ b, the D-integral ones are exactly the
        // affine box points
        let all = collect(&EnumerationSpec::by_height(n, BaseField::Rationals, b as f64));
        let (integral, _) = filter_d_integral(all, &d, 1e-9).unwrap();
        let a: BTreeSet<String> = affine.iter().map(|p| p.normalized().to_string()).collect();
        let i: BTreeSet<String> = integral.iter().map(|p| p.normalized().to_string()).collect();
        prop_assert_eq!(a, i);
    }
}

#[test]
fn affine_on_a_conic() {
    let conic = runge::geometry::HomogeneousForm::parse("x0^2 + x1^2 - x2^2", 3).unwrap();
    let v = Variety::new(2, vec![conic]).unwrap();
    let pts = enumerate_affine_integral(&EnumerationSpec::by_box(2, BaseField::Rationals, 5, Some(v), 2)).unwrap();
    let mut want = Vec::new();
    for a in -5i64..=5 {
        for b in -5i64..=5 {
            if a * a + b * b == 1 {
                want.push(ProjectivePoint::from_ints(&[a, b, 1]).unwrap());
            }
        }
    }
    assert_eq!(pts, want);
}

#[test]
fn csv_is_byte_stable() {
    let spec = EnumerationSpec::by_height(1, BaseField::gaussian(), 3.0);
    let render = || {
        let mut buf = Vec::new();
        write_points_csv(collect(&spec), 2, &mut buf).unwrap();
        buf
    };
    let a = render();
    assert_eq!(a, render());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("coord_0,coord_1,height\n"));
    assert_eq!(text.lines().count(), gaussian_p1_count(3) + 1);
    let _ = FieldElement::one(BaseField::gaussian());
}

#[test]
fn invalid_specs() {
    let mut s = EnumerationSpec::by_height(1, BaseField::Rationals, 3.0);
    s.box_bound = Some(3);
    assert!(enumerate_projective_points(&s).is_err());
    assert!(enumerate_affine_integral(&EnumerationSpec::by_box(1, BaseField::Rationals, 3, None, 2)).is_err());
    assert_eq!(collect(&EnumerationSpec::by_height(2, BaseField::Rationals, 0.5)).len(), 0);
}
