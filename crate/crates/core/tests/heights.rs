use num_integer::Integer;
use proptest::prelude::*;
use runge::geometry::{Divisor, ExactOrbit, HomogeneousForm, Orbit, ProjectivePoint, ZeroCycle};
use runge::heights::fast::{gcd_value, local_height_inf, IntForm, LnTable};
use runge::heights::{
    cycle_local_height, cycle_report, divisor_height, divisor_report, form_local_height, gcd_height, local_height,
    weil_height,
};
use runge::numfield::{places_dividing, BaseField, FieldElement, Place};

fn origin_cycle() -> ZeroCycle {
    let p = ProjectivePoint::from_ints(&[0, 0, 1]).unwrap();
    let gens = vec![HomogeneousForm::parse("x0", 3).unwrap(), HomogeneousForm::parse("x1", 3).unwrap()];
    ZeroCycle::new(2, vec![Orbit::new(ExactOrbit::from_point(&p).unwrap(), 1)], gens).unwrap()
}

/// `h(Y, x)` for `Y = (0:0:1)` cut out by `x0, x1`, from first principles.
fn origin_gcd_oracle(x: &[i64]) -> f64 {
    let g = x.iter().fold(0i64, |g, &c| g.gcd(&c));
    let x: Vec<i64> = x.iter().map(|c| c / g).collect();
    let m = x.iter().map(|c| c.unsigned_abs()).max().unwrap() as f64;
    let m01 = x[0].unsigned_abs().max(x[1].unsigned_abs()) as f64;
    let g01 = x[0].gcd(&x[1]) as f64;
    m.ln() - m01.ln() + g01.ln()
}

fn gaussian_point() -> impl Strategy<Value = ProjectivePoint> {
    let g = BaseField::gaussian();
    prop::collection::vec((-30i64..30, -30i64..30), 3)
        .prop_filter("nonzero", |v| v.iter().any(|&(a, b)| a != 0 || b != 0))
        .prop_map(move |v| ProjectivePoint::new(v.iter().map(|&(a, b)| FieldElement::from_ints(g, a, b)).collect()).unwrap())
}

fn int_point() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-200i64..200, 3).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

const DIVISORS: [&str; 4] = ["x0", "x0*x1 - x2^2", "x0^3 - 2*x1^3 + x1*x2^2", "x0 + x1 + x2"];

proptest! {
    #[test]
    fn height_is_scale_invariant(x in gaussian_point(), a in -9i64..9, b in -9i64..9) {
        prop_assume!(a != 0 || b != 0);
        let lambda = FieldElement::from_ints(x.field(), a, b);
        let y = x.scaled(&lambda).unwrap();
        prop_assert!((weil_height(&x) - weil_height(&y)).abs() < 1e-9);
        prop_assert!(weil_height(&x) >= -1e-12);
        let d = Divisor::parse(DIVISORS[1], 2).unwrap();
        if !d.contains(&x).unwrap() {
            let sx = divisor_report(&d, &[Place::infinity(x.field())], &x).unwrap();
            let sy = divisor_report(&d, &[Place::infinity(x.field())], &y).unwrap();
            prop_assert!((sx.proximity_s - sy.proximity_s).abs() < 1e-9);
        }
    }

    #[test]
    fn local_heights_sum_to_height(x in gaussian_point(), which in 0usize..4) {
        let d = Divisor::parse(DIVISORS[which], 2).unwrap();
        prop_assume!(!d.contains(&x).unwrap());
        let k = x.field();
        let fx = d.defining_form().evaluate(x.coords()).unwrap();
        let mut elems: Vec<&FieldElement> = x.coords().iter().collect();
        elems.push(&fx);
        let mut total = local_height(&d, &Place::infinity(k), &x).unwrap();
        for v in places_dividing(k, &elems).unwrap() {
            let l = local_height(&d, &v, &x).unwrap();
            // integral coefficients: finite local heights are nonnegative
            prop_assert!(l >= -1e-12);
            total += l;
        }
        prop_assert!((total - divisor_height(&d, &x)).abs() < 1e-9);
        let r = divisor_report(&d, &[Place::infinity(k)], &x).unwrap();
        prop_assert!((r.total - divisor_height(&d, &x)).abs() < 1e-9);
        prop_assert!((r.per_place.iter().map(|p| p.value).sum::<f64>() - r.total).abs() < 1e-9);
    }

    #[test]
    fn gcd_height_matches_oracle(x in int_point()) {
        prop_assume!(x[0] != 0 || x[1] != 0);
        let y = origin_cycle();
        let p = ProjectivePoint::from_ints(&x).unwrap();
        let want = origin_gcd_oracle(&x);
        prop_assert!((gcd_height(&y, &p).unwrap() - want).abs() < 1e-9);
        let ln = LnTable::new(1 << 12);
        let gens: Vec<IntForm> = y.generators.iter().map(|g| IntForm::new(g).unwrap()).collect();
        let c = x.iter().fold(0i64, |g, &v| g.gcd(&v));
        let prim: Vec<i64> = x.iter().map(|v| v / c).collect();
        let fast = gcd_value(&gens, &prim, &ln).unwrap().unwrap();
        prop_assert!((fast.total(&ln) - want).abs() < 1e-9);
    }

    #[test]
    fn gcd_height_is_min_of_generators(x in int_point()) {
        prop_assume!(x[0] != 0 || x[1] != 0);
        let y = origin_cycle();
        let p = ProjectivePoint::from_ints(&x).unwrap();
        let r = cycle_report(&y, &[Place::infinity(BaseField::Rationals)], &p).unwrap();
        for pv in &r.per_place {
            prop_assert!(pv.value >= -1e-12);
        }
        let inf = Place::infinity(BaseField::Rationals);
        let m = cycle_local_height(&y, &inf, &p).unwrap();
        for g in &y.generators {
            prop_assert!(m <= form_local_height(g, &inf, &p).unwrap() + 1e-12);
        }
        // h(Y, x) <= min_g h(g = 0, x) = h(x) for linear generators
        prop_assert!(r.total <= weil_height(&p) + 1e-9);
    }

    #[test]
    fn galois_invariance(x in gaussian_point()) {
        let y = origin_cycle();
        prop_assume!(!y.contains(&x).unwrap());
        let a = gcd_height(&y, &x).unwrap();
        let b = gcd_height(&y, &x.conj()).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((weil_height(&x) - weil_height(&x.conj())).abs() < 1e-12);
    }

    #[test]
    fn fast_archimedean_matches_exact(x in int_point(), which in 0usize..4) {
        let d = Divisor::parse(DIVISORS[which], 2).unwrap();
        let f = d.defining_form();
        let p = ProjectivePoint::from_ints(&x).unwrap();
        let ln = LnTable::new(1 << 12);
        match local_height_inf(&IntForm::new(&f).unwrap(), &x, &ln).unwrap() {
            None => prop_assert!(d.contains(&p).unwrap()),
            Some(l) => {
                let exact = form_local_height(&f, &Place::infinity(BaseField::Rationals), &p).unwrap();
                prop_assert!((l - exact).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn known_values() {
    let y = origin_cycle();
    let p = ProjectivePoint::from_ints(&[6, 10, 1]).unwrap();
    assert!((gcd_height(&y, &p).unwrap() - 2f64.ln()).abs() < 1e-12);
    let on = ProjectivePoint::from_ints(&[0, 0, 5]).unwrap();
    assert!(gcd_height(&y, &on).is_err());
    let d = Divisor::parse("x0", 2).unwrap();
    assert!(local_height(&d, &Place::infinity(BaseField::Rationals), &on).is_err());
}
