use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use runge::numfield::{
    decompose_prime, normalized_log_abs, places_dividing, product_formula_defect, valuation, BaseField, FieldElement,
    Place,
};

fn field(m: u32) -> BaseField {
    if m == 0 {
        BaseField::Rationals
    } else {
        BaseField::imag_quadratic(m).unwrap()
    }
}

fn elem(k: BaseField, a: (i64, i64), b: (i64, i64)) -> FieldElement {
    let r = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
    let b = if k.is_rational() { r((0, 1)) } else { r(b) };
    FieldElement::new(k, r(a), b)
}

fn frac() -> impl Strategy<Value = (i64, i64)> {
    (-2000i64..2000, 1i64..60)
}

fn fields() -> impl Strategy<Value = BaseField> {
    prop::sample::select(vec![0u32, 1, 2, 3, 7, 11, 19, 43]).prop_map(field)
}

fn nonzero() -> impl Strategy<Value = FieldElement> {
    (fields(), frac(), frac())
        .prop_map(|(k, a, b)| elem(k, a, b))
        .prop_filter("nonzero", |x| !x.is_zero())
}

/// `v_p(n)` for a nonzero rational by trial division.
fn vp(r: &BigRational, p: u64) -> i64 {
    let count = |n: &BigInt| {
        let p = BigInt::from(p);
        let mut n = n.clone();
        let mut k = 0;
        while &n % &p == BigInt::from(0) {
            n /= &p;
            k += 1;
        }
        k
    };
    count(r.numer()) - count(r.denom())
}

proptest! {
    #[test]
    fn product_formula(x in nonzero()) {
        prop_assert!(product_formula_defect(&x).unwrap().abs() < 1e-9);
    }

    #[test]
    fn valuations_are_multiplicative(k in fields(), a in frac(), b in frac(), c in frac(), d in frac()) {
        let x = elem(k, a, b);
        let y = elem(k, c, d);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let xy = &x * &y;
        for v in places_dividing(k, &[&x, &y]).unwrap() {
            prop_assert_eq!(valuation(&v, &xy).unwrap(), valuation(&v, &x).unwrap() + valuation(&v, &y).unwrap());
        }
        let inf = Place::infinity(k);
        let lhs = normalized_log_abs(&inf, &xy).unwrap();
        let rhs = normalized_log_abs(&inf, &x).unwrap() + normalized_log_abs(&inf, &y).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn norm_valuation_splits_over_places(x in nonzero()) {
        let k = x.field();
        let norm = x.norm();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29] {
            let total: i64 = decompose_prime(k, p)
                .unwrap()
                .iter()
                .map(|v| v.residue_degree() as i64 * valuation(v, &x).unwrap())
                .sum();
            let expected = if k.is_rational() { vp(x.a(), p) * k.degree() as i64 } else { vp(&norm, p) };
            prop_assert_eq!(total, expected);
        }
    }

    #[test]
    fn conjugation_permutes_places(x in nonzero()) {
        let k = x.field();
        let xc = x.conj();
        prop_assert_eq!(xc.conj(), x.clone());
        for p in [2u64, 3, 5, 13] {
            let places = decompose_prime(k, p).unwrap();
            let mut here: Vec<i64> = places.iter().map(|v| valuation(v, &x).unwrap()).collect();
            let mut there: Vec<i64> = places.iter().map(|v| valuation(v, &xc).unwrap()).collect();
            if places.len() == 2 {
                there.reverse();
            } else {
                here.sort();
                there.sort();
            }
            prop_assert_eq!(here, there);
        }
    }
}

#[test]
fn splitting_types() {
    let g = BaseField::gaussian();
    let kinds = |p| decompose_prime(g, p).unwrap().iter().map(|v| (v.residue_degree(), v.ramification())).collect::<Vec<_>>();
    assert_eq!(kinds(2), vec![(1, 2)]);
    assert_eq!(kinds(3), vec![(2, 1)]);
    assert_eq!(kinds(5), vec![(1, 1), (1, 1)]);
    let k = field(7);
    // -7 ≡ 1 mod 8: 2 splits in Q(√-7)
    assert_eq!(decompose_prime(k, 2).unwrap().len(), 2);
    assert!(decompose_prime(g, 4).is_err());
    assert!(BaseField::imag_quadratic(4).is_err());
}

#[test]
fn gaussian_valuations() {
    let g = BaseField::gaussian();
    let x = FieldElement::from_ints(g, 2, 1);
    let places = decompose_prime(g, 5).unwrap();
    let vals: Vec<i64> = places.iter().map(|v| valuation(v, &x).unwrap()).collect();
    assert_eq!(vals.iter().sum::<i64>(), 1);
    let two = FieldElement::from_int(g, 2);
    assert_eq!(valuation(&decompose_prime(g, 2).unwrap()[0], &two).unwrap(), 2);
    assert!(valuation(&places[0], &FieldElement::zero(g)).is_err());
}
