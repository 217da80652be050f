use proptest::prelude::*;
use rug::Integer;
use semiclassical::exact::{
    elementary_symmetric, falling_factorial, pochhammer, pochhammer_multi, stirling_convert, BasisChange, BiPoly,
    MPoly, Poly, Precision, Ring, Scalar,
};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| q(n, d))
}

fn poly() -> impl Strategy<Value = Poly<Scalar>> {
    prop::collection::vec(rational(), 0..6).prop_map(Poly::new)
}

#[test]
fn pochhammer_examples() {
    assert_eq!(pochhammer(&Scalar::int(1), 4), Scalar::int(24));
    assert_eq!(pochhammer(&q(1, 2), 3), q(15, 8));
    assert_eq!(pochhammer(&Scalar::int(-3), 4), Scalar::int(0));
    assert_eq!(pochhammer(&Scalar::int(7), 0), Scalar::int(1));
    assert_eq!(pochhammer_multi(&[Scalar::int(2), Scalar::int(3)], 2), Scalar::int(72));
    assert_eq!(pochhammer_multi::<Scalar>(&[], 5), Scalar::int(1));
}

#[test]
fn falling_factorial_matches_binomials() {
    assert_eq!(falling_factorial(&Scalar::int(5), 2), Scalar::int(20));
    for x in 0..12u32 {
        for n in 0..12u32 {
            let expect = Integer::from(Integer::factorial(n)) * Integer::from(x).binomial(n);
            let got = falling_factorial(&Scalar::int(x as i64), n as usize);
            assert_eq!(got, Scalar::from_rational(expect.into()), "φ_{n}({x})");
        }
    }
}

#[test]
fn elementary_symmetric_examples() {
    let xs = [Scalar::int(1), Scalar::int(2), Scalar::int(3)];
    assert_eq!(elementary_symmetric(&xs, 0), Scalar::int(1));
    assert_eq!(elementary_symmetric(&xs, 1), Scalar::int(6));
    assert_eq!(elementary_symmetric(&xs, 2), Scalar::int(11));
    assert_eq!(elementary_symmetric(&xs, 3), Scalar::int(6));
    assert_eq!(elementary_symmetric(&xs, 4), Scalar::int(0));
}

#[test]
fn appending_minus_n_shifts_elementary_symmetric() {
    // e_k(a1, a2, a3, −N) = e_k(a1, a2, a3) − N e_{k−1}(a1, a2, a3)
    let a: Vec<MPoly> = ["a1", "a2", "a3"].iter().map(|v| MPoly::var(v)).collect();
    let n = MPoly::var("N");
    let mut with_n = a.clone();
    with_n.push(-n.clone());
    for k in 1..=4 {
        let lhs = elementary_symmetric(&with_n, k);
        let rhs = elementary_symmetric(&a, k) - n.clone() * elementary_symmetric(&a, k - 1);
        assert_eq!(lhs, rhs, "k = {k}");
    }
}

#[test]
fn stirling_examples() {
    // x^2 = φ_2 + φ_1, x^3 = φ_3 + 3φ_2 + φ_1
    let x3 = [Scalar::int(0), Scalar::int(0), Scalar::int(0), Scalar::int(1)];
    assert_eq!(
        stirling_convert(&x3, BasisChange::PowerToFalling),
        vec![Scalar::int(0), Scalar::int(1), Scalar::int(3), Scalar::int(1)]
    );
    // φ_3 = x^3 − 3x^2 + 2x
    assert_eq!(
        stirling_convert(&x3, BasisChange::FallingToPower),
        vec![Scalar::int(0), Scalar::int(2), Scalar::int(-3), Scalar::int(1)]
    );
}

#[test]
fn scalar_parsing_and_precision() {
    assert_eq!("3/6".parse::<Scalar>().unwrap(), q(1, 2));
    assert_eq!("1e-3".parse::<Scalar>().unwrap(), q(1, 1000));
    assert!("1/0".parse::<Scalar>().is_err());
    let x = q(1, 3).to_approx(Precision::DEFAULT);
    assert!(!x.is_exact());
    assert_eq!(x.precision(), Some(Precision::DEFAULT));
    assert!(x.close_to(&q(1, 3), &Precision::digits(49).epsilon()));
    let json = serde_json::to_string(&q(-7, 4)).unwrap();
    assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), q(-7, 4));
}

#[test]
fn bipoly_difference_quotient() {
    // (t^3 − x^3)/(t − x) = t^2 + t x + x^2
    let t3: BiPoly<Scalar> = Poly::monomial(Poly::one(), 3);
    let x3: BiPoly<Scalar> = Poly::lift_x(&Poly::monomial(Scalar::int(1), 3));
    let quot = (t3 - x3).exact_div_linear(&Poly::x()).unwrap();
    let x = Poly::x();
    let expect = Poly::new(vec![x.clone() * x.clone(), x, Poly::one()]);
    assert_eq!(quot, expect);
}

proptest! {
    #[test]
    fn pochhammer_splits(x in rational(), n in 0usize..8, m in 0usize..8) {
        let whole = pochhammer(&x, n + m);
        let split = pochhammer(&x, n) * pochhammer(&(x.clone() + Scalar::int(n as i64)), m);
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn pochhammer_step(x in rational(), n in 0usize..10) {
        let next = pochhammer(&x, n + 1);
        prop_assert_eq!(next, (x.clone() + Scalar::int(n as i64)) * pochhammer(&x, n));
    }

    #[test]
    fn falling_is_reflected_rising(x in rational(), n in 0usize..10) {
        // φ_n(x) = (−1)^n (−x)_n
        let sign = if n % 2 == 0 { Scalar::int(1) } else { Scalar::int(-1) };
        prop_assert_eq!(falling_factorial(&x, n), sign * pochhammer(&-x.clone(), n));
    }

    #[test]
    fn stirling_round_trip(c in prop::collection::vec(rational(), 0..9)) {
        let there = stirling_convert(&c, BasisChange::PowerToFalling);
        prop_assert_eq!(stirling_convert(&there, BasisChange::FallingToPower), c);
    }

    #[test]
    fn falling_coefficients_evaluate_like_the_power_form(p in poly(), x in rational()) {
        let falling = p.to_falling();
        let direct: Scalar = falling
            .iter()
            .enumerate()
            .fold(Scalar::zero(), |acc, (k, c)| acc + c.clone() * falling_factorial(&x, k));
        prop_assert_eq!(direct, p.eval(&x));
    }

    #[test]
    fn degree_of_product_adds(p in poly(), r in poly()) {
        let prod = p.clone() * r.clone();
        match (p.degree(), r.degree()) {
            (Some(a), Some(b)) => prop_assert_eq!(prod.degree(), Some(a + b)),
            _ => prop_assert!(prod.is_zero()),
        }
    }

    #[test]
    fn division_by_linear_factor(p in poly(), r in rational()) {
        let (quot, rem) = p.div_linear(&r);
        prop_assert_eq!(rem.clone(), p.eval(&r));
        let rebuilt = quot * Poly::linear_root(&r) + Poly::constant(rem);
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn bipoly_difference_quotient_is_exact(p in poly()) {
        // (p(t) − p(x))/(t − x) is a polynomial whose diagonal is p'
        let num: BiPoly<Scalar> = Poly::lift_t(&p) - Poly::lift_x(&p);
        let quot = num.exact_div_linear(&Poly::x());
        prop_assert!(quot.is_some());
    }

    #[test]
    fn shift_is_composition(p in poly(), c in rational(), x in rational()) {
        prop_assert_eq!(p.shift(&c).eval(&x), p.eval(&(x.clone() + c.clone())));
    }

    #[test]
    fn rationals_stay_reduced(n in -1000i64..1000, d in 1i64..1000) {
        let s = q(n, d);
        let r = s.as_rational().unwrap();
        prop_assert_eq!(Integer::from(r.numer().gcd_ref(r.denom())), 1);
    }
}
