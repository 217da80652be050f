use proptest::prelude::*;
use semiclassical::exact::{pochhammer, Precision, Ring, Scalar};
use semiclassical::hyper::{
    classify_convergence, eval_hyper, eval_hyper_finite_sum, partial_sum_reversed, ConvergenceClass, HyperError,
    HyperSeries,
};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn tol() -> Scalar {
    Precision::digits(45).epsilon()
}

fn series(a: &[Scalar], b: &[Scalar], z: Scalar) -> HyperSeries {
    HyperSeries::new(a.to_vec(), b.to_vec(), z)
}

#[test]
fn convergence_classes() {
    assert_eq!(classify_convergence(&series(&[], &[], q(5, 1))), ConvergenceClass::Entire);
    assert_eq!(
        classify_convergence(&series(&[Scalar::int(-3), Scalar::int(1)], &[], q(1, 1))),
        ConvergenceClass::Terminating { degree: 3 }
    );
    assert_eq!(
        classify_convergence(&series(&[q(1, 2), q(1, 3)], &[q(2, 1)], q(1, 2))),
        ConvergenceClass::UnitDisk { gamma: q(7, 6) }
    );
    assert_eq!(classify_convergence(&series(&[q(1, 2), q(1, 3)], &[], q(1, 2))), ConvergenceClass::Divergent);
}

#[test]
fn exponential_series() {
    let e = eval_hyper(&series(&[], &[], Scalar::one()), &tol(), Precision::DEFAULT).unwrap();
    assert!(e.close_to(&Scalar::one().exp(Precision::DEFAULT), &tol()));
    assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-15);
}

#[test]
fn binomial_series() {
    let v = eval_hyper(&series(&[Scalar::int(2)], &[], q(1, 3)), &tol(), Precision::DEFAULT).unwrap();
    assert!(v.close_to(&q(9, 4), &tol()), "{v}");
}

#[test]
fn chu_vandermonde() {
    let (b, c) = (q(1, 3), q(7, 2));
    for n in 0..=6usize {
        let h = series(&[Scalar::int(-(n as i64)), b.clone()], std::slice::from_ref(&c), Scalar::one());
        let v = eval_hyper(&h, &tol(), Precision::DEFAULT).unwrap();
        assert!(v.is_exact());
        assert_eq!(v, pochhammer(&(c.clone() - b.clone()), n) / pochhammer(&c, n), "n = {n}");
    }
    let h = series(&[Scalar::int(-2), Scalar::int(1)], &[Scalar::int(3)], Scalar::one());
    assert_eq!(eval_hyper(&h, &tol(), Precision::DEFAULT).unwrap(), q(1, 2));
}

#[test]
fn finite_sums() {
    let h = series(&[Scalar::int(-2)], &[], q(1, 2));
    assert_eq!(eval_hyper_finite_sum(&h, 0).unwrap(), Scalar::one());
    assert_eq!(eval_hyper_finite_sum(&h, 2).unwrap(), q(1, 4));
    let exp = series(&[], &[], Scalar::one());
    assert_eq!(eval_hyper_finite_sum(&exp, 3).unwrap(), q(8, 3));
    assert_eq!(partial_sum_reversed(&exp, 3).unwrap(), q(8, 3));
}

#[test]
fn errors() {
    let divergent = series(&[q(1, 2), q(1, 3)], &[], q(1, 2));
    assert!(matches!(
        eval_hyper(&divergent, &tol(), Precision::DEFAULT),
        Err(HyperError::DivergentSeries(_))
    ));
    let outside = series(&[q(1, 2)], &[], q(3, 2));
    assert!(matches!(eval_hyper(&outside, &tol(), Precision::DEFAULT), Err(HyperError::DivergentSeries(_))));
    let pole = series(&[q(1, 2)], &[Scalar::int(-2)], q(1, 2));
    assert!(matches!(eval_hyper(&pole, &tol(), Precision::DEFAULT), Err(HyperError::PoleInDenominator { .. })));
    // the series stops before the pole at b = −4
    let safe = series(&[Scalar::int(-2)], &[Scalar::int(-4)], q(1, 2));
    assert!(eval_hyper(&safe, &tol(), Precision::DEFAULT).is_ok());
}

fn small() -> impl Strategy<Value = Scalar> {
    (-30i64..30, 1i64..8).prop_map(|(n, d)| q(n, d))
}

fn positive() -> impl Strategy<Value = Scalar> {
    (1i64..30, 1i64..8).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn terminating_equals_finite_sum(n in 0i64..8, a in small(), b in positive(), z in small()) {
        let h = series(&[Scalar::int(-n), a], &[b], z);
        let full = eval_hyper(&h, &tol(), Precision::DEFAULT).unwrap();
        prop_assert!(full.is_exact());
        prop_assert_eq!(full, eval_hyper_finite_sum(&h, n as usize).unwrap());
    }

    #[test]
    fn reversed_partial_sum(k in 0usize..7, a in positive(), b in positive(), z in small()) {
        prop_assume!(!z.is_zero());
        let h = series(&[a], &[b], z);
        prop_assert_eq!(partial_sum_reversed(&h, k).unwrap(), eval_hyper_finite_sum(&h, k).unwrap());
    }

    #[test]
    fn chu_vandermonde_random(n in 0usize..7, b in small(), c in positive()) {
        let h = series(&[Scalar::int(-(n as i64)), b.clone()], std::slice::from_ref(&c), Scalar::one());
        let v = eval_hyper(&h, &tol(), Precision::DEFAULT).unwrap();
        prop_assert_eq!(v, pochhammer(&(c.clone() - b), n) / pochhammer(&c, n));
    }

    #[test]
    fn tighter_tolerance_refines(z in small()) {
        let h = series(&[], &[], z);
        let loose = Precision::digits(20).epsilon();
        let tight = Precision::digits(40).epsilon();
        let v1 = eval_hyper(&h, &loose, Precision::DEFAULT).unwrap();
        let v2 = eval_hyper(&h, &tight, Precision::DEFAULT).unwrap();
        let scale = Scalar::one() + v2.abs();
        prop_assert!((v1 - v2).abs() <= loose * scale);
    }
}
