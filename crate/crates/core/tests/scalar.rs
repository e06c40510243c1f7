use opineq_core::linalg::eig_hermitian;
use opineq_core::random::{random_positive, rng_from_seed};
use opineq_core::scalar::{apply, certify, lfmps_crosscheck, parse_fn, CertVerdict, DeriveKind, OperatorProperty};
use opineq_core::ScalarFn;
use proptest::prelude::*;

#[test]
fn cube_is_not_operator_convex() {
    let c = certify(&ScalarFn::power(3.0), OperatorProperty::Convex, 2, 1000, 0).unwrap();
    assert_eq!(c.verdict, CertVerdict::Violated);
    let w = c.witness.expect("witness");
    assert_eq!(w.a.dim(), 2);
    assert!(w.lambda.is_some());
}

#[test]
fn sqrt_is_operator_monotone() {
    let c = certify(&ScalarFn::power(0.5), OperatorProperty::Monotone, 3, 1000, 0).unwrap();
    assert!(c.passed(), "max violation {}", c.max_violation);
}

#[test]
fn square_is_not_operator_monotone() {
    let c = certify(&ScalarFn::power(2.0), OperatorProperty::Monotone, 2, 1000, 0).unwrap();
    assert_eq!(c.verdict, CertVerdict::Violated);
}

#[test]
fn sqrt_passes_all_equivalent_properties() {
    let r = lfmps_crosscheck(&ScalarFn::power(0.5), 3, 300, 4).unwrap();
    assert!(r.all_pass(), "{:?}", r.verdicts());
    assert!(r.consistent());
}

#[test]
fn square_fails_all_equivalent_properties() {
    let r = lfmps_crosscheck(&ScalarFn::power(2.0), 2, 300, 4).unwrap();
    assert!(r.consistent(), "{:?}", r.verdicts());
    assert!(!r.all_pass());
}

#[test]
fn shifted_root_and_fraction_are_operator_concave() {
    for text in ["sqrt(add(const(1),t))", "div(t,add(const(1),t))"] {
        let f = parse_fn(text).unwrap();
        assert!(certify(&f, OperatorProperty::Concave, 3, 200, 9).unwrap().passed(), "{text}");
    }
}

#[test]
fn certification_is_deterministic() {
    let f = ScalarFn::power(3.0);
    let a = certify(&f, OperatorProperty::Convex, 2, 200, 77).unwrap();
    let b = certify(&f, OperatorProperty::Convex, 2, 200, 77).unwrap();
    assert_eq!(a, b);
}

#[test]
fn parse_rejects_garbage() {
    assert!(parse_fn("pow(t,").is_err());
    assert!(parse_fn("frobnicate(t)").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derived_functions_evaluate_pointwise(p in 0.05f64..2.0, t in 0.01f64..50.0) {
        let f = ScalarFn::power(p);
        let ft = f.eval(t).unwrap();
        let sq = f.derive(DeriveKind::FSquared, None).unwrap().eval(t).unwrap();
        let tf = f.derive(DeriveKind::TTimesF, None).unwrap().eval(t).unwrap();
        let tof = f.derive(DeriveKind::TOverF, None).unwrap().eval(t).unwrap();
        prop_assert!((sq - ft * ft).abs() <= 1e-14 * sq.abs().max(1.0));
        prop_assert!((tf - t * ft).abs() <= 1e-14 * tf.abs().max(1.0));
        prop_assert!((tof - t / ft).abs() <= 1e-14 * tof.abs().max(1.0));
    }

    #[test]
    fn spectral_calculus_maps_eigenvalues(seed in any::<u64>(), n in 2usize..6, p in -1.0f64..3.0) {
        let mut rng = rng_from_seed(seed);
        let a = random_positive(&mut rng, n, 0.2, 5.0, true);
        let fa = apply(&ScalarFn::power(p), &a).unwrap();
        let ev = eig_hermitian(&a).unwrap().eigenvalues;
        let mut expected: Vec<f64> = ev.iter().map(|x| x.powf(p)).collect();
        expected.sort_by(f64::total_cmp);
        let got = eig_hermitian(&fa).unwrap().eigenvalues;
        for (x, y) in got.iter().zip(&expected) {
            prop_assert!((x - y).abs() <= 1e-10 * y.abs().max(1.0));
        }
    }
}
