use opineq_core::constants::{ExponentParams, SpectralBounds};
use opineq_core::engine::hypothesis::HypothesisPolicy;
use opineq_core::engine::{
    check, check_moment_matrix, check_with_isometry, generate_instance, reproduce_counterexamples, CheckContext,
    CheckResult, Family, Instance, IsometryMode, Outcome, ParamRanges,
};
use opineq_core::linalg::{eig_hermitian, power, ToleranceConfig};
use opineq_core::maps::gallery_map;
use opineq_core::random::{random_positive, random_unitary, rng_from_seed};
use opineq_core::{HermitianMatrix, MapSpec, ScalarFn};

fn ctx() -> CheckContext {
    CheckContext::default()
}

fn checked(family: Family, inst: &Instance) -> CheckResult {
    match check(family, inst, &ctx()).unwrap() {
        Outcome::Checked(r) => r,
        Outcome::Skipped { reason, .. } => panic!("{family:?} skipped: {reason}"),
    }
}

fn params() -> ExponentParams {
    ExponentParams::default()
}

fn trace2() -> MapSpec {
    MapSpec::normalized_trace(2, 2).unwrap()
}

fn positive(seed: u64, n: usize) -> HermitianMatrix {
    random_positive(&mut rng_from_seed(seed), n, 0.5, 4.0, true)
}

#[test]
fn asy_with_zero_exponent_is_equality() {
    let phi = MapSpec::compression(3, 2).unwrap();
    let inst = Instance::new(phi, positive(1, 3)).with_params(ExponentParams { gamma: Some(0.0), ..params() });
    let r = checked(Family::Asy, &inst);
    assert!(r.verdict.holds);
    assert!(r.lhs.as_matrix().distance(r.rhs.as_matrix()) < 1e-12);
}

#[test]
fn kadison_is_equality_for_unitary_conjugation() {
    let u = random_unitary(&mut rng_from_seed(2), 3);
    let phi = MapSpec::unitary_conjugation(u).unwrap();
    let a = opineq_core::random::random_hermitian(&mut rng_from_seed(3), 3, 1.0);
    let r = checked(Family::Kadison, &Instance::new(phi, a));
    assert!(r.verdict.holds);
    assert!(r.verdict.gap_min_eig.abs() < 1e-12);
}

#[test]
fn choi_davis_for_square_holds() {
    let phi = MapSpec::compression(4, 2).unwrap();
    let inst = Instance::new(phi, positive(4, 4)).with_f(ScalarFn::power(2.0));
    let r = checked(Family::Chda, &inst);
    assert!(r.verdict.holds && r.verdict.gap_min_eig >= -1e-10);
}

#[test]
fn scalar_chebyshev_reversal_detected() {
    let inst = Instance::new(trace2(), HermitianMatrix::from_diag(&[1.0, 2.0]))
        .with_b(HermitianMatrix::from_diag(&[2.0, 1.0]));
    let r = checked(Family::ScalarChebyshev, &inst);
    assert!(r.verdict.holds);
    assert!(r.notes.iter().any(|n| n.contains("reversed")));
    // Mean of products 2 against product of means 2.25.
    assert!((r.verdict.gap_min_eig - 0.25).abs() < 1e-14);
}

#[test]
fn po1_with_unit_functions() {
    // f·g/t = 1/t is not operator concave, so only the relaxed policy evaluates this.
    // Both sides then reduce to Φ(A)^r against Φ(A^r), equal for multiplicative maps only.
    let relaxed = CheckContext { policy: HypothesisPolicy::Relax, ..ctx() };
    let build = |phi: MapSpec| {
        Instance::new(phi, positive(5, 3))
            .with_f(ScalarFn::constant(1.0))
            .with_g(ScalarFn::constant(1.0))
            .with_params(ExponentParams { r: Some(0.5), ..params() })
    };
    let inst = build(MapSpec::unitary_conjugation(random_unitary(&mut rng_from_seed(5), 3)).unwrap());
    assert!(matches!(check(Family::Po1, &inst, &ctx()).unwrap(), Outcome::Skipped { .. }));
    let r = check(Family::Po1, &inst, &relaxed).unwrap().result().cloned().unwrap();
    assert!(r.verdict.holds);
    assert!(r.verdict.gap_min_eig.abs() < 1e-10, "{}", r.verdict.gap_min_eig);
    assert!(r.chain_gaps().unwrap().iter().all(|&g| g >= -1e-10));

    let inst = build(MapSpec::compression(3, 2).unwrap());
    let r = check(Family::Po1, &inst, &relaxed).unwrap().result().cloned().unwrap();
    assert!(!r.verdict.holds);
}

#[test]
fn po1_furuta_variant_fails_concavity_hypothesis() {
    // f = t^{-γ} with g = 1 gives f·g/t = t^{-1-γ}, which is operator convex.
    let phi = MapSpec::compression(3, 2).unwrap();
    let inst = Instance::new(phi, positive(6, 3))
        .with_f(ScalarFn::power(-0.5))
        .with_params(ExponentParams { r: Some(0.5), ..params() });
    assert!(matches!(check(Family::Po1, &inst, &ctx()).unwrap(), Outcome::Skipped { .. }));

    // Without the hypothesis the inequality is false already for a vector state:
    // eigenvalues 1 and 1e4 with weights 0.99 and 0.01, γ = 1, r = 0.1.
    let (c, s, big) = (0.99f64.sqrt(), 0.1, 1e4);
    let a = HermitianMatrix::from_real_rows(&[
        [c * c + big * s * s, c * s * (big - 1.0)],
        [c * s * (big - 1.0), s * s + big * c * c],
    ])
    .unwrap();
    let inst = Instance::new(MapSpec::compression(2, 1).unwrap(), a)
        .with_f(ScalarFn::power(-1.0))
        .with_params(ExponentParams { r: Some(0.1), ..params() });
    let relaxed = CheckContext { policy: HypothesisPolicy::Relax, ..ctx() };
    let r = check(Family::Po1, &inst, &relaxed).unwrap().result().cloned().unwrap();
    let lhs = (100.99f64 / (0.99 + 0.01 / big)).powf(0.1);
    let rhs = 0.99 + 0.01 * big.powf(0.2);
    assert!((r.lhs.real_trace() - lhs).abs() < 1e-9);
    assert!((r.rhs.real_trace() - rhs).abs() < 1e-9);
    assert!(!r.verdict.holds);
}

#[test]
fn me1_at_identity() {
    let phi = MapSpec::compression(3, 2).unwrap();
    let inst = Instance::new(phi, HermitianMatrix::identity(3))
        .with_params(ExponentParams { alpha: Some(0.4), beta: Some(0.3), gamma: Some(0.8), ..params() })
        .with_bounds(SpectralBounds::new(1.0, 2.0).unwrap());
    let r = checked(Family::Me1, &inst);
    assert!(r.verdict.holds);
    assert!(r.lhs.as_matrix().distance(HermitianMatrix::identity(2).as_matrix()) < 1e-12);
    assert!(r.constant.unwrap() >= 1.0);
}

#[test]
fn me1_random_instance_both_modes() {
    let mut rng = rng_from_seed(8);
    let a = random_positive(&mut rng, 3, 1.0, 2.0, true);
    let phi = gallery_map(0, 3, 8).unwrap();
    let inst = Instance::new(phi, a)
        .with_params(ExponentParams { alpha: Some(0.4), beta: Some(0.3), gamma: Some(0.8), ..params() })
        .with_bounds(SpectralBounds::new(1.0, 2.0).unwrap());
    for mode in [IsometryMode::Constructive, IsometryMode::Dominance] {
        let out = check_with_isometry(Family::Me1, &inst, mode, ToleranceConfig::default()).unwrap();
        assert_eq!(out.holds(), Some(true), "{mode:?}");
    }
}

#[test]
fn me1_without_beta_matches_m4() {
    for seed in 0..20 {
        let mut rng = rng_from_seed(100 + seed);
        let a = random_positive(&mut rng, 3, 1.0, 3.0, true);
        let phi = gallery_map(seed as usize % 3, 3, seed).unwrap();
        let bounds = SpectralBounds::new(1.0, 3.0).unwrap();
        let me1 = Instance::new(phi.clone(), a.clone())
            .with_params(ExponentParams { alpha: Some(0.3), beta: Some(0.0), gamma: Some(0.9), ..params() })
            .with_bounds(bounds);
        let m4 = Instance::new(phi, a)
            .with_params(ExponentParams { alpha: Some(0.3), beta: Some(0.9), ..params() })
            .with_bounds(bounds);
        let dom = CheckContext { mode: IsometryMode::Dominance, ..ctx() };
        let r1 = match check(Family::Me1, &me1, &dom).unwrap() {
            Outcome::Checked(r) => r,
            Outcome::Skipped { reason, .. } => panic!("{reason}"),
        };
        let r2 = checked(Family::M4, &m4);
        assert!((r1.constant.unwrap() - r2.constant.unwrap()).abs() < 1e-10);
        assert_eq!(r1.verdict.holds, r2.verdict.holds);
    }
}

#[test]
fn elh_scalar_pair_is_equality() {
    let inst = Instance::new(trace2(), HermitianMatrix::identity(2).scale(2.0))
        .with_b(HermitianMatrix::identity(2))
        .with_params(ExponentParams { r: Some(0.5), ..params() });
    let r = checked(Family::Elh, &inst);
    assert!(r.verdict.holds);
    assert!(r.verdict.gap_min_eig.abs() < 1e-12);
    // B^r + (√2 − 1)I = √2 I.
    assert!((r.lhs.real_trace() / 2.0 - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn lemma_asa_scalar_case_is_equality() {
    for (a, b, r, q) in [(3.0, 1.0, 0.5, 1.0), (2.0, 0.5, 1.0, 2.0), (5.0, 4.0, 2.0, 1.5)] {
        let inst = Instance::new(trace2(), HermitianMatrix::identity(2).scale(a))
            .with_b(HermitianMatrix::identity(2).scale(b))
            .with_params(ExponentParams { p: Some(1.0), r: Some(r), q: Some(q), ..params() });
        let res = checked(Family::LemmaAsa, &inst);
        assert!(res.verdict.gap_min_eig.abs() < 1e-12, "({a}, {b}, {r}, {q}): {}", res.verdict.gap_min_eig);
    }
}

#[test]
fn main2_at_identity_is_equality() {
    let phi = MapSpec::compression(3, 2).unwrap();
    let inst = Instance::new(phi, HermitianMatrix::identity(3)).with_params(ExponentParams {
        alpha: Some(1.0),
        beta: Some(0.7),
        ..params()
    });
    let r = checked(Family::ThmMain2, &inst);
    assert!(r.verdict.holds && r.verdict.gap_min_eig.abs() < 1e-12);
    assert!(r.rhs.as_matrix().distance(HermitianMatrix::identity(2).as_matrix()) < 1e-12);
}

#[test]
fn omega_gap_trace_example_is_tight() {
    let a = HermitianMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 4.0]]).unwrap();
    let inst = Instance::new(trace2(), a).with_params(ExponentParams { r: Some(0.5), ..params() });
    let r = checked(Family::OmegaGap, &inst);
    assert!(r.verdict.holds);
    // Φ(A)^{1/2} − Φ(A^{1/2}) is the scalar √3 − s, and ω equals it exactly here.
    assert!(r.verdict.gap_min_eig.abs() < 1e-12);
    let omega = r.constant.unwrap();
    assert!((omega - 0.0519).abs() < 1e-3);
}

#[test]
fn omega_gap_vanishes_on_scalars() {
    let phi = MapSpec::compression(3, 2).unwrap();
    let inst = Instance::new(phi, HermitianMatrix::identity(3).scale(1.7))
        .with_params(ExponentParams { r: Some(0.6), ..params() });
    let r = checked(Family::OmegaGap, &inst);
    assert!(r.constant.unwrap().abs() < 1e-12);
    assert!(r.verdict.gap_min_eig.abs() < 1e-12);
}

#[test]
fn moment_matrix_cases() {
    let phi = MapSpec::compression(3, 2).unwrap();
    let a = positive(9, 3);
    let r1 = check_moment_matrix(&phi, &a, 1, ToleranceConfig::default()).unwrap();
    assert!(r1.verdict.holds);
    let r3 = check_moment_matrix(&phi, &a, 3, ToleranceConfig::default()).unwrap();
    assert!(r3.verdict.holds && r3.verdict.gap_min_eig >= -1e-9);
    let c = HermitianMatrix::identity(3).scale(1.5);
    let rc = check_moment_matrix(&phi, &c, 2, ToleranceConfig::default()).unwrap();
    assert!(rc.verdict.gap_min_eig >= -1e-10);
}

#[test]
fn kadison_matches_first_moment_block() {
    let phi = MapSpec::compression(3, 2).unwrap();
    let a = opineq_core::random::random_hermitian(&mut rng_from_seed(12), 3, 1.0);
    let k = checked(Family::Kadison, &Instance::new(phi.clone(), a.clone()));
    let m = check_moment_matrix(&phi, &a, 1, ToleranceConfig::default()).unwrap();
    assert_eq!(k.verdict.holds, m.verdict.holds);
}

#[test]
fn published_counterexamples() {
    let r = reproduce_counterexamples().unwrap();
    assert!(r.exact_deviation < 1e-12);
    assert!(r.first_gap < -1e-3 && r.second_gap < -1e-3);
    let first = checked(Family::ChOp1, &Instance::new(r.phi.clone(), r.a.clone()).with_b(r.b.clone()));
    assert!(!first.verdict.holds);
    let second = checked(Family::ChOp2, &Instance::new(r.phi.clone(), r.a.clone()).with_b(r.b.clone()));
    assert!(!second.verdict.holds);
}

#[test]
fn sandwich_chain_is_ordered() {
    for seed in 0..30 {
        let inst =
            generate_instance(Family::CorF2Sandwich, 3 + seed as usize % 4, seed, &ParamRanges::default()).unwrap();
        if let Outcome::Checked(r) = check(Family::CorF2Sandwich, &inst, &ctx()).unwrap() {
            assert!(r.chain_gaps().unwrap().iter().all(|&g| g >= -r.verdict.tolerance_used));
        }
    }
}

#[test]
fn constructive_implies_dominance() {
    for family in [Family::Po1, Family::Me1, Family::Tt1m1, Family::Tt1m2, Family::Po1Reverse] {
        for seed in 0..40 {
            let inst = generate_instance(family, 2 + seed as usize % 5, seed, &ParamRanges::default()).unwrap();
            let con =
                check_with_isometry(family, &inst, IsometryMode::Constructive, ToleranceConfig::default()).unwrap();
            let dom = check_with_isometry(family, &inst, IsometryMode::Dominance, ToleranceConfig::default()).unwrap();
            if con.holds() == Some(true) {
                assert_eq!(dom.holds(), Some(true), "{family:?} seed {seed}");
            }
        }
    }
}

#[test]
fn singular_operand_rejected_for_negative_power() {
    let a = HermitianMatrix::from_diag(&[0.0, 1.0]);
    assert!(power(&a, -1.0).is_err());
    let inst = Instance::new(trace2(), a)
        .with_f(ScalarFn::power(2.0))
        .with_params(ExponentParams { p: Some(-1.0), ..params() });
    assert!(matches!(check(Family::PowerCd, &inst, &ctx()), Ok(Outcome::Skipped { .. }) | Err(_)));
}

#[test]
fn declared_bounds_must_contain_spectrum() {
    let a = positive(13, 3);
    let top = eig_hermitian(&a).unwrap().max();
    let phi = MapSpec::compression(3, 2).unwrap();
    let inst = Instance::new(phi, a)
        .with_params(ExponentParams { p: Some(2.0), ..params() })
        .with_bounds(SpectralBounds::new(0.5, top * 0.5).unwrap());
    assert!(!matches!(check(Family::RevChoi, &inst, &ctx()), Ok(Outcome::Checked(_))));
}

#[test]
fn lemma_asa_needs_p_at_least_one() {
    // p = 0, A = 2I, B = I, r = q = 1: left side 0, right side 2 − √2.
    let inst = Instance::new(trace2(), HermitianMatrix::identity(2).scale(2.0))
        .with_b(HermitianMatrix::identity(2))
        .with_params(ExponentParams { p: Some(0.0), r: Some(1.0), q: Some(1.0), ..params() });
    assert!(matches!(check(Family::LemmaAsa, &inst, &ctx()).unwrap(), Outcome::Skipped { .. }));
    let relaxed = CheckContext { policy: HypothesisPolicy::Relax, ..ctx() };
    let r = check(Family::LemmaAsa, &inst, &relaxed).unwrap().result().cloned().unwrap();
    assert!((r.verdict.gap_min_eig + (2.0 - 2f64.sqrt())).abs() < 1e-12);
}
