use opineq_core::constants::{
    kappa, omega, three_exponents_admissible, K_m4, K_nakamoto, K_power, K_reverse_theorem, K_three, SpectralBounds,
    K1, K2,
};
use opineq_core::random::{rng_from_seed, uniform};
use opineq_core::{HermitianMatrix, MapSpec, ScalarFn};
use proptest::prelude::*;

fn bounds(m: f64, big_m: f64) -> SpectralBounds {
    SpectralBounds::new(m, big_m).unwrap()
}

/// `K(m, M, p)` from its textbook two-bound form, in plain `powf` arithmetic.
fn kantorovich_oracle(m: f64, big_m: f64, p: f64) -> f64 {
    let cross = m * big_m.powf(p) - big_m * m.powf(p);
    cross / ((p - 1.0) * (big_m - m)) * ((p - 1.0) / p * (big_m.powf(p) - m.powf(p)) / cross).powf(p)
}

#[test]
fn classical_kantorovich_value() {
    assert!((K_power(bounds(1.0, 2.0), 2.0).unwrap() - 1.125).abs() < 1e-12);
    assert!((kappa(2.0, 2.0).unwrap() - 1.125).abs() < 1e-12);
    assert!((K_power(bounds(2.0, 4.0), 2.0).unwrap() - 1.125).abs() < 1e-12);
    assert!((K_power(bounds(1.0, 2.0), 1.0).unwrap() - 1.0).abs() < 1e-12);
    assert!((kappa(1.0, 3.0).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn kappa_matches_two_bound_form_on_grid() {
    for i in 0..=40 {
        let p = -1.0 + 0.1 * i as f64;
        for h in [1.0 + 1e-3, 1.01, 1.5, 2.0, 3.0, 5.0, 10.0, 25.0, 50.0, 100.0] {
            let k = kappa(h, p).unwrap();
            let kp = K_power(bounds(1.0, h), p).unwrap();
            assert!((k - kp).abs() <= 1e-12 * k.max(1.0), "h = {h}, p = {p}: {k} vs {kp}");
            if (p - 1.0).abs() > 0.05 && p.abs() > 0.05 {
                let o = kantorovich_oracle(1.0, h, p);
                assert!((k - o).abs() <= 1e-9 * o.max(1.0), "h = {h}, p = {p}: {k} vs oracle {o}");
            }
        }
    }
}

#[test]
fn secant_ratio_extrema() {
    let sq = ScalarFn::power(2.0);
    assert!((K2(bounds(1.0, 2.0), &sq).unwrap() - 9.0 / 8.0).abs() < 1e-9);
    let rt = ScalarFn::power(0.5);
    let expected = 4.0 / (3.0 * 2f64.sqrt());
    assert!((K1(bounds(1.0, 4.0), &rt).unwrap() - expected).abs() < 1e-9);
    // Linear f makes the secant exact.
    let id = ScalarFn::identity();
    assert!((K1(bounds(1.0, 4.0), &id).unwrap() - 1.0).abs() < 1e-12);
    assert!((K2(bounds(1.0, 4.0), &id).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn composite_constants_at_least_one() {
    let mut rng = rng_from_seed(21);
    for _ in 0..200 {
        let h = uniform(&mut rng, 1.0, 40.0);
        let gamma = uniform(&mut rng, 0.0, 1.0);
        assert!(K_nakamoto(h, gamma).unwrap() >= 1.0 - 1e-12);
        let beta = uniform(&mut rng, 0.05, 2.0);
        let alpha = uniform(&mut rng, 0.0, beta);
        assert!(K_m4(h, alpha, beta).unwrap() >= 1.0 - 1e-12);
        let g = uniform(&mut rng, 0.1, 2.0);
        let (a, b) = (uniform(&mut rng, 0.0, g / 2.0), uniform(&mut rng, 0.0, g));
        assert!(three_exponents_admissible(a, b, g));
        assert!(K_three(h, a, b, g).unwrap() >= 1.0 - 1e-12);
        let s = uniform(&mut rng, 0.05, 0.5);
        let m = uniform(&mut rng, 0.2, 2.0);
        let k = K_reverse_theorem(bounds(m, m * h.max(1.01)), &ScalarFn::power(s)).unwrap();
        assert!(k >= 1.0 - 1e-12, "s = {s}: {k}");
    }
}

#[test]
fn three_exponent_constant_collapses_to_m4() {
    for (h, a, g) in [(2.0, 0.3, 0.8), (7.0, 0.5, 1.0), (30.0, 0.1, 1.7)] {
        let three = K_three(h, a, 0.0, g).unwrap();
        let m4 = K_m4(h, a, g).unwrap();
        assert!((three - m4).abs() < 1e-10 * m4, "{three} vs {m4}");
    }
}

#[test]
fn omega_trace_example() {
    let phi = MapSpec::normalized_trace(2, 2).unwrap();
    let a = HermitianMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 4.0]]).unwrap();
    let w = omega(&phi, &a, 0.5).unwrap();
    // Φ(A) = 3I and Φ(A^{1/2})² = s²I with s = (√(3+√2) + √(3−√2))/2.
    let s = ((3.0 + 2f64.sqrt()).sqrt() + (3.0 - 2f64.sqrt()).sqrt()) / 2.0;
    let lam = 3.0 - s * s;
    assert!((w.infimum - lam).abs() < 1e-12);
    assert!((w.infimum - 0.1772).abs() < 5e-3);
    assert!((w.value - (3f64.sqrt() - (3.0 - lam).sqrt())).abs() < 1e-12);
    let last = *w.sequence_tail.last().unwrap();
    assert!((last - w.infimum).abs() < 1e-3);
    assert!(w.sequence_tail.windows(2).all(|p| p[1] <= p[0] + 1e-15));
    assert!((w.extrapolated_limit - w.infimum).abs() < 1e-8);
}

#[test]
fn omega_vanishes_on_scalars() {
    let phi = MapSpec::compression(3, 2).unwrap();
    let w = omega(&phi, &HermitianMatrix::identity(3).scale(2.5), 0.7).unwrap();
    assert!(w.value.abs() < 1e-12 && w.infimum.abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kappa_scale_invariant_and_one_sided(m in 0.1f64..10.0, h in 1.001f64..60.0, p in -1.0f64..3.0) {
        let k = K_power(bounds(m, m * h), p).unwrap();
        let kk = kappa(h, p).unwrap();
        prop_assert!((k - kk).abs() <= 1e-9 * kk.max(1.0));
        // At most one inside the concave window [0, 1], at least one outside.
        if (0.0..=1.0).contains(&p) {
            prop_assert!(kk <= 1.0 + 1e-12);
        } else {
            prop_assert!(kk >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn kappa_symmetric_under_p_reflection(h in 1.0f64..60.0, p in 0.05f64..2.95) {
        // K(m, M, p) = K(m, M, 1−p).
        let a = kappa(h, p).unwrap();
        let b = kappa(h, 1.0 - p).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }
}
