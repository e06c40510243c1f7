//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness. The process fails when a criterion
//! fails that is not listed in `UNATTAINABLE`.

use std::time::{Duration, Instant};

use opineq::parallel;
use opineq_core::constants::ExponentParams;
use opineq_core::constants::{
    kappa, omega, three_exponents_admissible, K_m4, K_nakamoto, K_power, K_reverse_theorem, K_three, SpectralBounds,
    K1, K2,
};
use opineq_core::engine::HypothesisPolicy;
use opineq_core::engine::{
    check, reproduce_counterexamples, CheckContext, Family, Instance, Outcome, ParamRanges, SuiteConfig,
};
use opineq_core::explorer::{revalidate, SearchBudget};
use opineq_core::linalg::{eig_hermitian, spectral_dominance};
use opineq_core::random::{gaussian, random_hermitian, rng_from_seed, uniform, Rng64};
use opineq_core::scalar::{certify, lfmps_crosscheck, CertVerdict, OperatorProperty};
use opineq_core::{ComplexMatrix, HermitianMatrix, MapSpec, ScalarFn, ToleranceConfig};

/// Criteria that cannot pass as stated. They still run and print FAIL.
///
/// * `1`: the rounded matrix entry 2.4 differs from the exact 2.40600382 by
///   6.0e-3, above the 5e-3 tolerance.
/// * `7/power-cd-n2`: every 2×2 input generates a commutative image, so the
///   scalar convexity of t³ transfers and no 2×2 violation exists.
const UNATTAINABLE: [&str; 2] = ["1", "7/power-cd-n2"];

/// Budget per theorem family for the false-certificate check.
const CI_SEARCH_SAMPLES: usize = 3000;
const CI_SEARCH_DIM: usize = 3;

struct Line {
    id: &'static str,
    pass: bool,
    title: &'static str,
    detail: String,
}

fn bounds(m: f64, big_m: f64) -> SpectralBounds {
    SpectralBounds::new(m, big_m).unwrap()
}

fn ctx() -> CheckContext {
    CheckContext::default()
}

fn gap(family: Family, inst: &Instance) -> f64 {
    match check(family, inst, &ctx()).unwrap() {
        Outcome::Checked(r) => r.verdict.gap_min_eig,
        Outcome::Skipped { reason, .. } => panic!("{family} skipped: {reason}"),
    }
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let rep = reproduce_counterexamples().unwrap();
    let elapsed = start.elapsed();
    let pass = rep.exact_deviation <= 1e-12
        && rep.rounded_deviation <= 5e-3
        && rep.first_gap < -1e-3
        && rep.second_gap < -1e-3
        && elapsed < Duration::from_secs(1);
    Line {
        id: "1",
        pass,
        title: "counterexample reproduction",
        detail: format!(
            "exact deviation {:.1e} (≤ 1e-12), rounded deviation {:.2e} (≤ 5e-3), gaps {:.4} and {:.4} (< -1e-3), {:?}",
            rep.exact_deviation, rep.rounded_deviation, rep.first_gap, rep.second_gap, elapsed
        ),
    }
}

fn criterion_2() -> Line {
    let phi = MapSpec::normalized_trace(2, 2).unwrap();
    let a = HermitianMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 4.0]]).unwrap();
    let w = omega(&phi, &a, 0.5).unwrap();
    let closed = 3f64.sqrt() - (3.0 - w.infimum).sqrt();
    let tail = *w.sequence_tail.last().unwrap();
    let non_increasing = w.sequence_tail.windows(2).all(|p| p[1] <= p[0] + 1e-15);
    let pass = (w.infimum - 0.1772).abs() <= 5e-3
        && (w.value - closed).abs() <= 1e-12
        && (tail - w.infimum).abs() <= 1e-3
        && non_increasing;
    Line {
        id: "2",
        pass,
        title: "ω example",
        detail: format!(
            "λ_min {:.8}, ω {:.8} (closed form {:.8}), tail at n=1024 {:.8}, non-increasing {non_increasing}",
            w.infimum, w.value, closed, tail
        ),
    }
}

fn criterion_3() -> Line {
    use Family::*;
    let families = vec![
        Chda,
        PowerCd,
        Kadison,
        Asy,
        Asy2,
        Asy222,
        Asy33,
        Perspective,
        CorF2Upper,
        CorF2Lower,
        CorF2Sandwich,
        PropFr,
        Moment,
        Po1,
        Po1Reverse,
        Tt1m1,
        Tt1m2,
        Me1,
        RevJensen,
        RevChoi,
        ThmReverseF,
        CorNakamoto,
        M4,
        Elh,
        OmegaGap,
        LemmaAsa,
        ThmMain2,
        CorLc,
    ];
    let config = SuiteConfig { families, trials: 1000, dims: (2..=8).collect(), ..SuiteConfig::default() };
    let start = Instant::now();
    let rep = parallel::run_suite(&config);
    let elapsed = start.elapsed();
    let short: Vec<String> = rep
        .families
        .iter()
        .filter(|f| f.passes < config.trials || f.failures > 0)
        .map(|f| format!("{}: {} pass, {} skip, {} fail, {} error", f.family, f.passes, f.skips, f.failures, f.errors))
        .collect();
    let instances: usize = rep.families.iter().map(|f| f.passes).sum();
    let worst = rep.families.iter().filter_map(|f| f.worst_relative_gap).fold(f64::INFINITY, f64::min);
    let pass = short.is_empty() && elapsed < Duration::from_secs(120);
    Line {
        id: "3",
        pass,
        title: "theorem property suites",
        detail: format!(
            "{} families × {} trials, {instances} passes, worst relative gap {worst:.2e}, {:.1?}{}",
            rep.families.len(),
            config.trials,
            elapsed,
            if short.is_empty() { String::new() } else { format!("; {}", short.join("; ")) }
        ),
    }
}

/// `K(m, M, p)` in plain `powf` arithmetic.
fn kantorovich_oracle(m: f64, big_m: f64, p: f64) -> f64 {
    let cross = m * big_m.powf(p) - big_m * m.powf(p);
    cross / ((p - 1.0) * (big_m - m)) * ((p - 1.0) / p * (big_m.powf(p) - m.powf(p)) / cross).powf(p)
}

fn criterion_4() -> Line {
    let classical = K_power(bounds(1.0, 2.0), 2.0).unwrap();
    let mut worst_rel = 0.0f64;
    let mut worst_abs = 0.0f64;
    let mut oracle_ok = true;
    for i in 0..=40 {
        let p = -1.0 + 0.1 * i as f64;
        for h in [1.001, 1.01, 1.5, 2.0, 3.0, 5.0, 10.0, 25.0, 50.0, 100.0] {
            let k = kappa(h, p).unwrap();
            let kp = K_power(bounds(1.0, h), p).unwrap();
            worst_abs = worst_abs.max((k - kp).abs());
            worst_rel = worst_rel.max((k - kp).abs() / k.max(1.0));
            if (p - 1.0).abs() > 0.05 && p.abs() > 0.05 {
                let o = kantorovich_oracle(1.0, h, p);
                oracle_ok &= (k - o).abs() <= 1e-9 * o.max(1.0);
            }
        }
    }
    let k2 = K2(bounds(1.0, 2.0), &ScalarFn::power(2.0)).unwrap();
    let k1 = K1(bounds(1.0, 4.0), &ScalarFn::power(0.5)).unwrap();
    let k1_exact = 4.0 / (3.0 * 2f64.sqrt());

    let mut rng = rng_from_seed(21);
    let mut min_composite = f64::INFINITY;
    for _ in 0..200 {
        let h = uniform(&mut rng, 1.0, 40.0);
        let gamma = uniform(&mut rng, 0.0, 1.0);
        let beta = uniform(&mut rng, 0.05, 2.0);
        let alpha = uniform(&mut rng, 0.0, beta);
        let g = uniform(&mut rng, 0.1, 2.0);
        let a3 = uniform(&mut rng, 0.0, g / 2.0);
        let b3 = uniform(&mut rng, 0.0, g);
        assert!(three_exponents_admissible(a3, b3, g));
        let s = uniform(&mut rng, 0.05, 0.5);
        let m = uniform(&mut rng, 0.2, 2.0);
        for k in [
            K_nakamoto(h, gamma).unwrap(),
            K_m4(h, alpha, beta).unwrap(),
            K_three(h, a3, b3, g).unwrap(),
            K_reverse_theorem(bounds(m, m * h.max(1.01)), &ScalarFn::power(s)).unwrap(),
        ] {
            min_composite = min_composite.min(k);
        }
    }
    let pass = (classical - 1.125).abs() <= 1e-12
        && worst_rel <= 1e-12
        && oracle_ok
        && (k2 - 9.0 / 8.0).abs() <= 1e-9
        && (k1 - k1_exact).abs() <= 1e-9
        && min_composite >= 1.0 - 1e-12;
    Line {
        id: "4",
        pass,
        title: "constants",
        detail: format!(
            "K_power {classical}, κ identity worst {worst_rel:.1e} relative ({worst_abs:.1e} absolute), \
             K2 error {:.1e}, K1 error {:.1e}, min composite {min_composite:.6}",
            (k2 - 1.125).abs(),
            (k1 - k1_exact).abs()
        ),
    }
}

/// Scans rotations `R` for `X ≤ RᵀYR`.
fn brute_force_dominance(x: &HermitianMatrix, y: &HermitianMatrix) -> bool {
    let steps = 20_000;
    (0..steps).any(|k| {
        let t = std::f64::consts::PI * k as f64 / steps as f64;
        let (c, s) = (t.cos(), t.sin());
        let r = ComplexMatrix::from_real_rows(&[[c, -s], [s, c]]);
        let ry = y.conjugate_by(&r).unwrap();
        eig_hermitian(&ry.try_sub(x).unwrap()).unwrap().min() >= -1e-9
    })
}

fn real_symmetric(rng: &mut Rng64) -> HermitianMatrix {
    let (a, b, c) = (gaussian(rng), gaussian(rng), gaussian(rng));
    HermitianMatrix::from_real_rows(&[[a, b], [b, c]]).unwrap()
}

fn criterion_5() -> Line {
    let mut rng = rng_from_seed(5);
    let mut disagreements = 0;
    for _ in 0..100 {
        let x = real_symmetric(&mut rng);
        let y = real_symmetric(&mut rng);
        if spectral_dominance(&x, &y, ToleranceConfig::default()).unwrap().holds != brute_force_dominance(&x, &y) {
            disagreements += 1;
        }
    }
    let s = eig_hermitian(&HermitianMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 4.0]]).unwrap()).unwrap();
    let r2 = 2f64.sqrt();
    let eig_err = (s.min() - (3.0 - r2)).abs().max((s.max() - (3.0 + r2)).abs());
    let mut rng = rng_from_seed(11);
    let mut worst = 0.0f64;
    for k in 0..500 {
        let a = random_hermitian(&mut rng, 2 + k % 7, 3.0);
        let s = eig_hermitian(&a).unwrap();
        let back = s.recompose(&s.eigenvalues);
        worst = worst.max(back.as_matrix().distance(a.as_matrix()) / a.as_matrix().frobenius_norm());
    }
    Line {
        id: "5",
        pass: disagreements == 0 && eig_err <= 1e-12 && worst <= 1e-11,
        title: "oracle equivalence",
        detail: format!(
            "{disagreements} dominance disagreements in 100, eig error {eig_err:.1e}, worst reconstruction {worst:.1e}·‖A‖_F"
        ),
    }
}

fn criterion_6() -> Line {
    let trace2 = MapSpec::normalized_trace(2, 2).unwrap();
    let scalar = |c: f64| HermitianMatrix::identity(2).scale(c);
    let mut gaps = Vec::new();
    for (a, b, r) in [(2.0, 1.0, 0.5), (3.0, 0.5, 0.2), (1.5, 1.0, 0.9)] {
        let inst = Instance::new(trace2.clone(), scalar(a))
            .with_b(scalar(b))
            .with_params(ExponentParams { r: Some(r), ..Default::default() });
        gaps.push(("ELH", gap(Family::Elh, &inst)));
    }
    for (a, b, r, q) in [(3.0, 1.0, 0.5, 1.0), (2.0, 0.5, 1.0, 2.0), (5.0, 4.0, 2.0, 1.5)] {
        let inst = Instance::new(trace2.clone(), scalar(a)).with_b(scalar(b)).with_params(ExponentParams {
            p: Some(1.0),
            r: Some(r),
            q: Some(q),
            ..Default::default()
        });
        gaps.push(("LEMMA_ASA", gap(Family::LemmaAsa, &inst)));
    }
    let main2 = Instance::new(MapSpec::compression(3, 2).unwrap(), HermitianMatrix::identity(3))
        .with_params(ExponentParams { alpha: Some(1.0), beta: Some(0.7), ..Default::default() });
    gaps.push(("THM_MAIN2", gap(Family::ThmMain2, &main2)));
    let mut omegas = Vec::new();
    for (c, r) in [(1.7, 0.6), (0.4, 0.5), (9.0, 0.9)] {
        let w = omega(&MapSpec::compression(3, 2).unwrap(), &HermitianMatrix::identity(3).scale(c), r).unwrap();
        omegas.push(w.value.abs());
    }
    let worst_gap = gaps.iter().map(|g| g.1.abs()).fold(0.0, f64::max);
    let worst_omega = omegas.iter().copied().fold(0.0, f64::max);
    Line {
        id: "6",
        pass: worst_gap <= 1e-12 && worst_omega <= 1e-12,
        title: "scalar equality cases",
        detail: format!(
            "worst |gap| {worst_gap:.1e} over ELH, LEMMA_ASA (p = 1), THM_MAIN2; worst |ω| at A = cI {worst_omega:.1e}"
        ),
    }
}

fn criterion_7() -> Vec<Line> {
    let budget = SearchBudget::default();
    let start = Instant::now();
    let cert = parallel::search_violation(Family::ChOp1, 3, &ParamRanges::default(), &budget, &ctx()).unwrap();
    let found = cert.as_ref().map(|c| (c.restart, c.violation_eig));
    let revalidated = cert.as_ref().and_then(|c| revalidate(c, &ctx()));
    let chop_time = start.elapsed();

    let ci = SearchBudget { max_samples: CI_SEARCH_SAMPLES, ..SearchBudget::default() };
    let start = Instant::now();
    let false_certs: Vec<String> = Family::theorems()
        .filter(|&f| {
            parallel::search_violation(f, CI_SEARCH_DIM, &ParamRanges::default(), &ci, &ctx()).unwrap().is_some()
        })
        .map(|f| f.to_string())
        .collect();
    let theorem_time = start.elapsed();
    let theorem_count = Family::theorems().count();

    let relaxed = CheckContext { policy: HypothesisPolicy::Relax, ..ctx() };
    let cubic = ParamRanges { p: Some((3.0, 3.0)), ..ParamRanges::default() };
    let n2 = parallel::search_violation(Family::PowerCd, 2, &cubic, &budget, &relaxed).unwrap();
    let n3 = parallel::search_violation(Family::PowerCd, 3, &cubic, &budget, &relaxed).unwrap();
    let n3_ok = n3.as_ref().is_some_and(|c| revalidate(c, &relaxed).is_some());

    vec![
        Line {
            id: "7",
            pass: found.is_some() && revalidated.is_some() && false_certs.is_empty(),
            title: "explorer",
            detail: format!(
                "CH_OP1 n=3 certificate {} (re-validated {}), {:.1?}; theorem families with {} samples at n={}: {} of {} produced certificates{}, {:.1?}",
                found.map_or("none".to_string(), |(r, v)| format!("at restart {r}, violation {v:.4}")),
                revalidated.is_some(),
                chop_time,
                CI_SEARCH_SAMPLES,
                CI_SEARCH_DIM,
                false_certs.len(),
                theorem_count,
                if false_certs.is_empty() { String::new() } else { format!(" ({})", false_certs.join(", ")) },
                theorem_time,
            ),
        },
        Line {
            id: "7/power-cd-n2",
            pass: n2.is_some(),
            title: "explorer POWER_CD p=3 certificate at n=2",
            detail: format!("{} within {} samples", if n2.is_some() { "found" } else { "none" }, budget.max_samples),
        },
        Line {
            id: "7/power-cd-n3",
            pass: n3_ok,
            title: "explorer POWER_CD p=3 certificate at n=3",
            detail: n3.map_or("none".to_string(), |c| format!("restart {}, violation {:.4}, re-validated {n3_ok}", c.restart, c.violation_eig)),
        },
    ]
}

fn criterion_8() -> Line {
    let cube = certify(&ScalarFn::power(3.0), OperatorProperty::Convex, 2, 1000, 0).unwrap();
    let cube_ok = cube.verdict == CertVerdict::Violated && cube.witness.as_ref().is_some_and(|w| w.a.dim() == 2);
    let root = certify(&ScalarFn::power(0.5), OperatorProperty::Monotone, 3, 1000, 0).unwrap();
    let lf = lfmps_crosscheck(&ScalarFn::power(0.5), 3, 1000, 0).unwrap();
    Line {
        id: "8",
        pass: cube_ok && root.passed() && lf.all_pass(),
        title: "convexity certifier",
        detail: format!(
            "t³ convexity {} with dim-2 witness {cube_ok}; √t monotone {}; √t equivalent properties {:?}",
            cube.verdict.name(),
            root.verdict.name(),
            lf.verdicts().map(|v| v.name())
        ),
    }
}

fn main() {
    let start = Instant::now();
    let mut lines = vec![criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(), criterion_6()];
    lines.extend(criterion_7());
    lines.push(criterion_8());

    let mut unexpected = 0;
    for l in &lines {
        let known = UNATTAINABLE.contains(&l.id);
        println!(
            "{} criterion {} ({}): {}{}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.title,
            l.detail,
            if !l.pass && known { " [known unattainable]" } else { "" }
        );
        if !l.pass && !known {
            unexpected += 1;
        }
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("acceptance: {passed}/{} passed, {unexpected} unexpected failures, {:.1?}", lines.len(), start.elapsed());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
