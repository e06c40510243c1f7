use opineq_core::engine::hypothesis::HypothesisPolicy;
use opineq_core::engine::{
    generate_instance, run_suite, run_trial, sample_instances, summarize, Family, ParamRanges, SuiteConfig,
    SuiteReport, TrialStatus,
};
use opineq_core::scalar::{certify, parse_fn};

#[test]
fn empty_family_list_gives_empty_report() {
    let cfg = SuiteConfig { families: vec![], ..SuiteConfig::default() };
    assert!(run_suite(&cfg).families.is_empty());
}

#[test]
fn theorem_families_pass_small_suite() {
    let cfg = SuiteConfig { trials: 70, ..SuiteConfig::default() };
    let rep = run_suite(&cfg);
    assert_eq!(rep.theorem_failures(), 0);
    assert_eq!(rep.total_errors(), 0);
    for f in &rep.families {
        assert_eq!(f.skips, 0, "{:?}: {:?}", f.family, f.first_detail);
        assert_eq!(f.passes, 70, "{:?}", f.family);
    }
}

#[test]
fn suite_is_deterministic_and_order_independent() {
    let cfg = SuiteConfig {
        families: vec![Family::Asy, Family::Po1, Family::RevChoi],
        trials: 20,
        seed: 9,
        ..SuiteConfig::default()
    };
    assert_eq!(run_suite(&cfg), run_suite(&cfg));
    let mut records: Vec<_> = cfg.families.iter().flat_map(|&f| (0..cfg.trials).map(move |k| (f, k))).collect();
    records.reverse();
    let shuffled: Vec<_> = records.into_iter().map(|(f, k)| run_trial(&cfg, f, k)).collect();
    assert_eq!(SuiteReport::from_records(&cfg, &shuffled), run_suite(&cfg));
}

#[test]
fn relaxed_window_records_findings() {
    let cfg = SuiteConfig {
        families: vec![Family::Asy],
        trials: 60,
        policy: HypothesisPolicy::Relax,
        ranges: ParamRanges { gamma: Some((1.5, 1.5)), ..ParamRanges::default() },
        ..SuiteConfig::default()
    };
    let rep = run_suite(&cfg);
    let f = &rep.families[0];
    assert!(f.findings > 0);
    assert_eq!(f.failures, 0);
    assert!(f.example_witness.is_some());
}

#[test]
fn enforced_window_skips_out_of_range_exponents() {
    let cfg = SuiteConfig {
        families: vec![Family::Asy],
        trials: 10,
        ranges: ParamRanges { gamma: Some((1.5, 1.5)), ..ParamRanges::default() },
        ..SuiteConfig::default()
    };
    let f = &run_suite(&cfg).families[0];
    assert_eq!(f.skips, 10);
    assert_eq!(f.passes, 0);
}

#[test]
fn refuted_families_are_findings() {
    let cfg = SuiteConfig { families: vec![Family::ChOp1], trials: 50, dims: vec![3], ..SuiteConfig::default() };
    let records: Vec<_> = (0..cfg.trials).map(|k| run_trial(&cfg, Family::ChOp1, k)).collect();
    assert!(records.iter().any(|r| r.status == TrialStatus::Finding));
    assert!(records.iter().all(|r| r.status != TrialStatus::Fail));
    assert_eq!(summarize(Family::ChOp1, &records).failures, 0);
}

#[test]
fn gallery_claims_hold_under_sampling() {
    let mut checked = 0;
    for (family, inst) in sample_instances(3, 5).unwrap() {
        for claim in &inst.claims {
            let f = parse_fn(&claim.function).unwrap();
            let cert = certify(&f, claim.property, 3, 200, 1).unwrap();
            assert!(cert.passed(), "{family:?}: {} claimed {:?}", claim.function, claim.property);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn instances_are_reproducible() {
    for &family in Family::all() {
        let a = generate_instance(family, 4, 123, &ParamRanges::default()).unwrap();
        let b = generate_instance(family, 4, 123, &ParamRanges::default()).unwrap();
        assert_eq!(a, b, "{family:?}");
    }
}
