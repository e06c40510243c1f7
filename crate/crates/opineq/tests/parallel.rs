use opineq::parallel;
use opineq_core::engine::{run_suite, CheckContext, Family, HypothesisPolicy, ParamRanges, SuiteConfig};
use opineq_core::explorer::{search_violation, SearchBudget};
use proptest::prelude::*;

#[test]
fn parallel_suite_matches_serial() {
    let cfg = SuiteConfig { trials: 30, seed: 4, ..SuiteConfig::default() };
    assert_eq!(parallel::run_suite(&cfg), run_suite(&cfg));
}

#[test]
fn parallel_suite_matches_serial_with_findings() {
    let cfg = SuiteConfig {
        families: vec![Family::Asy, Family::ChOp1, Family::LemmaAsa],
        trials: 80,
        dims: vec![2, 3],
        policy: HypothesisPolicy::Relax,
        ranges: ParamRanges { gamma: Some((1.5, 1.5)), p: Some((0.0, 0.5)), ..ParamRanges::default() },
        ..SuiteConfig::default()
    };
    let par = parallel::run_suite(&cfg);
    assert!(par.families.iter().any(|f| f.findings > 0));
    assert_eq!(par, run_suite(&cfg));
}

#[test]
fn parallel_search_matches_serial() {
    let ctx = CheckContext::default();
    for (family, seed) in [(Family::ChOp1, 0), (Family::ChOp2, 17), (Family::Kadison, 3)] {
        let budget = SearchBudget { max_samples: 3000, seed, ..SearchBudget::default() };
        let serial = search_violation(family, 3, &ParamRanges::default(), &budget, &ctx).unwrap();
        let par = parallel::search_violation(family, 3, &ParamRanges::default(), &budget, &ctx).unwrap();
        assert_eq!(par, serial, "{family:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn parallel_suite_is_serial_for_any_seed(seed in any::<u64>(), trials in 1usize..12) {
        let cfg = SuiteConfig {
            families: vec![Family::Kadison, Family::Po1, Family::OmegaGap, Family::ChOp2],
            trials,
            seed,
            ..SuiteConfig::default()
        };
        prop_assert_eq!(parallel::run_suite(&cfg), run_suite(&cfg));
    }
}
