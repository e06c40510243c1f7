//! Rayon versions of the suite runner and the violation search. Both give
//! results identical to the serial core functions.

use opineq_core::engine::{run_trial, CheckContext, Family, ParamRanges, SuiteConfig, SuiteReport};
use opineq_core::explorer::{search_restart, Certificate, SearchBudget};
use rayon::prelude::*;

/// Fans out every `(family, trial)` pair; trial seeds depend only on the pair.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let tasks: Vec<(Family, usize)> =
        config.families.iter().flat_map(|&f| (0..config.trials).map(move |k| (f, k))).collect();
    let records: Vec<_> = tasks.par_iter().map(|&(f, k)| run_trial(config, f, k)).collect();
    SuiteReport::from_records(config, &records)
}

/// Restarts run concurrently; the lowest restart index that yields a
/// certificate (or an error) wins, as in the serial search.
pub fn search_violation(
    family: Family,
    dim: usize,
    ranges: &ParamRanges,
    budget: &SearchBudget,
    ctx: &CheckContext,
) -> opineq_core::Result<Option<Certificate>> {
    (0..budget.restarts())
        .into_par_iter()
        .map(|i| search_restart(family, dim, ranges, budget, ctx, i))
        .find_first(|r| !matches!(r, Ok(None)))
        .unwrap_or(Ok(None))
}
