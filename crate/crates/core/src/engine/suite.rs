use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::gallery::{generate_instance, ParamRanges};
use super::hypothesis::HypothesisPolicy;
use super::{check, CheckContext, Family, Instance, IsometryMode, Outcome};
use crate::linalg::ToleranceConfig;
use crate::random::mix_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub families: Vec<Family>,
    /// Trial `k` uses `dims[k % dims.len()]`.
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: ToleranceConfig,
    pub mode: IsometryMode,
    pub policy: HypothesisPolicy,
    pub ranges: ParamRanges,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            families: Family::theorems().collect(),
            dims: (2..=8).collect(),
            trials: 1000,
            seed: 0,
            tol: ToleranceConfig::default(),
            mode: IsometryMode::default(),
            policy: HypothesisPolicy::default(),
            ranges: ParamRanges::default(),
        }
    }
}

impl SuiteConfig {
    pub fn context(&self) -> CheckContext {
        CheckContext { tol: self.tol, mode: self.mode, policy: self.policy }
    }

    /// Seed of trial `index` for `family`: `mix_seed(seed, family id, index)`.
    pub fn trial_seed(&self, family: Family, index: usize) -> u64 {
        mix_seed(self.seed, family.id(), index as u64)
    }

    pub fn trial_dim(&self, index: usize) -> usize {
        if self.dims.is_empty() {
            2
        } else {
            self.dims[index % self.dims.len()]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialStatus {
    Pass,
    /// A theorem family failed with every hypothesis satisfied.
    Fail,
    /// A refuted family failed, or a hypothesis was relaxed.
    Finding,
    Skip,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub family: Family,
    pub index: usize,
    pub seed: u64,
    pub dim: usize,
    pub status: TrialStatus,
    pub gap: Option<f64>,
    pub relative_gap: Option<f64>,
    /// Skip reason or error message.
    pub detail: Option<String>,
    pub witness: Option<Instance>,
}

pub fn run_trial(config: &SuiteConfig, family: Family, index: usize) -> TrialRecord {
    let seed = config.trial_seed(family, index);
    let dim = config.trial_dim(index);
    let mut rec = TrialRecord {
        family,
        index,
        seed,
        dim,
        status: TrialStatus::Error,
        gap: None,
        relative_gap: None,
        detail: None,
        witness: None,
    };
    let ctx = config.context();
    let outcome = generate_instance(family, dim, seed, &config.ranges).and_then(|inst| check(family, &inst, &ctx));
    match outcome {
        Err(e) => rec.detail = Some(e.to_string()),
        Ok(Outcome::Skipped { reason, .. }) => {
            rec.status = TrialStatus::Skip;
            rec.detail = Some(reason);
        }
        Ok(Outcome::Checked(r)) => {
            rec.gap = Some(r.verdict.gap_min_eig);
            rec.relative_gap = Some(r.relative_gap(&config.tol));
            rec.status = if r.verdict.holds {
                TrialStatus::Pass
            } else if !family.is_theorem() || r.notes.iter().any(|n| n.starts_with("hypothesis relaxed")) {
                TrialStatus::Finding
            } else {
                TrialStatus::Fail
            };
            rec.witness = r.witness;
        }
    }
    rec
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub family: Family,
    pub trials: usize,
    pub passes: usize,
    pub skips: usize,
    pub failures: usize,
    pub findings: usize,
    pub errors: usize,
    /// Smallest `λ_min(rhs − lhs)` over checked trials.
    pub worst_gap: Option<f64>,
    pub worst_relative_gap: Option<f64>,
    /// Instance of the first failure or finding, by trial index.
    pub example_witness: Option<Instance>,
    pub example_seed: Option<u64>,
    /// First skip reason or error message, for diagnostics.
    pub first_detail: Option<String>,
}

/// Aggregates records (in any order) into the per-family summary.
pub fn summarize(family: Family, records: &[TrialRecord]) -> FamilyReport {
    let mut sorted: Vec<&TrialRecord> = records.iter().filter(|r| r.family == family).collect();
    sorted.sort_by_key(|r| r.index);
    let mut rep = FamilyReport {
        family,
        trials: sorted.len(),
        passes: 0,
        skips: 0,
        failures: 0,
        findings: 0,
        errors: 0,
        worst_gap: None,
        worst_relative_gap: None,
        example_witness: None,
        example_seed: None,
        first_detail: None,
    };
    for r in sorted {
        match r.status {
            TrialStatus::Pass => rep.passes += 1,
            TrialStatus::Fail => rep.failures += 1,
            TrialStatus::Finding => rep.findings += 1,
            TrialStatus::Skip => rep.skips += 1,
            TrialStatus::Error => rep.errors += 1,
        }
        if let Some(g) = r.gap {
            rep.worst_gap = Some(rep.worst_gap.map_or(g, |w: f64| w.min(g)));
        }
        if let Some(g) = r.relative_gap {
            rep.worst_relative_gap = Some(rep.worst_relative_gap.map_or(g, |w: f64| w.min(g)));
        }
        if rep.example_witness.is_none() && matches!(r.status, TrialStatus::Fail | TrialStatus::Finding) {
            rep.example_witness = r.witness.clone();
            rep.example_seed = Some(r.seed);
        }
        if rep.first_detail.is_none() {
            rep.first_detail = r.detail.clone();
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub families: Vec<FamilyReport>,
}

impl SuiteReport {
    pub fn from_records(config: &SuiteConfig, records: &[TrialRecord]) -> Self {
        Self { families: config.families.iter().map(|&f| summarize(f, records)).collect() }
    }

    /// Failures on theorem families (relaxed hypotheses and refuted families excluded).
    pub fn theorem_failures(&self) -> usize {
        self.families.iter().filter(|f| f.family.is_theorem()).map(|f| f.failures).sum()
    }

    pub fn total_errors(&self) -> usize {
        self.families.iter().map(|f| f.errors).sum()
    }
}

/// Runs every trial serially.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let mut records = Vec::with_capacity(config.families.len() * config.trials);
    for &fam in &config.families {
        for k in 0..config.trials {
            records.push(run_trial(config, fam, k));
        }
    }
    SuiteReport::from_records(config, &records)
}
