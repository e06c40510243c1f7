//! Counterexample search and sharpness scans.
//!
//! The search draws gallery instances (optionally with exponents outside the
//! admissible windows) and hill-climbs the entries of `A` and `B` by
//! coordinate-wise Hermitian perturbations, maximizing `λ_max(lhs − rhs)`.

use alloc::vec::Vec;

use crate::engine::{check, generate_instance, CheckContext, Family, Instance, Outcome, ParamRanges};
use crate::linalg::{eig_hermitian, HermitianMatrix, ToleranceConfig};
use crate::random::{gaussian, mix_seed, random_index, rng_from_seed, uniform, Rng64};
use crate::{Result, C64};

/// Certificates must reproduce their violation to this absolute accuracy.
pub const REVALIDATION_TOL: f64 = 1e-9;
/// Iterates are kept positive by clipping eigenvalues below this fraction of the spectral norm.
pub const CLIP_FRACTION: f64 = 1e-6;
/// Consecutive rejected steps before a restart.
pub const MAX_FAILURES: usize = 10;
const STEP_DECAY: f64 = 0.5;
const HILL_CLIMB_STREAM: u64 = 0xC11B;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    /// Upper bound on the number of instance evaluations.
    pub max_samples: usize,
    pub hill_climb_steps: usize,
    /// Initial perturbation size relative to `‖A‖`.
    pub step_scale: f64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_samples: 100_000, hill_climb_steps: 50, step_scale: 0.1, seed: 0 }
    }
}

impl SearchBudget {
    pub fn restarts(&self) -> usize {
        self.max_samples / (1 + self.hill_climb_steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub family: Family,
    pub instance: Instance,
    /// `λ_max(lhs − rhs)` for the stored instance.
    pub violation_eig: f64,
    /// Order tolerance the violation exceeds.
    pub tolerance: f64,
    /// Restart that produced the certificate.
    pub restart: usize,
}

/// `λ_max(lhs − rhs)` and the tolerance it is compared with; `None` if skipped or not evaluable.
pub fn violation(family: Family, inst: &Instance, ctx: &CheckContext) -> Option<(f64, f64)> {
    match check(family, inst, ctx) {
        Ok(Outcome::Checked(r)) => Some((-r.verdict.gap_min_eig, r.verdict.tolerance_used)),
        _ => None,
    }
}

fn score(v: Option<(f64, f64)>) -> f64 {
    v.map_or(f64::NEG_INFINITY, |(x, _)| x)
}

fn exceeds(v: Option<(f64, f64)>) -> bool {
    matches!(v, Some((x, tol)) if x > tol)
}

fn project_positive(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    let s = eig_hermitian(x)?;
    let norm = s.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = CLIP_FRACTION * norm.max(f64::MIN_POSITIVE);
    let clipped: Vec<f64> = s.eigenvalues.iter().map(|&v| v.max(floor)).collect();
    Ok(s.recompose(&clipped))
}

fn perturb(rng: &mut Rng64, x: &HermitianMatrix, step: f64) -> Result<HermitianMatrix> {
    let n = x.dim();
    let i = random_index(rng, 0, n - 1);
    let j = random_index(rng, 0, n - 1);
    let delta = step * gaussian(rng);
    let mut m = x.as_matrix().clone();
    if i == j {
        m[(i, i)] += C64::new(delta, 0.0);
    } else {
        let u = if uniform(rng, 0.0, 1.0) < 0.5 { C64::new(delta, 0.0) } else { C64::new(0.0, delta) };
        m[(i, j)] += u;
        m[(j, i)] += u.conj();
    }
    project_positive(&HermitianMatrix::from_hermitian_part(&m))
}

fn certificate(family: Family, instance: Instance, v: (f64, f64), restart: usize) -> Certificate {
    Certificate { family, instance, violation_eig: v.0, tolerance: v.1, restart }
}

/// One restart: a gallery draw followed by hill climbing. Deterministic in `(budget.seed, family, index)`.
pub fn search_restart(
    family: Family,
    dim: usize,
    ranges: &ParamRanges,
    budget: &SearchBudget,
    ctx: &CheckContext,
    index: usize,
) -> Result<Option<Certificate>> {
    let seed = mix_seed(budget.seed, family.id(), index as u64);
    let mut inst = generate_instance(family, dim, seed, ranges)?;
    // Perturbed iterates leave any declared spectral bounds.
    inst.bounds = None;
    let mut best = violation(family, &inst, ctx);
    if exceeds(best) {
        return Ok(Some(certificate(family, inst, best.expect("checked"), index)));
    }
    let mut rng = rng_from_seed(mix_seed(seed, HILL_CLIMB_STREAM, 0));
    let norm = eig_hermitian(&inst.a)?.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut step = budget.step_scale * norm.max(1e-3);
    let mut failures = 0;
    for _ in 0..budget.hill_climb_steps {
        let mut cand = inst.clone();
        let on_b = cand.b.is_some() && uniform(&mut rng, 0.0, 1.0) < 0.5;
        if on_b {
            let b = cand.b.as_ref().expect("checked");
            cand.b = Some(perturb(&mut rng, b, step)?);
        } else {
            cand.a = perturb(&mut rng, &cand.a, step)?;
        }
        let v = violation(family, &cand, ctx);
        if exceeds(v) {
            return Ok(Some(certificate(family, cand, v.expect("checked"), index)));
        }
        if score(v) > score(best) {
            inst = cand;
            best = v;
            failures = 0;
        } else {
            failures += 1;
            step *= STEP_DECAY;
            if failures >= MAX_FAILURES {
                break;
            }
        }
    }
    Ok(None)
}

/// Runs restarts in order and returns the first certificate found.
pub fn search_violation(
    family: Family,
    dim: usize,
    ranges: &ParamRanges,
    budget: &SearchBudget,
    ctx: &CheckContext,
) -> Result<Option<Certificate>> {
    for index in 0..budget.restarts() {
        if let Some(c) = search_restart(family, dim, ranges, budget, ctx, index)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Re-evaluates a certificate; `Some(v)` when the violation is reproduced
/// within [`REVALIDATION_TOL`] and still exceeds the tolerance.
pub fn revalidate(cert: &Certificate, ctx: &CheckContext) -> Option<f64> {
    let v = violation(cert.family, &cert.instance, ctx)?;
    ((v.0 - cert.violation_eig).abs() <= REVALIDATION_TOL && v.0 > v.1).then_some(v.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessPoint {
    pub ranges: ParamRanges,
    pub checked: usize,
    pub skipped: usize,
    /// Minimum of `gap / scale` over the random trials.
    pub min_relative_gap: Option<f64>,
    /// Relative gap at the scalar probe `A = 2I` (and `B = I` when the family has `B`).
    pub scalar_probe_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessReport {
    pub family: Family,
    pub dim: usize,
    pub points: Vec<SharpnessPoint>,
}

fn relative(family: Family, inst: &Instance, ctx: &CheckContext) -> Option<f64> {
    match check(family, inst, ctx) {
        Ok(Outcome::Checked(r)) => Some(r.relative_gap(&ctx.tol)),
        _ => None,
    }
}

/// Scalar instance used for equality probes.
pub fn scalar_probe(family: Family, dim: usize, seed: u64, ranges: &ParamRanges) -> Result<Instance> {
    let mut inst = generate_instance(family, dim, seed, ranges)?;
    inst.a = HermitianMatrix::identity(dim).scale(2.0);
    if inst.b.is_some() {
        inst.b = Some(HermitianMatrix::identity(dim));
    }
    inst.bounds = None;
    inst.margin = None;
    Ok(inst)
}

/// For each grid point: the smallest relative gap over `trials` random
/// instances and the relative gap at the scalar probe.
pub fn sharpness_scan(
    family: Family,
    dim: usize,
    grid: &[ParamRanges],
    trials: usize,
    seed: u64,
    tol: ToleranceConfig,
) -> Result<SharpnessReport> {
    let ctx = CheckContext { tol, ..CheckContext::default() };
    let mut points = Vec::with_capacity(grid.len());
    for (g, ranges) in grid.iter().enumerate() {
        let mut point =
            SharpnessPoint { ranges: *ranges, checked: 0, skipped: 0, min_relative_gap: None, scalar_probe_gap: None };
        for k in 0..trials {
            let inst =
                generate_instance(family, dim, mix_seed(seed, family.id() ^ ((g as u64) << 8), k as u64), ranges)?;
            match relative(family, &inst, &ctx) {
                Some(r) => {
                    point.checked += 1;
                    point.min_relative_gap = Some(point.min_relative_gap.map_or(r, |m: f64| m.min(r)));
                }
                None => point.skipped += 1,
            }
        }
        let probe = scalar_probe(family, dim, mix_seed(seed, family.id(), u64::MAX), ranges)?;
        point.scalar_probe_gap = relative(family, &probe, &ctx);
        points.push(point);
    }
    Ok(SharpnessReport { family, dim, points })
}
