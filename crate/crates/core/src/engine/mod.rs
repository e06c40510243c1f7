//! One checker per inequality family.
//!
//! Every check assembles two Hermitian matrices `lhs ≤ rhs` (for `≥`
//! statements the sides are swapped so that `lhs` is always the side claimed
//! smaller) and compares them with [`loewner_leq`] or, where the statement
//! only asserts existence of a unitary, with [`spectral_dominance`].
//!
//! Hypotheses are checked explicitly. A failed hypothesis yields
//! [`Outcome::Skipped`], never a pass.

/// Unwraps the hypothesis gate or returns the skipped outcome.
macro_rules! gate {
    ($h:expr) => {
        match $h.gate() {
            Ok(notes) => notes,
            Err(skip) => return Ok(skip),
        }
    };
}

/// Unwraps a structural precondition (`Result<Result<T, String>>`) or skips.
macro_rules! require {
    ($family:expr, $e:expr) => {
        match $e? {
            Ok(v) => v,
            Err(reason) => return Ok($crate::engine::skipped($family, reason)),
        }
    };
}

mod counterexample;
mod direct;
mod family;
pub mod gallery;
pub mod hypothesis;
mod isometry;
mod reverse;
mod suite;

use alloc::string::String;
use alloc::vec::Vec;

pub use counterexample::{
    reproduce_counterexamples, CounterexampleReport, COUNTEREXAMPLE_A, COUNTEREXAMPLE_B, PUBLISHED_ABS_PRODUCT,
    PUBLISHED_PHI_ABA, PUBLISHED_SANDWICH, PUBLISHED_SQRT_PRODUCT,
};
pub use direct::check_moment_matrix;
pub use family::{Family, FamilyKind};
pub use gallery::{generate_instance, sample_instances, ParamRanges};
pub use hypothesis::{Claim, HypothesisPolicy};
pub use suite::{run_suite, run_trial, summarize, FamilyReport, SuiteConfig, SuiteReport, TrialRecord, TrialStatus};

use crate::constants::{ExponentParams, SpectralBounds};
use crate::linalg::{
    abs_op, eig_hermitian, loewner_leq, power, spectral_dominance, HermitianMatrix, OrderVerdict, PolarParts,
    ToleranceConfig,
};
use crate::maps::MapSpec;
use crate::scalar::ScalarFn;
use crate::{Error, Result};

/// How isometry families are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IsometryMode {
    /// Build the partial isometry from the proof and verify every link.
    #[default]
    Constructive,
    /// Compare sorted eigenvalues of the two sides (invertible instances).
    Dominance,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CheckContext {
    pub tol: ToleranceConfig,
    pub mode: IsometryMode,
    pub policy: HypothesisPolicy,
}

/// A concrete hypothesis tuple for one family.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub phi: MapSpec,
    pub a: HermitianMatrix,
    pub b: Option<HermitianMatrix>,
    pub f: Option<ScalarFn>,
    pub g: Option<ScalarFn>,
    pub params: ExponentParams,
    /// Declared `m ≤ A ≤ M`; when absent the extreme eigenvalues of `A` are used.
    pub bounds: Option<SpectralBounds>,
    /// Margin `m` in `A − B ≥ m` for the Furuta refinement lemma; defaults to `λ_min(A − B)`.
    pub margin: Option<f64>,
    /// Operator properties asserted by whoever built the instance. Missing
    /// ones are tested by sampling.
    pub claims: Vec<Claim>,
    pub seed: u64,
}

impl Instance {
    pub fn new(phi: MapSpec, a: HermitianMatrix) -> Self {
        Self {
            phi,
            a,
            b: None,
            f: None,
            g: None,
            params: ExponentParams::default(),
            bounds: None,
            margin: None,
            claims: Vec::new(),
            seed: 0,
        }
    }

    pub fn with_b(mut self, b: HermitianMatrix) -> Self {
        self.b = Some(b);
        self
    }

    pub fn with_f(mut self, f: ScalarFn) -> Self {
        self.f = Some(f);
        self
    }

    pub fn with_g(mut self, g: ScalarFn) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_params(mut self, params: ExponentParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_bounds(mut self, bounds: SpectralBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub(crate) fn b(&self) -> Result<&HermitianMatrix> {
        self.b.as_ref().ok_or_else(|| Error::InvalidParameter(String::from("instance needs B")))
    }

    pub(crate) fn f(&self) -> Result<&ScalarFn> {
        self.f.as_ref().ok_or_else(|| Error::InvalidParameter(String::from("instance needs f")))
    }

    pub(crate) fn g_or_one(&self) -> ScalarFn {
        self.g.clone().unwrap_or_else(|| ScalarFn::constant(1.0))
    }

    pub(crate) fn phi(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.phi.apply(x)
    }
}

/// One link of a proof chain: `lower ≤ upper` or an identity residual.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink {
    pub label: &'static str,
    pub verdict: OrderVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub family: Family,
    /// Side claimed smaller.
    pub lhs: HermitianMatrix,
    /// Side claimed larger, including constants and isometry conjugation.
    pub rhs: HermitianMatrix,
    pub constant: Option<f64>,
    pub isometry: Option<PolarParts>,
    pub chain: Option<Vec<ChainLink>>,
    pub verdict: OrderVerdict,
    pub notes: Vec<String>,
    /// Copy of the instance when the verdict fails.
    pub witness: Option<Instance>,
}

impl CheckResult {
    pub fn chain_gaps(&self) -> Option<Vec<f64>> {
        self.chain.as_ref().map(|c| c.iter().map(|l| l.verdict.gap_min_eig).collect())
    }

    /// `gap / (‖lhs‖ + ‖rhs‖)`-style relative margin, using the tolerance scale.
    pub fn relative_gap(&self, tol: &ToleranceConfig) -> f64 {
        let scale = ((self.verdict.tolerance_used - tol.atol) / tol.rtol.max(f64::MIN_POSITIVE)).max(1.0);
        self.verdict.gap_min_eig / scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Checked(CheckResult),
    Skipped { family: Family, reason: String },
}

impl Outcome {
    pub fn result(&self) -> Option<&CheckResult> {
        match self {
            Outcome::Checked(r) => Some(r),
            Outcome::Skipped { .. } => None,
        }
    }

    pub fn holds(&self) -> Option<bool> {
        self.result().map(|r| r.verdict.holds)
    }
}

/// Runs the checker for `family`.
pub fn check(family: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let out = match family.kind() {
        FamilyKind::Direct | FamilyKind::Refuted => direct::check(family, inst, ctx)?,
        FamilyKind::Isometry => isometry::check(family, inst, ctx)?,
        FamilyKind::Reverse => reverse::check(family, inst, ctx)?,
    };
    Ok(match out {
        Outcome::Checked(mut r) => {
            if !r.verdict.holds {
                r.witness = Some(inst.clone());
            }
            Outcome::Checked(r)
        }
        skipped => skipped,
    })
}

fn expect_kind(family: Family, kinds: &[FamilyKind]) -> Result<()> {
    if kinds.contains(&family.kind()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!("{} is not a {:?} family", family.name(), kinds[0])))
    }
}

pub fn check_inequality(family: Family, inst: &Instance, tol: ToleranceConfig) -> Result<Outcome> {
    expect_kind(family, &[FamilyKind::Direct, FamilyKind::Refuted])?;
    check(family, inst, &CheckContext { tol, ..CheckContext::default() })
}

pub fn check_with_isometry(
    family: Family,
    inst: &Instance,
    mode: IsometryMode,
    tol: ToleranceConfig,
) -> Result<Outcome> {
    expect_kind(family, &[FamilyKind::Isometry])?;
    check(family, inst, &CheckContext { tol, mode, ..CheckContext::default() })
}

pub fn check_reverse(family: Family, inst: &Instance, tol: ToleranceConfig) -> Result<Outcome> {
    expect_kind(family, &[FamilyKind::Reverse])?;
    check(family, inst, &CheckContext { tol, ..CheckContext::default() })
}

// Shared helpers.

pub(crate) fn skipped(family: Family, reason: impl Into<String>) -> Outcome {
    Outcome::Skipped { family, reason: reason.into() }
}

/// `|XY|` for Hermitian `X`, `Y`.
pub(crate) fn abs_product(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<HermitianMatrix> {
    abs_op(&x.as_matrix().try_mul(y.as_matrix())?)
}

pub(crate) fn abs_product3(x: &HermitianMatrix, y: &HermitianMatrix, z: &HermitianMatrix) -> Result<HermitianMatrix> {
    abs_op(&x.as_matrix().try_mul(y.as_matrix())?.try_mul(z.as_matrix())?)
}

pub(crate) fn pw(a: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    power(a, p)
}

/// `λ_min(A) > 1e-12·‖A‖` or `Err` reason.
pub(crate) fn positive_definite(a: &HermitianMatrix) -> Result<core::result::Result<(), String>> {
    let s = eig_hermitian(a)?;
    if s.min() > 1e-12 * s.max().abs().max(f64::MIN_POSITIVE) && s.min() > 0.0 {
        Ok(Ok(()))
    } else {
        Ok(Err(alloc::format!("operand is not positive definite (λ_min = {:.3e})", s.min())))
    }
}

pub(crate) fn build(
    family: Family,
    lhs: HermitianMatrix,
    rhs: HermitianMatrix,
    ctx: &CheckContext,
) -> Result<CheckResult> {
    let verdict = loewner_leq(&lhs, &rhs, ctx.tol)?;
    Ok(CheckResult {
        family,
        lhs,
        rhs,
        constant: None,
        isometry: None,
        chain: None,
        verdict,
        notes: Vec::new(),
        witness: None,
    })
}

pub(crate) fn dominance(
    family: Family,
    lhs: HermitianMatrix,
    rhs: HermitianMatrix,
    ctx: &CheckContext,
) -> Result<CheckResult> {
    let verdict = spectral_dominance(&lhs, &rhs, ctx.tol)?;
    let mut r = build(family, lhs, rhs, ctx)?;
    r.verdict = verdict;
    Ok(r)
}

pub(crate) fn link(
    label: &'static str,
    lower: &HermitianMatrix,
    upper: &HermitianMatrix,
    ctx: &CheckContext,
) -> Result<ChainLink> {
    Ok(ChainLink { label, verdict: loewner_leq(lower, upper, ctx.tol)? })
}

/// Identity link `x = y`: the gap is `−‖x − y‖_F`.
pub(crate) fn identity_link(
    label: &'static str,
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    ctx: &CheckContext,
) -> Result<ChainLink> {
    let residual = x.as_matrix().distance(y.as_matrix());
    let scale = x.as_matrix().frobenius_norm().max(y.as_matrix().frobenius_norm());
    Ok(ChainLink { label, verdict: OrderVerdict::from_gap(-residual, ctx.tol.at_scale(scale)) })
}

/// `f(A)` when every eigenvalue of `A` is in the domain of `f` and `f > 0`
/// there, otherwise the reason it is not.
pub(crate) fn positive_values(
    f: &ScalarFn,
    a: &HermitianMatrix,
) -> Result<core::result::Result<HermitianMatrix, String>> {
    let s = eig_hermitian(a)?;
    let domain = f.domain();
    let mut values = Vec::with_capacity(s.eigenvalues.len());
    for &x in &s.eigenvalues {
        if !domain.contains(x) {
            return Ok(Err(alloc::format!("eigenvalue {x:.6e} outside the domain {domain} of {f}")));
        }
        let v = f.eval_unchecked(x);
        if !(v > 0.0) || !v.is_finite() {
            return Ok(Err(alloc::format!("{f} is not positive at eigenvalue {x:.6e}")));
        }
        values.push(v);
    }
    Ok(Ok(s.recompose(&values)))
}

/// Declared bounds when they contain the spectrum of `A`, otherwise the
/// extreme eigenvalues. Scalar spectra are widened by a relative `1e-6`,
/// which keeps every bound valid.
pub(crate) fn spectral_bounds(inst: &Instance) -> Result<core::result::Result<SpectralBounds, String>> {
    const CONTAIN_SLACK: f64 = 1e-12;
    if let Some(b) = inst.bounds {
        return Ok(if b.contains(&inst.a, CONTAIN_SLACK)? {
            Ok(b)
        } else {
            Err(alloc::format!("A is not within the declared bounds [{}, {}]", b.m, b.big_m))
        });
    }
    let s = eig_hermitian(&inst.a)?;
    let (lo, hi) = (s.min(), s.max());
    if !(lo > crate::linalg::SINGULAR_TOL) {
        return Ok(Err(alloc::format!("A is not positive definite (λ_min = {lo:.3e})")));
    }
    let hi = hi.max(lo * (1.0 + 1e-6));
    Ok(Ok(SpectralBounds::new(lo, hi)?))
}
