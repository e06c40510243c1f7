//! Sampling-based operator convexity, concavity and monotonicity tests.
//!
//! A pass means no violation was found among the sampled pairs at the
//! tested dimension ("certified at scale"), never a proof.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use super::{apply, DeriveKind, ScalarFn};
use crate::linalg::{hermitian_norm, min_eig, HermitianMatrix, ToleranceConfig};
use crate::random::{hermitian_with_spectrum, log_uniform, mix_seed, rng_from_seed, Rng64};
use crate::Result;

/// Spectra are sampled inside the domain intersected with this window.
pub const SAMPLE_FLOOR: f64 = 1e-3;
pub const SAMPLE_CEIL: f64 = 1e3;
const EXTRA_LAMBDAS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorProperty {
    Convex,
    Concave,
    Monotone,
}

impl OperatorProperty {
    pub fn name(self) -> &'static str {
        match self {
            Self::Convex => "operator-convex",
            Self::Concave => "operator-concave",
            Self::Monotone => "operator-monotone",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "operator-convex" | "convex" => Some(Self::Convex),
            "operator-concave" | "concave" => Some(Self::Concave),
            "operator-monotone" | "monotone" => Some(Self::Monotone),
            _ => None,
        }
    }

    fn stream(self) -> u64 {
        match self {
            Self::Convex => 0xC0,
            Self::Concave => 0xCC,
            Self::Monotone => 0x30,
        }
    }
}

impl fmt::Display for OperatorProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertVerdict {
    CertifiedAtScale,
    Violated,
}

impl CertVerdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::CertifiedAtScale => "certified-at-scale",
            Self::Violated => "violated",
        }
    }
}

/// A violating pair. For convexity the tested point is `λA + (1−λ)B`;
/// for monotonicity `A ≤ B` and `lambda` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityCertificate {
    pub property: OperatorProperty,
    pub dim: usize,
    pub trials: usize,
    /// Largest relative violation `−λ_min(gap) / scale` seen; negative when none.
    pub max_violation: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub verdict: CertVerdict,
}

impl ConvexityCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == CertVerdict::CertifiedAtScale
    }
}

/// Tests `property` of `f` on `trials` random pairs of `dim × dim` matrices.
/// Trial `k` draws from its own seed, so a witness found within `T` trials
/// is found again with any larger budget.
pub fn certify(
    f: &ScalarFn,
    property: OperatorProperty,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<ConvexityCertificate> {
    let dim = dim.max(2);
    let tolerance = ToleranceConfig::default().rtol;
    let (lo, hi) = f.domain().sampling_window(SAMPLE_FLOOR, SAMPLE_CEIL);
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for k in 0..trials {
        let mut rng = rng_from_seed(mix_seed(seed, property.stream(), k as u64));
        let (violation, w) = match property {
            OperatorProperty::Convex | OperatorProperty::Concave => {
                convexity_trial(f, property, dim, lo, hi, &mut rng)?
            }
            OperatorProperty::Monotone => monotone_trial(f, dim, lo, hi, &mut rng)?,
        };
        if violation > worst {
            worst = violation;
            if violation > tolerance && witness.is_none() {
                witness = Some(w);
            }
        }
    }
    let verdict = if witness.is_some() { CertVerdict::Violated } else { CertVerdict::CertifiedAtScale };
    Ok(ConvexityCertificate { property, dim, trials, max_violation: worst, tolerance, witness, verdict })
}

fn spectrum(rng: &mut Rng64, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| if lo > 0.0 { log_uniform(rng, lo, hi) } else { lo + (hi - lo) * rng.random::<f64>() }).collect()
}

fn relative_gap(lower: &HermitianMatrix, upper: &HermitianMatrix) -> Result<f64> {
    let gap = min_eig(&upper.try_sub(lower)?)?;
    let scale = hermitian_norm(lower)?.max(hermitian_norm(upper)?).max(f64::MIN_POSITIVE);
    Ok(-gap / scale)
}

fn convexity_trial(
    f: &ScalarFn,
    property: OperatorProperty,
    dim: usize,
    lo: f64,
    hi: f64,
    rng: &mut Rng64,
) -> Result<(f64, Witness)> {
    let sa = spectrum(rng, dim, lo, hi);
    let a = hermitian_with_spectrum(rng, &sa);
    let sb = spectrum(rng, dim, lo, hi);
    let b = hermitian_with_spectrum(rng, &sb);
    let fa = apply(f, &a)?;
    let fb = apply(f, &b)?;
    let mut lambdas = [0.5; EXTRA_LAMBDAS + 1];
    for l in lambdas.iter_mut().skip(1) {
        *l = rng.random::<f64>();
    }
    let mut worst = (f64::NEG_INFINITY, 0.5);
    for &l in &lambdas {
        let c = a.scale(l).try_add(&b.scale(1.0 - l))?;
        let fc = apply(f, &c)?;
        let chord = fa.scale(l).try_add(&fb.scale(1.0 - l))?;
        let v = match property {
            OperatorProperty::Convex => relative_gap(&fc, &chord)?,
            _ => relative_gap(&chord, &fc)?,
        };
        if v > worst.0 {
            worst = (v, l);
        }
    }
    Ok((worst.0, Witness { a, b, lambda: Some(worst.1) }))
}

fn monotone_trial(f: &ScalarFn, dim: usize, lo: f64, hi: f64, rng: &mut Rng64) -> Result<(f64, Witness)> {
    let sa = spectrum(rng, dim, lo, hi);
    let a = hermitian_with_spectrum(rng, &sa);
    let mut sp = spectrum(rng, dim, lo, hi);
    if f.domain().upper.is_finite() {
        // keep A + P inside the interval
        let room = (hi - sa.iter().copied().fold(f64::NEG_INFINITY, f64::max)).max(0.0);
        let top = sp.iter().copied().fold(0.0, f64::max);
        let s = if top > 0.0 { (room / top).min(1.0) } else { 0.0 };
        sp.iter_mut().for_each(|x| *x *= s);
    }
    let p = hermitian_with_spectrum(rng, &sp);
    let b = a.try_add(&p)?;
    let v = relative_gap(&apply(f, &a)?, &apply(f, &b)?)?;
    Ok((v, Witness { a, b, lambda: None }))
}

/// Verdicts for the four properties that are equivalent for positive
/// functions on `(0, ∞)`: `f` concave, `f` monotone, `t/f` monotone,
/// `t·f` convex.
#[derive(Debug, Clone, PartialEq)]
pub struct LfmpsReport {
    pub f_concave: ConvexityCertificate,
    pub f_monotone: ConvexityCertificate,
    pub t_over_f_monotone: ConvexityCertificate,
    pub t_times_f_convex: ConvexityCertificate,
}

impl LfmpsReport {
    pub fn verdicts(&self) -> [CertVerdict; 4] {
        [self.f_concave.verdict, self.f_monotone.verdict, self.t_over_f_monotone.verdict, self.t_times_f_convex.verdict]
    }

    pub fn consistent(&self) -> bool {
        let v = self.verdicts();
        v.iter().all(|&x| x == v[0])
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts().iter().all(|&x| x == CertVerdict::CertifiedAtScale)
    }
}

pub fn lfmps_crosscheck(f: &ScalarFn, dim: usize, trials: usize, seed: u64) -> Result<LfmpsReport> {
    let t_over_f = f.derive(DeriveKind::TOverF, None)?;
    let t_times_f = f.derive(DeriveKind::TTimesF, None)?;
    Ok(LfmpsReport {
        f_concave: certify(f, OperatorProperty::Concave, dim, trials, seed)?,
        f_monotone: certify(f, OperatorProperty::Monotone, dim, trials, seed)?,
        t_over_f_monotone: certify(&t_over_f, OperatorProperty::Monotone, dim, trials, seed)?,
        t_times_f_convex: certify(&t_times_f, OperatorProperty::Convex, dim, trials, seed)?,
    })
}
