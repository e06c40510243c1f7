use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{skipped, CheckContext, Family, Instance, Outcome};
use crate::scalar::{certify, OperatorProperty, ScalarFn};
use crate::Result;

/// Certification budget used when an instance carries no claim for a needed property.
pub const FALLBACK_CERT_DIM: usize = 3;
pub const FALLBACK_CERT_TRIALS: usize = 100;
const SHAPE_GRID: usize = 513;

/// An asserted operator property of a function, keyed by its canonical text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub function: String,
    pub property: OperatorProperty,
}

impl Claim {
    pub fn new(f: &ScalarFn, property: OperatorProperty) -> Self {
        Self { function: f.to_string(), property }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HypothesisPolicy {
    /// Instances failing a hypothesis are skipped.
    #[default]
    Enforce,
    /// Exponent windows and function properties are recorded but not enforced.
    /// Structural requirements (invertibility, shapes) still apply.
    Relax,
}

pub(crate) struct Hypotheses<'a> {
    family: Family,
    inst: &'a Instance,
    policy: HypothesisPolicy,
    failed: Vec<String>,
}

impl<'a> Hypotheses<'a> {
    pub fn new(family: Family, inst: &'a Instance, ctx: &CheckContext) -> Self {
        Self { family, inst, policy: ctx.policy, failed: Vec::new() }
    }

    pub fn window(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if !ok {
            self.failed.push(describe());
        }
    }

    /// Operator property from a supplied claim, otherwise by sampling.
    pub fn operator(&mut self, f: &ScalarFn, property: OperatorProperty) -> Result<()> {
        if !property_holds(self.inst, f, property)? {
            self.failed.push(format!("{f} is not {} (sampled witness)", property.name()));
        }
        Ok(())
    }

    /// Records nothing; reports whether `f` has `property` by claim or sampling.
    pub fn probe(&self, f: &ScalarFn, property: OperatorProperty) -> Result<bool> {
        property_holds(self.inst, f, property)
    }

    /// Ordinary concavity or convexity of `f` on `[lo, hi]`.
    pub fn scalar_shape(&mut self, f: &ScalarFn, lo: f64, hi: f64, want_concave: bool, label: &str) -> Result<()> {
        let (convex, concave) = scalar_shape(f, lo, hi)?;
        let ok = if want_concave { concave } else { convex };
        if !ok {
            let kind = if want_concave { "concave" } else { "convex" };
            self.failed.push(format!("{label} is not {kind} on [{lo}, {hi}]"));
        }
        Ok(())
    }

    /// `Err(skipped)` when a hypothesis failed under [`HypothesisPolicy::Enforce`];
    /// otherwise the notes to attach to the result.
    pub fn gate(self) -> core::result::Result<Vec<String>, Outcome> {
        if self.failed.is_empty() {
            return Ok(Vec::new());
        }
        match self.policy {
            HypothesisPolicy::Enforce => Err(skipped(self.family, self.failed.join("; "))),
            HypothesisPolicy::Relax => {
                Ok(self.failed.into_iter().map(|s| format!("hypothesis relaxed: {s}")).collect())
            }
        }
    }
}

fn property_holds(inst: &Instance, f: &ScalarFn, property: OperatorProperty) -> Result<bool> {
    let key = f.to_string();
    if inst.claims.iter().any(|c| c.property == property && c.function == key) {
        return Ok(true);
    }
    Ok(certify(f, property, FALLBACK_CERT_DIM, FALLBACK_CERT_TRIALS, inst.seed)?.passed())
}

/// `(convex, concave)` on `[lo, hi]` from second differences on a uniform grid.
pub fn scalar_shape(f: &ScalarFn, lo: f64, hi: f64) -> Result<(bool, bool)> {
    let step = (hi - lo) / (SHAPE_GRID - 1) as f64;
    let mut values = Vec::with_capacity(SHAPE_GRID);
    for i in 0..SHAPE_GRID {
        let t = if i + 1 == SHAPE_GRID { hi } else { lo + step * i as f64 };
        values.push(f.eval(t)?);
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slack = 64.0 * f64::EPSILON * scale;
    let (mut convex, mut concave) = (true, true);
    for w in values.windows(3) {
        let d2 = w[0] - 2.0 * w[1] + w[2];
        convex &= d2 >= -slack;
        concave &= d2 <= slack;
    }
    Ok((convex, concave))
}

/// Smallest value and whether `f` is non-decreasing, on a grid of `[lo, hi]`.
pub fn scalar_min_and_monotone(f: &ScalarFn, lo: f64, hi: f64) -> Result<(f64, bool)> {
    let step = (hi - lo) / (SHAPE_GRID - 1) as f64;
    let mut prev = f.eval(lo)?;
    let mut min = prev;
    let mut monotone = true;
    for i in 1..SHAPE_GRID {
        let t = if i + 1 == SHAPE_GRID { hi } else { lo + step * i as f64 };
        let v = f.eval(t)?;
        monotone &= v >= prev - 64.0 * f64::EPSILON * v.abs().max(prev.abs());
        min = min.min(v);
        prev = v;
    }
    Ok((min, monotone))
}
