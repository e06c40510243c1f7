use alloc::vec::Vec;

use super::{eig_hermitian, polar::svd, ComplexMatrix, HermitianMatrix};
use crate::Error;
use crate::Result;

/// Absolute and relative slack for order checks. The inequalities are exact;
/// the slack only absorbs floating-point error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { atol: 1e-10, rtol: 1e-9 }
    }
}

impl ToleranceConfig {
    pub fn at_scale(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }
}

/// Outcome of an order comparison `X ≤ Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderVerdict {
    pub holds: bool,
    /// `λ_min(Y − X)` for the Löwner order, the smallest sorted-eigenvalue
    /// margin for spectral dominance.
    pub gap_min_eig: f64,
    pub tolerance_used: f64,
}

impl OrderVerdict {
    pub fn from_gap(gap_min_eig: f64, tolerance_used: f64) -> Self {
        Self { holds: gap_min_eig >= -tolerance_used, gap_min_eig, tolerance_used }
    }

    /// Both verdicts must hold; keeps the tighter margin.
    pub fn and(self, other: Self) -> Self {
        let (gap, tol) = if other.gap_min_eig + other.tolerance_used < self.gap_min_eig + self.tolerance_used {
            (other.gap_min_eig, other.tolerance_used)
        } else {
            (self.gap_min_eig, self.tolerance_used)
        };
        Self { holds: self.holds && other.holds, gap_min_eig: gap, tolerance_used: tol }
    }
}

/// Spectral norm (largest singular value).
pub fn operator_norm(x: &ComplexMatrix) -> Result<f64> {
    Ok(svd(x)?.singular_values.first().copied().unwrap_or(0.0))
}

/// Spectral norm of a Hermitian matrix: `max |λ|`.
pub fn hermitian_norm(x: &HermitianMatrix) -> Result<f64> {
    let s = eig_hermitian(x)?;
    Ok(s.min().abs().max(s.max().abs()))
}

pub fn min_eig(x: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(x)?.min())
}

pub fn max_eig(x: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(x)?.max())
}

fn check_dims(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    Ok(())
}

/// `X ≤ Y` in the Löwner order:
/// holds ⟺ `λ_min(Y − X) ≥ −(atol + rtol·max(‖X‖, ‖Y‖))`.
pub fn loewner_leq(x: &HermitianMatrix, y: &HermitianMatrix, tol: ToleranceConfig) -> Result<OrderVerdict> {
    check_dims(x, y)?;
    let scale = hermitian_norm(x)?.max(hermitian_norm(y)?);
    let gap = min_eig(&y.try_sub(x)?)?;
    Ok(OrderVerdict::from_gap(gap, tol.at_scale(scale)))
}

/// Existence of a unitary `V` with `X ≤ V·Y·V*`, decided by comparing the
/// spectra sorted in descending order.
pub fn spectral_dominance(x: &HermitianMatrix, y: &HermitianMatrix, tol: ToleranceConfig) -> Result<OrderVerdict> {
    check_dims(x, y)?;
    let ex = eig_hermitian(x)?.eigenvalues;
    let ey = eig_hermitian(y)?.eigenvalues;
    let scale =
        [ex.first(), ex.last(), ey.first(), ey.last()].into_iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    // Both ascending; comparing index-wise is the same as comparing descending.
    let gap = ex.iter().zip(&ey).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min);
    let gap = if gap.is_finite() { gap } else { 0.0 };
    Ok(OrderVerdict::from_gap(gap, tol.at_scale(scale)))
}

/// Sorted eigenvalues, descending.
pub fn eigenvalues_desc(x: &HermitianMatrix) -> Result<Vec<f64>> {
    let mut e = eig_hermitian(x)?.eigenvalues;
    e.reverse();
    Ok(e)
}
