//! Spectral calculus `f(A) = U·diag(f(λ))·U*`.

use alloc::vec::Vec;

use super::{eig_hermitian, HermitianMatrix, Spectrum};
use crate::fmath;
use crate::{Error, Result};

/// Eigenvalues at or below this are refused for negative powers.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Applies `f` to the spectrum of `a`.
pub fn apply_fn(a: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let s = eig_hermitian(a)?;
    Ok(apply_on_spectrum(&s, f))
}

pub fn apply_on_spectrum(s: &Spectrum, f: impl Fn(f64) -> f64) -> HermitianMatrix {
    let values: Vec<f64> = s.eigenvalues.iter().map(|&x| f(x)).collect();
    s.recompose(&values)
}

/// `A^p` for positive semidefinite `A`. Negative exponents require
/// `λ_min(A) > SINGULAR_TOL`; tiny negative eigenvalues from rounding are clipped to zero.
pub fn power(a: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    let s = eig_hermitian(a)?;
    let lo = s.min();
    let scale = s.max().abs().max(1.0);
    if lo < -1e-10 * scale {
        return Err(Error::NotPositiveDefinite(lo));
    }
    if p < 0.0 && lo <= SINGULAR_TOL {
        return Err(Error::NotPositiveDefinite(lo));
    }
    Ok(apply_on_spectrum(&s, |x| {
        if p == 0.0 {
            1.0
        } else if x <= 0.0 {
            0.0
        } else if p == 1.0 {
            x
        } else {
            fmath::pow(x, p)
        }
    }))
}

pub fn sqrt_psd(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    power(a, 0.5)
}

pub fn inverse(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    power(a, -1.0)
}
