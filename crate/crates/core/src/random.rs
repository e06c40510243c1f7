//! Seeded randomness: seed mixing, Gaussian sampling and random matrices.
//!
//! All randomized procedures in the crate draw from [`Rng64`] seeded via
//! [`rng_from_seed`]. Sub-seeds are derived with [`mix_seed`], which is what
//! lets suites fan out across workers without changing results.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fmath;
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::C64;

pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: `splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ index)`.
///
/// `stream` identifies the family (or restart group), `index` the trial.
pub fn mix_seed(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ index)
}

/// Standard normal via Box–Muller.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    fmath::sqrt(-2.0 * fmath::ln(u1)) * fmath::cos(2.0 * PI * u2)
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Log-uniform sample in `[lo, hi]`, `0 < lo ≤ hi`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    fmath::exp(uniform(rng, fmath::ln(lo), fmath::ln(hi)))
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng)) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("finite gaussian entries")
}

/// Orthonormalizes the columns of `g` (modified Gram–Schmidt). The `R`
/// factor comes out with a positive diagonal, which fixes the phases.
pub fn orthonormalize_columns(g: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (g.rows(), g.cols());
    let mut q = g.clone();
    for j in 0..cols {
        for k in 0..j {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..rows {
                dot += q[(i, k)].conj() * q[(i, j)];
            }
            for i in 0..rows {
                let qik = q[(i, k)];
                q[(i, j)] -= qik * dot;
            }
        }
        let norm = fmath::sqrt((0..rows).map(|i| q[(i, j)].norm_sqr()).sum());
        for i in 0..rows {
            q[(i, j)] /= norm;
        }
    }
    q
}

/// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`).
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    orthonormalize_columns(&gaussian_matrix(rng, rows, cols))
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_isometry(rng, n, n)
}

/// Hermitian `U diag(λ) U*` with Haar-like `U`.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, eigenvalues: &[f64]) -> HermitianMatrix {
    let u = random_unitary(rng, eigenvalues.len());
    HermitianMatrix::from_diag(eigenvalues).conjugate_by(&u.adjoint()).expect("square shapes")
}

/// GUE-like Hermitian matrix with entries of standard deviation `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> HermitianMatrix {
    let g = gaussian_matrix(rng, n, n).scale(scale);
    HermitianMatrix::from_hermitian_part(&g)
}

/// Positive semidefinite matrix whose spectrum is log-uniform in `[lo, hi]`
/// (uniform when `lo = 0`). When `pin_ends` is set and `n ≥ 2`, the extreme eigenvalues are exactly `lo` and `hi`.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64, pin_ends: bool) -> HermitianMatrix {
    let mut eig: Vec<f64> =
        (0..n).map(|_| if lo > 0.0 { log_uniform(rng, lo, hi) } else { uniform(rng, lo, hi) }).collect();
    if pin_ends && n >= 2 {
        eig[0] = lo;
        eig[n - 1] = hi;
    }
    hermitian_with_spectrum(rng, &eig)
}

/// Weights `exp(g_i) / Σ exp(g_j)` with Gaussian `g`.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| fmath::exp(gaussian(rng))).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

pub fn random_index<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi_inclusive: usize) -> usize {
    rng.random_range(lo..=hi_inclusive)
}
