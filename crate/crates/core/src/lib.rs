//! Numerical verification engine for asymmetric Choi–Davis and Kadison type
//! operator inequalities on finite-dimensional matrices.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. Every
//! operation is a pure function of its inputs; randomized procedures take an
//! explicit seed.
//!
//! Layout:
//!
//! * [`linalg`]: dense complex matrices, Hermitian eigendecomposition,
//!   spectral calculus, Löwner order, polar decomposition.
//! * [`scalar`]: scalar function expressions and sampling-based operator
//!   convexity/monotonicity certification.
//! * [`maps`]: unital positive linear maps.
//! * [`constants`]: Kantorovich type constants and the refinement term ω.
//! * [`engine`]: one checker per inequality family, plus the suite runner.
//! * [`explorer`]: counterexample search and sharpness scans.
#![no_std]
// Negated comparisons deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::large_enum_variant, clippy::result_large_err)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constants;
pub mod engine;
mod error;
pub mod explorer;
mod fmath;
pub mod linalg;
pub mod maps;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, OrderVerdict, PolarParts, Spectrum, ToleranceConfig};
pub use maps::MapSpec;
pub use scalar::ScalarFn;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
