//! Dense complex linear algebra for small matrices.

mod calculus;
mod eigen;
mod matrix;
mod order;
mod polar;

pub use calculus::{apply_fn, apply_on_spectrum, inverse, power, sqrt_psd, SINGULAR_TOL};
pub use eigen::{eig_hermitian, Spectrum, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL};
pub use matrix::{ComplexMatrix, HermitianMatrix, HERM_TOL};
pub use order::{
    eigenvalues_desc, hermitian_norm, loewner_leq, max_eig, min_eig, operator_norm, spectral_dominance, OrderVerdict,
    ToleranceConfig,
};
pub use polar::{abs_op, conjugator_for_adjoint, polar, svd, PolarParts, Svd, RANK_TOL};
