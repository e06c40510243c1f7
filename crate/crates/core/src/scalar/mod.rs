//! Scalar functions on intervals of the positive half-line and their
//! matrix extensions.

mod certify;
mod expr;
mod parse;

pub use certify::{
    certify, lfmps_crosscheck, CertVerdict, ConvexityCertificate, LfmpsReport, OperatorProperty, Witness, SAMPLE_CEIL,
    SAMPLE_FLOOR,
};
pub use expr::{DeriveKind, Expr, Interval, ScalarFn, DOMAIN_MARGIN};
pub use parse::{parse_expr, parse_fn, parse_fn_on};

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::linalg::{eig_hermitian, HermitianMatrix};
use crate::{Error, Result};

/// `f(A)` through the spectral decomposition of `A`. Every eigenvalue must
/// lie in the domain of `f`.
pub fn apply(f: &ScalarFn, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let s = eig_hermitian(a)?;
    let domain = f.domain();
    let mut values = Vec::with_capacity(s.eigenvalues.len());
    for &x in &s.eigenvalues {
        if !domain.contains(x) {
            return Err(Error::Domain { value: x, domain: domain.to_string() });
        }
        values.push(f.eval_unchecked(x));
    }
    Ok(s.recompose(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ComplexMatrix;

    #[test]
    fn apply_examples() {
        let sq = apply(&ScalarFn::power(2.0), &HermitianMatrix::from_diag(&[1.0, 2.0])).unwrap();
        assert!(sq.as_matrix().distance(&ComplexMatrix::from_diag(&[1.0, 4.0])) < 1e-14);

        let a = HermitianMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 4.0]]).unwrap();
        let r = apply(&ScalarFn::power(0.5), &a).unwrap();
        let r2 = 2f64.sqrt();
        let expected = (3.0 + r2).sqrt() + (3.0 - r2).sqrt();
        assert!((r.real_trace() - expected).abs() < 1e-12);
        // commutes with A
        let comm = &(r.as_matrix() * a.as_matrix()) - &(a.as_matrix() * r.as_matrix());
        assert!(comm.frobenius_norm() < 1e-10 * 4.0);

        let one = apply(&ScalarFn::constant(1.0), &a).unwrap();
        assert!(one.as_matrix().distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn apply_rejects_spectrum_outside_domain() {
        let a = HermitianMatrix::from_diag(&[-1.0, 2.0]);
        assert!(matches!(apply(&ScalarFn::power(0.5), &a), Err(Error::Domain { .. })));
    }
}
