use alloc::vec::Vec;

use super::{ComplexMatrix, HermitianMatrix};
use crate::fmath;
use crate::{Error, Result, C64};

/// Singular values below `RANK_TOL · σ_max` are treated as zero.
pub const RANK_TOL: f64 = 1e-10;
const SVD_ORTH_TOL: f64 = 1e-15;
const SVD_MAX_SWEEPS: usize = 64;

/// `X = U·diag(σ)·V*` for square `X`, σ descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Polar decomposition `X = W·|X|` with `W` a partial isometry whose initial
/// space is the support of `|X|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarParts {
    pub isometry: ComplexMatrix,
    pub modulus: HermitianMatrix,
    pub rank: usize,
}

/// One-sided (Hestenes) Jacobi SVD. Columns of `X·V` are rotated until
/// pairwise orthogonal; their norms are the singular values.
pub fn svd(x: &ComplexMatrix) -> Result<Svd> {
    if !x.is_square() {
        return Err(Error::NotSquare { rows: x.rows(), cols: x.cols() });
    }
    let n = x.cols();
    let mut g = x.clone();
    let mut v = ComplexMatrix::identity(n);

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::new(0.0, 0.0));
                for i in 0..n {
                    alpha += g[(i, p)].norm_sqr();
                    beta += g[(i, q)].norm_sqr();
                    gamma += g[(i, p)].conj() * g[(i, q)];
                }
                let b = gamma.norm();
                if b == 0.0 || b <= SVD_ORTH_TOL * fmath::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                // After scaling column q by e^{-iφ} the pivot is real; rotate in the real plane.
                let ph = (gamma / b).conj();
                let zeta = (beta - alpha) / (2.0 * b);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + fmath::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + fmath::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / fmath::sqrt(1.0 + t * t);
                let s = c * t;
                for m in [&mut g, &mut v] {
                    for i in 0..n {
                        let a = m[(i, p)];
                        let bq = m[(i, q)] * ph;
                        m[(i, p)] = a * c - bq * s;
                        m[(i, q)] = a * s + bq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == SVD_MAX_SWEEPS {
            return Err(Error::NoConvergence { routine: "one-sided Jacobi SVD", sweeps });
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| fmath::sqrt((0..n).map(|i| g[(i, j)].norm_sqr()).sum())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

    let sigma_max = norms.iter().copied().fold(0.0, f64::max);
    let mut u = ComplexMatrix::zeros(n, n);
    let mut v_sorted = ComplexMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (col, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        // Fix phase: largest-modulus component of v real positive.
        let mut pivot = C64::new(0.0, 0.0);
        for i in 0..n {
            if v[(i, src)].norm() > pivot.norm() {
                pivot = v[(i, src)];
            }
        }
        let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            v_sorted[(i, col)] = v[(i, src)] * phase;
            if sigma > 0.0 && sigma > f64::MIN_POSITIVE * sigma_max {
                u[(i, col)] = g[(i, src)] * phase / sigma;
            }
        }
    }
    Ok(Svd { u, singular_values, v: v_sorted })
}

impl Svd {
    pub fn rank(&self) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values.iter().filter(|&&s| s > RANK_TOL * smax && s > 0.0).count()
    }
}

/// `|X| = (X*X)^{1/2}`.
pub fn abs_op(x: &ComplexMatrix) -> Result<HermitianMatrix> {
    let d = svd(x)?;
    Ok(outer_weighted(&d.v, &d.singular_values, d.singular_values.len()))
}

/// `Σ_k w_k v_k v_k*` over the first `count` columns of `v`.
fn outer_weighted(v: &ComplexMatrix, w: &[f64], count: usize) -> HermitianMatrix {
    let n = v.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..count {
                acc += v[(i, k)] * v[(j, k)].conj() * w[k];
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
    }
    HermitianMatrix::from_hermitian_part(&out)
}

pub fn polar(x: &ComplexMatrix) -> Result<PolarParts> {
    let d = svd(x)?;
    let n = x.rows();
    let rank = d.rank();
    let mut w = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..rank {
                acc += d.u[(i, k)] * d.v[(j, k)].conj();
            }
            w[(i, j)] = acc;
        }
    }
    let modulus = outer_weighted(&d.v, &d.singular_values, n);
    Ok(PolarParts { isometry: w, modulus, rank })
}

/// Partial isometry `W` with `|S| = W*·|S*|·W` (on the support of `|S|`).
///
/// This is the polar factor of `S`: from `S = W|S|` one gets
/// `|S*| = W|S|W*`, and `W*W` is the projection onto the support of `|S|`.
pub fn conjugator_for_adjoint(s: &ComplexMatrix) -> Result<PolarParts> {
    polar(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_hermitian;
    use crate::random::{gaussian_matrix, random_unitary, rng_from_seed};

    #[test]
    fn abs_of_hermitian_diagonal() {
        let x = ComplexMatrix::from_diag(&[-2.0, 3.0]);
        let a = abs_op(&x).unwrap();
        assert!(a.as_matrix().distance(&ComplexMatrix::from_diag(&[2.0, 3.0])) < 1e-15);
    }

    #[test]
    fn nilpotent_block() {
        let x = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        let p = polar(&x).unwrap();
        assert!(p.modulus.as_matrix().distance(&ComplexMatrix::from_diag(&[0.0, 1.0])) < 1e-15);
        assert_eq!(p.rank, 1);
        // W e2 = e1 and W e1 = 0.
        assert!((p.isometry[(0, 1)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(p.isometry[(0, 0)].norm() < 1e-15 && p.isometry[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn rank_deficient_diagonal() {
        let p = polar(&ComplexMatrix::from_diag(&[0.0, 2.0])).unwrap();
        assert!(p.isometry.distance(&ComplexMatrix::from_diag(&[0.0, 1.0])) < 1e-15);
        assert!(p.modulus.as_matrix().distance(&ComplexMatrix::from_diag(&[0.0, 2.0])) < 1e-15);
    }

    #[test]
    fn invertible_gives_unitary_and_reconstructs() {
        let mut rng = rng_from_seed(2);
        for n in 1..=8 {
            let x = gaussian_matrix(&mut rng, n, n);
            let p = polar(&x).unwrap();
            let w = &p.isometry;
            assert!((&w.adjoint() * w).distance(&ComplexMatrix::identity(n)) < 1e-10);
            assert!((w * p.modulus.as_matrix()).distance(&x) < 1e-10 * x.frobenius_norm());
            let sq = &p.modulus.as_matrix().clone() * p.modulus.as_matrix();
            assert!(sq.distance(&(&x.adjoint() * &x)) < 1e-9 * x.frobenius_norm().powi(2));
            assert!(eig_hermitian(&p.modulus).unwrap().min() > -1e-12);
        }
    }

    #[test]
    fn adjoint_conjugation_identity() {
        let mut rng = rng_from_seed(9);
        for _ in 0..20 {
            let s = gaussian_matrix(&mut rng, 3, 3);
            let w = conjugator_for_adjoint(&s).unwrap().isometry;
            let abs_s = abs_op(&s).unwrap();
            let abs_s_star = abs_op(&s.adjoint()).unwrap();
            let back = abs_s_star.conjugate_by(&w).unwrap();
            assert!(back.as_matrix().distance(abs_s.as_matrix()) <= 1e-9 * s.frobenius_norm());
        }
        let d = ComplexMatrix::from_diag(&[1.0, 2.0]);
        let w = conjugator_for_adjoint(&d).unwrap().isometry;
        assert!(w.distance(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn abs_is_unitarily_invariant() {
        let mut rng = rng_from_seed(4);
        let x = gaussian_matrix(&mut rng, 4, 4);
        let u = random_unitary(&mut rng, 4);
        let a = abs_op(&x).unwrap();
        let b = abs_op(&(&u * &x)).unwrap();
        assert!(a.as_matrix().distance(b.as_matrix()) < 1e-9 * x.frobenius_norm());
    }

    #[test]
    fn rejects_rectangular() {
        assert!(matches!(polar(&ComplexMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }
}
