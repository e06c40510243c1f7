use alloc::vec::Vec;

use super::{ComplexMatrix, HermitianMatrix};
use crate::fmath;
use crate::{Error, Result, C64};

/// Converged when the off-diagonal Frobenius norm drops below this fraction of `‖A‖_F`.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigendecomposition `A = U·diag(λ)·U*` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `U·diag(values)·U*`.
    pub fn recompose(&self, values: &[f64]) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &d) in values.iter().enumerate() {
                    acc += u[(i, k)] * u[(j, k)].conj() * d;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        HermitianMatrix::from_hermitian_part(&out)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    fmath::sqrt(s)
}

/// Cyclic complex Jacobi eigensolver.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<Spectrum> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    if !scale.is_finite() {
        return Err(Error::NonFinite);
    }
    let target = JACOBI_OFF_TOL * scale;

    let mut converged = n <= 1 || off_diagonal_norm(&m) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { routine: "Jacobi eigensolver", sweeps });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&m) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, col)] = v[(r, src)];
        }
    }
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Annihilates `m[p][q]` by `m ← J* m J` with a 2×2 unitary `J`; accumulates `v ← v J`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Phase e^{iφ} = apq/|apq|; after D = diag(1, e^{-iφ}) the pivot is real.
    let phase = apq / b;
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + fmath::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + fmath::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / fmath::sqrt(1.0 + t * t);
    let s = t * c;
    // J = D·R with R = [[c, s], [-s, c]]:
    //   J = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]
    let ph = phase.conj();
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = ph * (-s);
    let j_qq = ph * c;

    let n = m.rows();
    // columns: m ← m J
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * j_pp + mkq * j_qp;
        m[(k, q)] = mkp * j_pq + mkq * j_qq;
    }
    // rows: m ← J* m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = j_pp.conj() * mpk + j_qp.conj() * mqk;
        m[(q, k)] = j_pq.conj() * mpk + j_qq.conj() * mqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}
