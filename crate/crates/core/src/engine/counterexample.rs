use crate::linalg::{abs_op, eig_hermitian, sqrt_psd, ComplexMatrix, HermitianMatrix};
use crate::maps::MapSpec;
use crate::Result;

/// The two positive 3×3 matrices refuting the naive operator Chebyshev inequalities.
pub const COUNTEREXAMPLE_A: [[f64; 3]; 3] = [[2.0, 0.0, 0.0], [0.0, 2.0, 1.0], [0.0, 1.0, 3.0]];
pub const COUNTEREXAMPLE_B: [[f64; 3]; 3] = [[2.0, 1.0, 1.0], [1.0, 2.0, 0.0], [1.0, 0.0, 1.0]];

pub const PUBLISHED_ABS_PRODUCT: [[f64; 2]; 2] = [[4.0, 2.0], [2.0, 4.0]];
/// Published to two decimals.
pub const PUBLISHED_SQRT_PRODUCT: [[f64; 2]; 2] = [[4.0, 2.4], [2.4, 3.89]];
pub const PUBLISHED_SANDWICH: [[f64; 2]; 2] = [[8.0, 4.0], [4.0, 8.0]];
pub const PUBLISHED_PHI_ABA: [[f64; 2]; 2] = [[8.0, 6.0], [6.0, 9.0]];

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub phi: MapSpec,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    /// `|Φ(B)Φ(A)|`
    pub abs_product: HermitianMatrix,
    /// `Φ(A^{1/2} B A^{1/2})`
    pub sqrt_product: HermitianMatrix,
    /// `Φ(A)Φ(B)Φ(A)`
    pub sandwich: HermitianMatrix,
    /// `Φ(ABA)`
    pub phi_aba: HermitianMatrix,
    /// `λ_min(Φ(A^{1/2}BA^{1/2}) − |Φ(B)Φ(A)|)`
    pub first_gap: f64,
    /// `λ_min(Φ(ABA) − Φ(A)Φ(B)Φ(A))`
    pub second_gap: f64,
    /// Largest entrywise deviation of the three exactly published matrices.
    pub exact_deviation: f64,
    /// Largest entrywise deviation of `Φ(A^{1/2}BA^{1/2})` from its rounded published value.
    pub rounded_deviation: f64,
}

fn max_dev(x: &HermitianMatrix, expected: &[[f64; 2]; 2]) -> f64 {
    let e = ComplexMatrix::from_real_rows(expected);
    let m = x.as_matrix();
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((m[(i, j)] - e[(i, j)]).norm());
        }
    }
    worst
}

/// Evaluates both refutations with `Φ` the compression of `M₃` to its leading 2×2 block.
pub fn reproduce_counterexamples() -> Result<CounterexampleReport> {
    let phi = MapSpec::compression(3, 2)?;
    let a = HermitianMatrix::from_real_rows(&COUNTEREXAMPLE_A)?;
    let b = HermitianMatrix::from_real_rows(&COUNTEREXAMPLE_B)?;
    let pa = phi.apply(&a)?;
    let pb = phi.apply(&b)?;
    let abs_product = abs_op(&pb.as_matrix().try_mul(pa.as_matrix())?)?;
    let sqrt_product = phi.apply(&b.congruence(&sqrt_psd(&a)?))?;
    let sandwich = pb.congruence(&pa);
    let phi_aba = phi.apply(&b.congruence(&a))?;
    let first_gap = eig_hermitian(&sqrt_product.try_sub(&abs_product)?)?.min();
    let second_gap = eig_hermitian(&phi_aba.try_sub(&sandwich)?)?.min();
    let exact_deviation = max_dev(&abs_product, &PUBLISHED_ABS_PRODUCT)
        .max(max_dev(&sandwich, &PUBLISHED_SANDWICH))
        .max(max_dev(&phi_aba, &PUBLISHED_PHI_ABA));
    let rounded_deviation = max_dev(&sqrt_product, &PUBLISHED_SQRT_PRODUCT);
    Ok(CounterexampleReport {
        phi,
        a,
        b,
        abs_product,
        sqrt_product,
        sandwich,
        phi_aba,
        first_gap,
        second_gap,
        exact_deviation,
        rounded_deviation,
    })
}
