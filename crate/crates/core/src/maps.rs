//! Unital positive linear maps `Φ: M_{n_in} → M_{n_out}`.
//!
//! Every variant is positive by construction: each is a convex combination
//! of compressions `A ↦ V*AV` by isometries.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{min_eig, ComplexMatrix, HermitianMatrix};
use crate::random::{hermitian_with_spectrum, random_isometry, random_weights, rng_from_seed, uniform};
use crate::{Error, Result, C64};

pub const UNITALITY_TOL: f64 = 1e-10;
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;
const VALIDATION_SAMPLES: usize = 200;
const VALIDATION_SEED: u64 = 0x5EED_0FF1;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausTerm {
    pub weight: f64,
    /// `n_in × n_out` isometry `V`; the term contributes `w·V*AV`.
    pub isometry: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    /// Leading `k × k` block.
    Compression {
        n_in: usize,
        k: usize,
    },
    /// `A ↦ (Tr A / n_in)·I_{n_out}`.
    NormalizedTrace {
        n_in: usize,
        n_out: usize,
    },
    /// Keeps the diagonal blocks indexed by a partition of `0..n`.
    Pinching {
        blocks: Vec<Vec<usize>>,
    },
    KrausMixture {
        terms: Vec<KrausTerm>,
    },
}

impl MapSpec {
    pub fn compression(n_in: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n_in {
            return Err(Error::InfeasibleShape(format!("compression to {k} from dimension {n_in}")));
        }
        Ok(Self::Compression { n_in, k })
    }

    pub fn normalized_trace(n_in: usize, n_out: usize) -> Result<Self> {
        if n_in == 0 || n_out == 0 {
            return Err(Error::InfeasibleShape(String::from("empty normalized trace")));
        }
        Ok(Self::NormalizedTrace { n_in, n_out })
    }

    pub fn pinching(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for &i in blocks.iter().flatten() {
            if i >= n || seen[i] {
                return Err(Error::InvalidParameter(format!("pinching blocks are not a partition of 0..{n}")));
            }
            seen[i] = true;
        }
        if n == 0 || blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidParameter(String::from("pinching needs nonempty blocks")));
        }
        Ok(Self::Pinching { blocks })
    }

    /// Checks shapes only; unitality is left to [`MapSpec::validate`].
    pub fn kraus(terms: Vec<KrausTerm>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InfeasibleShape(String::from("no Kraus terms")))?;
        let (r, c) = (first.isometry.rows(), first.isometry.cols());
        if c == 0 || c > r {
            return Err(Error::InfeasibleShape(format!("isometry of shape {r}×{c}")));
        }
        for t in &terms {
            if t.isometry.rows() != r || t.isometry.cols() != c {
                return Err(Error::DimensionMismatch { expected: r, found: t.isometry.rows() });
            }
            if !(t.weight > 0.0) || !t.weight.is_finite() {
                return Err(Error::InvalidParameter(format!("Kraus weight {} is not positive", t.weight)));
            }
        }
        Ok(Self::KrausMixture { terms })
    }

    /// `A ↦ U*AU` for a unitary `U`.
    pub fn unitary_conjugation(u: ComplexMatrix) -> Result<Self> {
        Self::kraus(vec![KrausTerm { weight: 1.0, isometry: u }])
    }

    pub fn n_in(&self) -> usize {
        match self {
            Self::Compression { n_in, .. } | Self::NormalizedTrace { n_in, .. } => *n_in,
            Self::Pinching { blocks } => blocks.iter().map(Vec::len).sum(),
            Self::KrausMixture { terms } => terms[0].isometry.rows(),
        }
    }

    pub fn n_out(&self) -> usize {
        match self {
            Self::Compression { k, .. } => *k,
            Self::NormalizedTrace { n_out, .. } => *n_out,
            Self::Pinching { .. } => self.n_in(),
            Self::KrausMixture { terms } => terms[0].isometry.cols(),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Self::Compression { .. } => "compression",
            Self::NormalizedTrace { .. } => "normalized-trace",
            Self::Pinching { .. } => "pinching",
            Self::KrausMixture { .. } => "kraus-mixture",
        }
    }

    pub fn apply(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        let n = self.n_in();
        if a.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
        }
        let m = a.as_matrix();
        let out = match self {
            Self::Compression { k, .. } => m.leading_block(*k),
            Self::NormalizedTrace { n_out, .. } => ComplexMatrix::identity(*n_out).scale(a.real_trace() / n as f64),
            Self::Pinching { blocks } => {
                let mut out = ComplexMatrix::zeros(n, n);
                for b in blocks {
                    for &i in b {
                        for &j in b {
                            out[(i, j)] = m[(i, j)];
                        }
                    }
                }
                out
            }
            Self::KrausMixture { terms } => {
                let k = self.n_out();
                let mut out = ComplexMatrix::zeros(k, k);
                for t in terms {
                    let v = &t.isometry;
                    let av = m.try_mul(v)?;
                    let term = v.adjoint().try_mul(&av)?;
                    out = out.try_add(&term.scale(t.weight))?;
                }
                out
            }
        };
        Ok(HermitianMatrix::from_hermitian_part(&out))
    }

    pub fn validate(&self) -> MapValidation {
        let mut issues = Vec::new();
        let n = self.n_in();
        let k = self.n_out();
        if let Self::KrausMixture { terms } = self {
            let total: f64 = terms.iter().map(|t| t.weight).sum();
            if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                issues.push(format!("weights sum to {total}, not 1"));
            }
            for (i, t) in terms.iter().enumerate() {
                let g = t.isometry.adjoint().try_mul(&t.isometry);
                let err = g.map(|g| g.distance(&ComplexMatrix::identity(k))).unwrap_or(f64::INFINITY);
                if err > UNITALITY_TOL {
                    issues.push(format!("term {i}: ‖V*V − I‖ = {err:.3e}"));
                }
            }
        }
        let unitality_error = self
            .apply(&HermitianMatrix::identity(n))
            .map(|img| img.as_matrix().distance(&ComplexMatrix::identity(k)))
            .unwrap_or(f64::INFINITY);
        if unitality_error > UNITALITY_TOL {
            issues.push(format!("‖Φ(I) − I‖ = {unitality_error:.3e}"));
        }

        let mut rng = rng_from_seed(VALIDATION_SEED);
        let mut worst = f64::INFINITY;
        for s in 0..VALIDATION_SAMPLES {
            // every fourth sample is singular
            let spec: Vec<f64> =
                (0..n).map(|i| if s % 4 == 0 && i == 0 { 0.0 } else { uniform(&mut rng, 0.0, 1.0) }).collect();
            let a = hermitian_with_spectrum(&mut rng, &spec);
            let e = self.apply(&a).and_then(|img| min_eig(&img)).unwrap_or(f64::NEG_INFINITY);
            worst = worst.min(e);
        }
        if worst < -POSITIVITY_TOL {
            issues.push(format!("positivity: λ_min(Φ(A)) = {worst:.3e} on a PSD input"));
        }
        MapValidation { unitality_error, positivity_min_eig: worst, samples: VALIDATION_SAMPLES, issues }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapValidation {
    pub unitality_error: f64,
    /// Smallest eigenvalue of `Φ(A)` over the sampled PSD inputs (each with `‖A‖ ≤ 1`).
    pub positivity_min_eig: f64,
    pub samples: usize,
    pub issues: Vec<String>,
}

impl MapValidation {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Kraus mixture of `terms` random isometries `n_in × n_out` with random weights.
pub fn random_map(n_in: usize, n_out: usize, terms: usize, seed: u64) -> Result<MapSpec> {
    if n_out == 0 || n_out > n_in || terms == 0 {
        return Err(Error::InfeasibleShape(format!("random map {n_in}→{n_out} with {terms} terms")));
    }
    let mut rng = rng_from_seed(seed);
    let weights = random_weights(&mut rng, terms);
    let terms = weights
        .into_iter()
        .map(|weight| KrausTerm { weight, isometry: random_isometry(&mut rng, n_in, n_out) })
        .collect();
    MapSpec::kraus(terms)
}

/// Structured gallery member picked by `variant` (mod 5) for input dimension `n`.
pub fn gallery_map(variant: usize, n: usize, seed: u64) -> Result<MapSpec> {
    let mut rng = rng_from_seed(seed);
    match variant % 5 {
        0 => MapSpec::compression(n, 1 + (uniform(&mut rng, 0.0, n as f64) as usize).min(n - 1)),
        1 => MapSpec::normalized_trace(n, n),
        2 => {
            let cut = 1 + (uniform(&mut rng, 0.0, (n - 1).max(1) as f64) as usize).min(n.saturating_sub(2));
            if n < 2 {
                return MapSpec::pinching(vec![vec![0]]);
            }
            MapSpec::pinching(vec![(0..cut).collect(), (cut..n).collect()])
        }
        3 => {
            let out = 1 + (uniform(&mut rng, 0.0, n as f64) as usize).min(n - 1);
            random_map(n, out, 1 + (uniform(&mut rng, 0.0, 3.0) as usize), seed ^ 0xA5A5)
        }
        _ => random_map(n, n, 1 + (uniform(&mut rng, 0.0, 3.0) as usize), seed ^ 0x5A5A),
    }
}

/// `C64` helper for building Kraus isometries from real data.
pub fn real_isometry(rows: &[Vec<f64>]) -> Result<ComplexMatrix> {
    let data: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
    ComplexMatrix::from_rows(&data)
}
