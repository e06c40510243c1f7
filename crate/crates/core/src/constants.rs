//! Kantorovich type constants and the refinement term ω.

use alloc::format;
use alloc::vec::Vec;

use crate::fmath;
use crate::linalg::{hermitian_norm, inverse, min_eig, power, HermitianMatrix};
use crate::maps::MapSpec;
use crate::scalar::ScalarFn;
use crate::{Error, Result};

/// `h` closer than this to 1 is treated as 1.
pub const H_ONE_TOL: f64 = 1e-8;
/// Near `p ∈ {0, 1}` the displayed `K(m, M, p)` loses precision and is evaluated through [`kappa`].
pub const P_SINGULAR_TOL: f64 = 1e-6;
pub const RATIO_GRID: usize = 4096;
const GOLDEN_REL_WIDTH: f64 = 1e-12;

/// `0 < m < M` with `h = M/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    pub m: f64,
    pub big_m: f64,
}

impl SpectralBounds {
    pub fn new(m: f64, big_m: f64) -> Result<Self> {
        if !(m > 0.0) || !(big_m > m) || !big_m.is_finite() {
            return Err(Error::InvalidParameter(format!("spectral bounds need 0 < m < M, got ({m}, {big_m})")));
        }
        Ok(Self { m, big_m })
    }

    pub fn h(&self) -> f64 {
        self.big_m / self.m
    }

    /// Whether `m ≤ λ_min(A)` and `λ_max(A) ≤ M`, up to `slack` relative to `M`.
    pub fn contains(&self, a: &HermitianMatrix, slack: f64) -> Result<bool> {
        let s = crate::linalg::eig_hermitian(a)?;
        let pad = slack * self.big_m;
        Ok(s.min() >= self.m - pad && s.max() <= self.big_m + pad)
    }
}

/// Exponents used across the inequality families; each family reads the ones it needs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ExponentParams {
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
}

impl ExponentParams {
    pub fn require(value: Option<f64>, name: &str) -> Result<f64> {
        match value {
            Some(v) if v.is_finite() => Ok(v),
            Some(v) => Err(Error::InvalidParameter(format!("{name} = {v} is not finite"))),
            None => Err(Error::InvalidParameter(format!("parameter {name} is required"))),
        }
    }

    pub fn r(&self) -> Result<f64> {
        Self::require(self.r, "r")
    }
    pub fn p(&self) -> Result<f64> {
        Self::require(self.p, "p")
    }
    pub fn q(&self) -> Result<f64> {
        Self::require(self.q, "q")
    }
    pub fn alpha(&self) -> Result<f64> {
        Self::require(self.alpha, "alpha")
    }
    pub fn beta(&self) -> Result<f64> {
        Self::require(self.beta, "beta")
    }
    pub fn gamma(&self) -> Result<f64> {
        Self::require(self.gamma, "gamma")
    }
}

/// `(h^q − 1)/q`, with its limit `ln h` at `q = 0`.
fn scaled_expm1(q: f64, ln_h: f64) -> f64 {
    if q == 0.0 {
        ln_h
    } else {
        fmath::expm1(q * ln_h) / q
    }
}

/// Generalized Kantorovich constant `κ(h, p) = K(1, h, p)`.
///
/// With `e(q) = (h^q − 1)/q` this is
/// `h·e(p−1)/(h−1) · (e(p) / (h·e(p−1)))^p`, which has no removable
/// singularities at `p ∈ {0, 1}`.
pub fn kappa(h: f64, p: f64) -> Result<f64> {
    if !(h >= 1.0) || !h.is_finite() || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("kappa needs finite h ≥ 1 and p, got h = {h}, p = {p}")));
    }
    if h - 1.0 < H_ONE_TOL {
        return Ok(1.0);
    }
    let l = fmath::ln(h);
    let e_pm1 = scaled_expm1(p - 1.0, l);
    let e_p = scaled_expm1(p, l);
    let first = h * e_pm1 / fmath::expm1(l);
    Ok(first * fmath::pow(e_p / (h * e_pm1), p))
}

/// `K(m, M, p)` evaluated from the two-bound formula.
#[allow(non_snake_case)]
pub fn K_power(bounds: SpectralBounds, p: f64) -> Result<f64> {
    let (m, big_m) = (bounds.m, bounds.big_m);
    if (p - 1.0).abs() < P_SINGULAR_TOL || p.abs() < P_SINGULAR_TOL || bounds.h() - 1.0 < H_ONE_TOL {
        return kappa(bounds.h(), p);
    }
    let mp = fmath::pow(m, p);
    let bmp = fmath::pow(big_m, p);
    let cross = m * bmp - big_m * mp;
    let first = cross / ((p - 1.0) * (big_m - m));
    Ok(first * fmath::pow((p - 1.0) / p * (bmp - mp) / cross, p))
}

fn secant_ratio(bounds: SpectralBounds, f: &ScalarFn, fm: f64, fbig: f64, t: f64) -> f64 {
    let (m, big_m) = (bounds.m, bounds.big_m);
    ((big_m - t) * fm + (t - m) * fbig) / ((big_m - m) * f.eval_unchecked(t))
}

/// Extremum of `g` on `[lo, hi]`: grid search, then golden-section on the best bracket.
fn extremum(lo: f64, hi: f64, maximize: bool, g: impl Fn(f64) -> f64) -> f64 {
    let sign = if maximize { 1.0 } else { -1.0 };
    let obj = |t: f64| sign * g(t);
    let step = (hi - lo) / (RATIO_GRID - 1) as f64;
    let at = |i: usize| if i + 1 == RATIO_GRID { hi } else { lo + step * i as f64 };
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..RATIO_GRID {
        let v = obj(at(i));
        if v > best.1 {
            best = (i, v);
        }
    }
    let (mut a, mut b) = (at(best.0.saturating_sub(1)), at((best.0 + 1).min(RATIO_GRID - 1)));
    let width = GOLDEN_REL_WIDTH * (hi - lo);
    let inv_phi = (fmath::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (obj(c), obj(d));
    while b - a > width {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = obj(d);
        }
    }
    let refined = fc.max(fd).max(obj(a)).max(obj(b));
    sign * refined.max(best.1)
}

fn ratio_extremum(bounds: SpectralBounds, f: &ScalarFn, maximize: bool) -> Result<f64> {
    let (m, big_m) = (bounds.m, bounds.big_m);
    let fm = f.eval(m)?;
    let fbig = f.eval(big_m)?;
    let step = (big_m - m) / (RATIO_GRID - 1) as f64;
    for i in 0..RATIO_GRID {
        let t = m + step * i as f64;
        let v = f.eval(t.min(big_m))?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain { value: t, domain: format!("f must be positive on [{m}, {big_m}]") });
        }
    }
    Ok(extremum(m, big_m, maximize, |t| secant_ratio(bounds, f, fm, fbig, t)))
}

/// `K₁(m, M, f) = min_{t∈[m,M]} ((M−t)f(m) + (t−m)f(M)) / ((M−m)f(t))`.
#[allow(non_snake_case)]
pub fn K1(bounds: SpectralBounds, f: &ScalarFn) -> Result<f64> {
    ratio_extremum(bounds, f, false)
}

/// `K₂(m, M, f)`: the maximum of the same ratio.
#[allow(non_snake_case)]
pub fn K2(bounds: SpectralBounds, f: &ScalarFn) -> Result<f64> {
    ratio_extremum(bounds, f, true)
}

/// The three factors of the reverse constant for `Φ(Af(A)) ≤ K |Φ(f(A))Φ(A)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReverseFactors {
    /// `κ(h_f, 2)^{1/2}` with `h_f = max(f(m), f(M)) / min(f(m), f(M))`.
    pub kappa_part: f64,
    /// `K₁(m, M, f²)^{−1/2}`.
    pub k1_part: f64,
    /// `K₂(m, M, t·f(t))`.
    pub k2_part: f64,
}

impl ReverseFactors {
    pub fn product(&self) -> f64 {
        self.kappa_part * self.k1_part * self.k2_part
    }
}

pub fn reverse_theorem_factors(bounds: SpectralBounds, f: &ScalarFn) -> Result<ReverseFactors> {
    use crate::scalar::DeriveKind;
    let fm = f.eval(bounds.m)?;
    let fbig = f.eval(bounds.big_m)?;
    let hf = fm.max(fbig) / fm.min(fbig);
    let f2 = f.derive(DeriveKind::FSquared, None)?;
    let tf = f.derive(DeriveKind::TTimesF, None)?;
    Ok(ReverseFactors {
        kappa_part: fmath::sqrt(kappa(hf, 2.0)?),
        k1_part: 1.0 / fmath::sqrt(K1(bounds, &f2)?),
        k2_part: K2(bounds, &tf)?,
    })
}

#[allow(non_snake_case)]
pub fn K_reverse_theorem(bounds: SpectralBounds, f: &ScalarFn) -> Result<f64> {
    Ok(reverse_theorem_factors(bounds, f)?.product())
}

fn check_h(h: f64) -> Result<()> {
    if !(h >= 1.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("h must be ≥ 1, got {h}")));
    }
    Ok(())
}

/// `κ(h, 1+γ)·κ(h^γ, 2)^{1/2}·κ(h², γ)^{−1/2}` for `γ ∈ [0, 1]`.
#[allow(non_snake_case)]
pub fn K_nakamoto(h: f64, gamma: f64) -> Result<f64> {
    check_h(h)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} outside [0, 1]")));
    }
    Ok(kappa(h, 1.0 + gamma)? * fmath::sqrt(kappa(fmath::pow(h, gamma), 2.0)?) / fmath::sqrt(kappa(h * h, gamma)?))
}

/// `κ(h^β, 1+α/β)·κ(h^β, 2α/β)^{−1/2}·κ(h^α, 2)^{1/2}` for `0 ≤ α ≤ β`, `β > 0`.
#[allow(non_snake_case)]
pub fn K_m4(h: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_h(h)?;
    if !(alpha >= 0.0 && beta > 0.0 && alpha <= beta) {
        return Err(Error::InvalidParameter(format!("need 0 ≤ alpha ≤ beta, beta > 0; got ({alpha}, {beta})")));
    }
    let hb = fmath::pow(h, beta);
    Ok(kappa(hb, 1.0 + alpha / beta)? / fmath::sqrt(kappa(hb, 2.0 * alpha / beta)?)
        * fmath::sqrt(kappa(fmath::pow(h, alpha), 2.0)?))
}

/// Whether `(α, β, γ)` satisfies `α, β ≥ 0`, `γ > 0`, `min{α,β} ≤ γ/2`, `max{α,β} ≤ γ`.
pub fn three_exponents_admissible(alpha: f64, beta: f64, gamma: f64) -> bool {
    alpha >= 0.0 && beta >= 0.0 && gamma > 0.0 && alpha.min(beta) <= gamma / 2.0 && alpha.max(beta) <= gamma
}

/// `κ(h^α,2)^{1/2} κ(h^β,2)^{1/2} κ(h^γ,2β/γ)^{−1/2} κ(h^γ,2α/γ)^{−1/2} κ(h^γ,1+(α+β)/γ)`.
#[allow(non_snake_case)]
pub fn K_three(h: f64, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    check_h(h)?;
    if !three_exponents_admissible(alpha, beta, gamma) {
        return Err(Error::InvalidParameter(format!(
            "need min(alpha, beta) ≤ gamma/2 and max(alpha, beta) ≤ gamma; got ({alpha}, {beta}, {gamma})"
        )));
    }
    let hg = fmath::pow(h, gamma);
    Ok(fmath::sqrt(kappa(fmath::pow(h, alpha), 2.0)?) * fmath::sqrt(kappa(fmath::pow(h, beta), 2.0)?)
        / fmath::sqrt(kappa(hg, 2.0 * beta / gamma)?)
        / fmath::sqrt(kappa(hg, 2.0 * alpha / gamma)?)
        * kappa(hg, 1.0 + (alpha + beta) / gamma)?)
}

/// `n` values at which the defining sequence of ω is evaluated.
pub const OMEGA_SEQUENCE_N: [u32; 11] = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024];

#[derive(Debug, Clone, PartialEq)]
pub struct Omega {
    /// `‖Φ(A)‖^r − (‖Φ(A)‖ − λ)^r`.
    pub value: f64,
    /// `λ = λ_min(Φ(A) − Φ(A^r)^{1/r})`, the infimum of the sequence.
    pub infimum: f64,
    pub phi_norm: f64,
    /// `‖(Φ(A) + I/n − Φ(A^r)^{1/r})^{−1}‖^{−1}` for `n` in [`OMEGA_SEQUENCE_N`].
    pub sequence_tail: Vec<f64>,
    /// Richardson extrapolation `2·s(1024) − s(512)` of the tail.
    pub extrapolated_limit: f64,
}

/// ω(A, r) for `r ∈ [1/2, 1]` and positive invertible `A`. At `r = 1` the value is 0.
pub fn omega(phi: &MapSpec, a: &HermitianMatrix, r: f64) -> Result<Omega> {
    if !(0.5..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("omega needs r in [1/2, 1], got {r}")));
    }
    let lo = min_eig(a)?;
    if lo <= crate::linalg::SINGULAR_TOL {
        return Err(Error::NotPositiveDefinite(lo));
    }
    let pa = phi.apply(a)?;
    let b = power(&phi.apply(&power(a, r)?)?, 1.0 / r)?;
    let diff = pa.try_sub(&b)?;
    let infimum = min_eig(&diff)?.max(0.0);
    let phi_norm = hermitian_norm(&pa)?;
    let value = (fmath::pow(phi_norm, r) - fmath::pow((phi_norm - infimum).max(0.0), r)).max(0.0);

    let mut sequence_tail = Vec::with_capacity(OMEGA_SEQUENCE_N.len());
    for &n in &OMEGA_SEQUENCE_N {
        let shifted = diff.add_scalar(1.0 / n as f64);
        sequence_tail.push(1.0 / hermitian_norm(&inverse(&shifted)?)?);
    }
    let k = sequence_tail.len();
    let extrapolated_limit = 2.0 * sequence_tail[k - 1] - sequence_tail[k - 2];
    Ok(Omega { value, infimum, phi_norm, sequence_tail, extrapolated_limit })
}
