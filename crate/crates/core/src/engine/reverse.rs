use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::hypothesis::{scalar_min_and_monotone, scalar_shape, Hypotheses};
use super::{
    abs_product, build, positive_definite, pw, skipped, spectral_bounds, CheckContext, CheckResult, Family, Instance,
    Outcome,
};
use crate::constants::{omega, K_m4, K_nakamoto, K_power, K_reverse_theorem, SpectralBounds, K1, K2};
use crate::fmath;
use crate::linalg::{hermitian_norm, min_eig, HermitianMatrix};
use crate::scalar::{apply, DeriveKind};
use crate::{Error, Result};

pub(crate) fn check(family: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    use Family::*;
    match family {
        RevJensen => rev_jensen(inst, ctx),
        RevChoi => rev_choi(inst, ctx),
        ThmReverseF => thm_reverse_f(inst, ctx),
        CorNakamoto | M4 => power_reverse(family, inst, ctx),
        Elh => elh(inst, ctx),
        OmegaGap => omega_gap(inst, ctx),
        LemmaAsa => lemma_asa(inst, ctx),
        ThmMain2 | CorLc => main2(family, inst, ctx),
        _ => Err(Error::InvalidParameter(format!("{family} is not a reverse family"))),
    }
}

fn finish(mut r: CheckResult, constant: Option<f64>, notes: Vec<String>) -> Outcome {
    r.constant = constant;
    r.notes.extend(notes);
    Outcome::Checked(r)
}

fn domain_covers(inst_f: &crate::ScalarFn, b: SpectralBounds) -> core::result::Result<(), String> {
    let d = inst_f.domain();
    if d.contains(b.m) && d.contains(b.big_m) {
        Ok(())
    } else {
        Err(format!("[{}, {}] is not inside the domain {d} of {inst_f}", b.m, b.big_m))
    }
}

fn rev_jensen(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::RevJensen;
    let f = inst.f()?;
    let b = require!(fam, spectral_bounds(inst));
    require!(fam, Ok::<_, Error>(domain_covers(f, b)));
    let (min_f, _) = scalar_min_and_monotone(f, b.m, b.big_m)?;
    if !(min_f > 0.0) {
        return Ok(skipped(fam, format!("{f} is not positive on [{}, {}]", b.m, b.big_m)));
    }
    let (convex, concave) = scalar_shape(f, b.m, b.big_m)?;
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window(convex || concave, || format!("{f} is neither concave nor convex on [{}, {}]", b.m, b.big_m));
    let notes = gate!(h);
    let f_of_phi = apply(f, &inst.phi(&inst.a)?)?;
    let phi_of_f = inst.phi(&apply(f, &inst.a)?)?;
    let out = if concave || !convex {
        let k = K1(b, f)?;
        finish(build(fam, f_of_phi.scale(k), phi_of_f, ctx)?, Some(k), notes)
    } else {
        let k = K2(b, f)?;
        finish(build(fam, phi_of_f, f_of_phi.scale(k), ctx)?, Some(k), notes)
    };
    Ok(out)
}

fn rev_choi(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::RevChoi;
    let p = inst.params.p()?;
    let b = require!(fam, spectral_bounds(inst));
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window(p > 0.0 && p != 1.0, || format!("p = {p} must be in (0, 1) or (1, ∞)"));
    let notes = gate!(h);
    if !(p > 0.0) {
        return Ok(skipped(fam, format!("constant undefined at p = {p}")));
    }
    let k = K_power(b, p)?;
    let phi_ap = inst.phi(&pw(&inst.a, p)?)?;
    let phi_a_p = pw(&inst.phi(&inst.a)?, p)?;
    let r =
        if p > 1.0 { build(fam, phi_ap, phi_a_p.scale(k), ctx)? } else { build(fam, phi_a_p.scale(k), phi_ap, ctx)? };
    Ok(finish(r, Some(k), notes))
}

fn thm_reverse_f(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::ThmReverseF;
    let f = inst.f()?;
    let b = require!(fam, spectral_bounds(inst));
    require!(fam, Ok::<_, Error>(domain_covers(f, b)));
    let (min_f, _) = scalar_min_and_monotone(f, b.m, b.big_m)?;
    if !(min_f > 0.0) {
        return Ok(skipped(fam, format!("{f} is not positive on [{}, {}]", b.m, b.big_m)));
    }
    let f2 = f.derive(DeriveKind::FSquared, None)?;
    let tf = f.derive(DeriveKind::TTimesF, None)?;
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.scalar_shape(&f2, b.m, b.big_m, true, "f²")?;
    h.scalar_shape(&tf, b.m, b.big_m, false, "t·f(t)")?;
    let notes = gate!(h);
    let k = K_reverse_theorem(b, f)?;
    let fa = apply(f, &inst.a)?;
    let lhs = inst.phi(&apply(&tf, &inst.a)?)?;
    let rhs = abs_product(&inst.phi(&fa)?, &inst.phi(&inst.a)?)?.scale(k);
    Ok(finish(build(fam, lhs, rhs, ctx)?, Some(k), notes))
}

fn power_reverse(fam: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let b = require!(fam, spectral_bounds(inst));
    let mut h = Hypotheses::new(fam, inst, ctx);
    let (lo, hi, ok) = if fam == Family::CorNakamoto {
        let g = inst.params.gamma()?;
        h.window((0.0..=1.0).contains(&g), || format!("gamma = {g} outside [0, 1]"));
        (g, 1.0, (0.0..=1.0).contains(&g))
    } else {
        let (a, be) = (inst.params.alpha()?, inst.params.beta()?);
        let ok = 0.0 <= a && a <= be && be > 0.0;
        h.window(ok, || format!("need 0 ≤ alpha ≤ beta, beta > 0; got ({a}, {be})"));
        (a, be, ok)
    };
    let notes = gate!(h);
    if !ok {
        return Ok(skipped(fam, String::from("constant undefined outside its parameter window")));
    }
    let k = if fam == Family::CorNakamoto { K_nakamoto(b.h(), lo)? } else { K_m4(b.h(), lo, hi)? };
    let lhs = inst.phi(&pw(&inst.a, lo + hi)?)?;
    let rhs = abs_product(&inst.phi(&pw(&inst.a, lo)?)?, &inst.phi(&pw(&inst.a, hi)?)?)?.scale(k);
    Ok(finish(build(fam, lhs, rhs, ctx)?, Some(k), notes))
}

fn elh(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::Elh;
    let r = inst.params.r()?;
    let b = inst.b()?;
    let lo_b = min_eig(b)?;
    let norm_a = hermitian_norm(&inst.a)?;
    if lo_b < -1e-12 * norm_a.max(1.0) {
        return Ok(skipped(fam, format!("B is not positive (λ_min = {lo_b:.3e})")));
    }
    let gap = min_eig(&inst.a.try_sub(b)?)?;
    if !(gap > 0.0) {
        return Ok(skipped(fam, format!("A − B is not positive definite (λ_min = {gap:.3e})")));
    }
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window((0.0..=1.0).contains(&r), || format!("r = {r} outside [0, 1]"));
    let notes = gate!(h);
    if !(r >= 0.0) {
        return Ok(skipped(fam, format!("r = {r} is negative")));
    }
    let c = fmath::pow(norm_a, r) - fmath::pow((norm_a - gap).max(0.0), r);
    let lhs = pw(b, r)?.add_scalar(c);
    let rhs = pw(&inst.a, r)?;
    Ok(finish(build(fam, lhs, rhs, ctx)?, Some(c), notes))
}

fn omega_gap(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::OmegaGap;
    let r = inst.params.r()?;
    require!(fam, positive_definite(&inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window((0.5..=1.0).contains(&r), || format!("r = {r} outside [1/2, 1]"));
    let notes = gate!(h);
    if !(0.5..=1.0).contains(&r) {
        return Ok(skipped(fam, format!("ω is undefined at r = {r}")));
    }
    let w = omega(&inst.phi, &inst.a, r)?;
    let lhs = inst.phi(&pw(&inst.a, r)?)?.add_scalar(w.value);
    let rhs = pw(&inst.phi(&inst.a)?, r)?;
    Ok(finish(build(fam, lhs, rhs, ctx)?, Some(w.value), notes))
}

fn lemma_asa(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::LemmaAsa;
    let (p, q, r) = (inst.params.p()?, inst.params.q()?, inst.params.r()?);
    let b = inst.b()?;
    require!(fam, positive_definite(&inst.a));
    require!(fam, positive_definite(b));
    let gap = min_eig(&inst.a.try_sub(b)?)?;
    let m = inst.margin.unwrap_or(gap);
    let slack = ctx.tol.at_scale(hermitian_norm(&inst.a)?);
    if !(m > 0.0) || gap < m - slack {
        return Ok(skipped(fam, format!("A − B ≥ m > 0 fails (m = {m:.6e}, λ_min(A − B) = {gap:.6e})")));
    }
    let mut h = Hypotheses::new(fam, inst, ctx);
    let ok = p >= 1.0 && r >= 0.0 && q >= 1.0 && (1.0 + r) * q >= p + r;
    h.window(ok, || format!("need p ≥ 1, r ≥ 0, q ≥ 1, (1+r)q ≥ p+r; got (p, q, r) = ({p}, {q}, {r})"));
    let notes = gate!(h);
    let norm_a = hermitian_norm(&inst.a)?;
    let inner = pw(&inst.a, 1.0 + r)?.add_scalar(-m * fmath::pow(min_eig(&inst.a)?, r));
    let c = fmath::pow(norm_a, (p + r) / q) - fmath::pow(hermitian_norm(&inner)?, (p + r) / (q * (1.0 + r)));
    let sandwich = pw(b, p)?.congruence(&pw(&inst.a, r / 2.0)?);
    let rhs = pw(&inst.a, (p + r) / q)?.try_sub(&pw(&sandwich, 1.0 / q)?)?;
    let lhs = HermitianMatrix::zeros(rhs.dim()).add_scalar(c);
    Ok(finish(build(fam, lhs, rhs, ctx)?, Some(c), notes))
}

fn main2(fam: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    require!(fam, positive_definite(&inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    let (alpha, beta) = if fam == Family::CorLc {
        let g = inst.params.gamma()?;
        h.window((0.5..=1.0).contains(&g), || format!("gamma = {g} outside [1/2, 1]"));
        (1.0, g)
    } else {
        let (a, b) = (inst.params.alpha()?, inst.params.beta()?);
        h.window(b >= 0.0 && b < a && a <= 2.0 * b, || format!("need beta < alpha ≤ 2beta; got ({a}, {b})"));
        (a, b)
    };
    let notes = gate!(h);
    let ratio = beta / alpha;
    if !(0.5..=1.0).contains(&ratio) {
        return Ok(skipped(fam, format!("ω is undefined at beta/alpha = {ratio}")));
    }
    let xa = pw(&inst.a, alpha)?;
    let pa = inst.phi(&xa)?;
    let pb = inst.phi(&pw(&inst.a, beta)?)?;
    let w = omega(&inst.phi, &xa, ratio)?.value;
    let top = pw(&pa, 1.0 + ratio)?;
    let shift = w * fmath::pow(hermitian_norm(&pw(&pa, -ratio)?)?, -2.0 / ratio);
    let inner = pw(&pa, 2.0 + ratio)?.add_scalar(-shift);
    let c = hermitian_norm(&top)? - fmath::pow(hermitian_norm(&inner)?, (beta + alpha) / (beta + 2.0 * alpha));
    let lhs = abs_product(&pb, &pa)?.add_scalar(c);
    Ok(finish(build(fam, lhs, top, ctx)?, Some(c), notes))
}
