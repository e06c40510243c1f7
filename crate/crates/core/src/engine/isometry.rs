use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::hypothesis::Hypotheses;
use super::{
    abs_product3, build, dominance, identity_link, link, positive_definite, positive_values, pw, spectral_bounds,
    ChainLink, CheckContext, CheckResult, Family, Instance, IsometryMode, Outcome,
};
use crate::constants::{kappa, three_exponents_admissible, K_three};
use crate::fmath;
use crate::linalg::{abs_op, conjugator_for_adjoint, HermitianMatrix, PolarParts};
use crate::scalar::{apply, DeriveKind, OperatorProperty};
use crate::{Error, Result};

pub(crate) fn check(family: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    match family {
        Family::Po1 | Family::Po1Reverse | Family::Tt1m1 | Family::Tt1m2 => two_function(family, inst, ctx),
        Family::Me1 => me1(inst, ctx),
        _ => Err(Error::InvalidParameter(format!("{family} is not an isometry family"))),
    }
}

/// Shape shared by the two-function families: the asymmetric side is
/// `|L·P'·R|`, the proof replaces `L` by a function of `Φ(A)` to obtain
/// `T`, swaps to `|T*|` through the polar factor of `T`, and bounds `|T*|`
/// by `h(Φ(A))`, which Choi–Davis compares with `core = Φ(h(A))`.
struct Pieces {
    asym: HermitianMatrix,
    bounded: HermitianMatrix,
    t_polar: PolarParts,
    adjoint_abs: HermitianMatrix,
    mid: HermitianMatrix,
    core: HermitianMatrix,
}

fn two_function(fam: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let f = inst.f()?;
    let g = inst.g_or_one();
    require!(fam, positive_definite(&inst.a));
    let fa = require!(fam, positive_values(f, &inst.a));
    let ga = require!(fam, positive_values(&g, &inst.a));
    let p = inst.phi(&inst.a)?;
    let fp = require!(fam, positive_values(f, &p));
    require!(fam, positive_values(&g, &p));

    let forward = matches!(fam, Family::Po1 | Family::Tt1m1);
    let mut h = Hypotheses::new(fam, inst, ctx);
    let r = match fam {
        Family::Po1 | Family::Po1Reverse => {
            let r = inst.params.r()?;
            h.window((0.0..=0.5).contains(&r), || format!("r = {r} outside [0, 1/2]"));
            let prop = if forward { OperatorProperty::Convex } else { OperatorProperty::Concave };
            h.operator(f, prop)?;
            h.operator(&g, prop)?;
            if forward {
                h.operator(&f.derive(DeriveKind::FgOverT, Some(&g))?, OperatorProperty::Concave)?;
            } else {
                h.operator(&f.derive(DeriveKind::TOverFg, Some(&g))?, OperatorProperty::Concave)?;
            }
            r
        }
        _ => {
            h.operator(&f.derive(DeriveKind::FSquared, None)?, OperatorProperty::Concave)?;
            h.operator(&g.derive(DeriveKind::FSquared, None)?, OperatorProperty::Concave)?;
            if forward {
                h.operator(&f.derive(DeriveKind::TTimesFg, Some(&g))?, OperatorProperty::Convex)?;
            } else {
                h.operator(&f.derive(DeriveKind::TOverFg, Some(&g))?, OperatorProperty::Concave)?;
            }
            1.0
        }
    };
    let notes = gate!(h);

    // Exponent applied to Φ(f(A)), Φ(g(A)) and to f(Φ(A)): −r for PO1, +1 / −1 for TT1M1 / TT1M2.
    let side = match fam {
        Family::Po1 | Family::Po1Reverse => -r,
        Family::Tt1m1 => 1.0,
        _ => -1.0,
    };
    let pr = pw(&p, r)?;
    let left = pw(&inst.phi(&fa)?, side)?;
    let right = pw(&inst.phi(&ga)?, side)?;
    let left_fp = pw(&fp, side)?;
    let h_fn = match fam {
        Family::Po1 | Family::Po1Reverse => {
            f.derive(DeriveKind::TOverFg, Some(&g))?.derive(DeriveKind::FPowR(r), None)?
        }
        Family::Tt1m1 => f.derive(DeriveKind::TTimesFg, Some(&g))?,
        _ => f.derive(DeriveKind::TOverFg, Some(&g))?,
    };
    let t = left_fp.as_matrix().try_mul(pr.as_matrix())?.try_mul(right.as_matrix())?;
    let pieces = Pieces {
        asym: abs_product3(&left, &pr, &right)?,
        bounded: abs_op(&t)?,
        adjoint_abs: abs_op(&t.adjoint())?,
        t_polar: conjugator_for_adjoint(&t)?,
        mid: apply(&h_fn, &p)?,
        core: inst.phi(&apply(&h_fn, &inst.a)?)?,
    };
    let mut result = assemble(fam, pieces, forward, ctx)?;
    result.notes.extend(notes);
    Ok(Outcome::Checked(result))
}

fn assemble(fam: Family, pc: Pieces, forward: bool, ctx: &CheckContext) -> Result<CheckResult> {
    let w = pc.t_polar.isometry.clone();
    let conjugated = pc.core.conjugate_by(&w)?;
    let swapped = HermitianMatrix::from_hermitian_part(&w.try_mul(pc.bounded.as_matrix())?.try_mul(&w.adjoint())?);
    let chain: Vec<ChainLink> = if forward {
        vec![
            link("|L·P·R| ≤ |T|", &pc.asym, &pc.bounded, ctx)?,
            identity_link("|T*| = W|T|W*", &pc.adjoint_abs, &swapped, ctx)?,
            link("|T*| ≤ h(Φ(A))", &pc.adjoint_abs, &pc.mid, ctx)?,
            link("h(Φ(A)) ≤ Φ(h(A))", &pc.mid, &pc.core, ctx)?,
        ]
    } else {
        vec![
            link("Φ(h(A)) ≤ h(Φ(A))", &pc.core, &pc.mid, ctx)?,
            link("h(Φ(A)) ≤ |T*|", &pc.mid, &pc.adjoint_abs, ctx)?,
            identity_link("|T*| = W|T|W*", &pc.adjoint_abs, &swapped, ctx)?,
            link("|T| ≤ |L·P·R|", &pc.bounded, &pc.asym, ctx)?,
        ]
    };
    let (lhs, rhs) = if forward { (pc.asym, conjugated) } else { (conjugated, pc.asym) };
    let mut r = match ctx.mode {
        IsometryMode::Constructive => build(fam, lhs, rhs, ctx)?,
        IsometryMode::Dominance => {
            let (a, b) = if forward { (lhs, pc.core) } else { (pc.core, rhs) };
            dominance(fam, a, b, ctx)?
        }
    };
    r.isometry = Some(pc.t_polar);
    r.chain = Some(chain);
    Ok(r)
}

fn me1(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::Me1;
    let (alpha, beta, gamma) = (inst.params.alpha()?, inst.params.beta()?, inst.params.gamma()?);
    let bounds = require!(fam, spectral_bounds(inst));
    let mut h = Hypotheses::new(fam, inst, ctx);
    let admissible = three_exponents_admissible(alpha, beta, gamma);
    h.window(admissible, || {
        format!("need alpha, beta ≥ 0, min ≤ gamma/2, max ≤ gamma; got ({alpha}, {beta}, {gamma})")
    });
    let notes = gate!(h);
    if !admissible {
        return Err(Error::InvalidParameter(format!("constant undefined at ({alpha}, {beta}, {gamma})")));
    }
    let hh = bounds.h();
    let (s, l) = (alpha.min(beta), alpha.max(beta));
    let hp = |e: f64| fmath::pow(hh, e);

    let y = inst.phi(&pw(&inst.a, gamma)?)?;
    let phi_l = inst.phi(&pw(&inst.a, l)?)?;
    let phi_s = inst.phi(&pw(&inst.a, s)?)?;
    let lhs = inst.phi(&pw(&inst.a, alpha + beta + gamma)?)?;
    let core = abs_product3(&phi_s, &y, &phi_l)?;
    let k = K_three(hh, alpha, beta, gamma)?;

    let y_top = pw(&y, 1.0 + (l + s) / gamma)?;
    let t = phi_l.as_matrix().try_mul(pw(&y, 1.0 + s / gamma)?.as_matrix())?;
    let t_abs = abs_op(&t)?;
    let t_adj_abs = abs_op(&t.adjoint())?;
    let polar = conjugator_for_adjoint(&t)?;
    let w = polar.isometry.clone();

    let k_top = kappa(hp(gamma), 1.0 + (l + s) / gamma)?;
    let c_b = fmath::sqrt(kappa(hp(2.0 * gamma), l / gamma)?) / fmath::sqrt(kappa(hp(l), 2.0)?);
    let c_d = fmath::sqrt(kappa(hp(s), 2.0)?) / fmath::sqrt(kappa(hp(gamma), 2.0 * s / gamma)?);
    let swapped = HermitianMatrix::from_hermitian_part(&w.try_mul(t_abs.as_matrix())?.try_mul(&w.adjoint())?);
    let chain = vec![
        link("Φ(A^{α+β+γ}) ≤ κ·Φ(A^γ)^{1+(α+β)/γ}", &lhs, &y_top.scale(k_top), ctx)?,
        link("c·Φ(A^γ)^{1+(α+β)/γ} ≤ |T|", &y_top.scale(c_b), &t_abs, ctx)?,
        identity_link("|T*| = W|T|W*", &t_adj_abs, &swapped, ctx)?,
        link("|T*| ≤ c·|Φ(A^s)Φ(A^γ)Φ(A^l)|", &t_adj_abs, &core.scale(c_d), ctx)?,
    ];
    let derived = k_top * c_d / c_b;

    let mut r = match ctx.mode {
        IsometryMode::Constructive => build(fam, lhs, core.conjugate_by(&w)?.scale(k), ctx)?,
        IsometryMode::Dominance => dominance(fam, lhs, core.scale(k), ctx)?,
    };
    r.constant = Some(k);
    r.isometry = Some(polar);
    r.chain = Some(chain);
    if (derived - k).abs() > 1e-12 * k {
        r.notes.push(format!("constant from the proof chain: {derived:.17e}"));
    }
    r.notes.extend(notes);
    Ok(Outcome::Checked(r))
}
