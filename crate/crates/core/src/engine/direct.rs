use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::hypothesis::{scalar_min_and_monotone, Hypotheses};
use super::{
    abs_product, build, dominance, link, positive_definite, positive_values, pw, skipped, CheckContext, CheckResult,
    Family, Instance, Outcome,
};
use crate::linalg::{eig_hermitian, inverse, loewner_leq, sqrt_psd, ComplexMatrix, HermitianMatrix, ToleranceConfig};
use crate::maps::MapSpec;
use crate::scalar::{apply, DeriveKind, OperatorProperty, ScalarFn};
use crate::{Error, Result};

pub(crate) fn check(family: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    use Family::*;
    match family {
        Chda => chda(inst, ctx),
        PowerCd => power_cd(inst, ctx),
        Kadison => kadison(inst, ctx),
        Asy => asy(inst, ctx),
        Asy2 => asy2(inst, ctx),
        Asy222 | Asy33 => asy_furuta(family, inst, ctx),
        Perspective => perspective(inst, ctx),
        CorF2Upper | CorF2Lower | CorF2Sandwich => cor_f2(family, inst, ctx),
        CorGamma => cor_gamma(inst, ctx),
        PropFr => prop_fr(inst, ctx),
        BrUnitaryDominance => br_unitary(inst, ctx),
        ScalarChebyshev => chebyshev(inst, ctx),
        Moment => moment(inst, ctx),
        ChOp1 | ChOp2 => refuted(family, inst, ctx),
        _ => Err(Error::InvalidParameter(format!("{family} is not a direct family"))),
    }
}

fn with_notes(mut r: CheckResult, notes: Vec<String>) -> Outcome {
    r.notes.extend(notes);
    Outcome::Checked(r)
}

fn in_domain(f: &ScalarFn, a: &HermitianMatrix) -> Result<core::result::Result<(), String>> {
    let domain = f.domain();
    let s = eig_hermitian(a)?;
    Ok(match s.eigenvalues.iter().find(|&&x| !domain.contains(x)) {
        Some(x) => Err(format!("eigenvalue {x:.6e} of A outside the domain {domain} of {f}")),
        None => Ok(()),
    })
}

fn chda(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::Chda;
    let f = inst.f()?;
    require!(fam, in_domain(f, &inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    let convex = h.probe(f, OperatorProperty::Convex)?;
    let concave = !convex && h.probe(f, OperatorProperty::Concave)?;
    h.window(convex || concave, || format!("{f} is neither operator convex nor operator concave"));
    let notes = gate!(h);
    let f_of_phi = apply(f, &inst.phi(&inst.a)?)?;
    let phi_of_f = inst.phi(&apply(f, &inst.a)?)?;
    let r = if concave { build(fam, phi_of_f, f_of_phi, ctx)? } else { build(fam, f_of_phi, phi_of_f, ctx)? };
    Ok(with_notes(r, notes))
}

fn power_cd(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::PowerCd;
    let p = inst.params.p()?;
    require!(fam, positive_definite(&inst.a));
    let convex_window = (1.0..=2.0).contains(&p) || (-1.0..=0.0).contains(&p);
    let concave_window = (0.0..=1.0).contains(&p);
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window(convex_window || concave_window, || format!("p = {p} outside [-1, 2]"));
    let notes = gate!(h);
    let phi_a_p = pw(&inst.phi(&inst.a)?, p)?;
    let phi_of_a_p = inst.phi(&pw(&inst.a, p)?)?;
    let r = if concave_window && !convex_window {
        build(fam, phi_of_a_p, phi_a_p, ctx)?
    } else {
        build(fam, phi_a_p, phi_of_a_p, ctx)?
    };
    Ok(with_notes(r, notes))
}

fn square(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian_part(&x.as_matrix().try_mul(x.as_matrix())?))
}

fn kadison(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let pa = inst.phi(&inst.a)?;
    let lhs = square(&pa)?;
    let rhs = inst.phi(&square(&inst.a)?)?;
    Ok(Outcome::Checked(build(Family::Kadison, lhs, rhs, ctx)?))
}

fn asy(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::Asy;
    let g = inst.params.gamma()?;
    require!(fam, positive_definite(&inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window((0.0..=1.0).contains(&g), || format!("gamma = {g} outside [0, 1]"));
    let notes = gate!(h);
    let px = inst.phi(&inst.a)?;
    let lhs = abs_product(&inst.phi(&pw(&inst.a, g)?)?, &px)?;
    let rhs = pw(&px, 1.0 + g)?;
    Ok(with_notes(build(fam, lhs, rhs, ctx)?, notes))
}

fn asy2(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::Asy2;
    let (a, b) = (inst.params.alpha()?, inst.params.beta()?);
    require!(fam, positive_definite(&inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window(0.0 <= a && a <= b, || format!("need 0 ≤ alpha ≤ beta, got ({a}, {b})"));
    let notes = gate!(h);
    let lhs = abs_product(&inst.phi(&pw(&inst.a, a)?)?, &inst.phi(&pw(&inst.a, b)?)?)?;
    let rhs = inst.phi(&pw(&inst.a, a + b)?)?;
    Ok(with_notes(build(fam, lhs, rhs, ctx)?, notes))
}

fn asy_furuta(fam: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let (a, b, g) = (inst.params.alpha()?, inst.params.beta()?, inst.params.gamma()?);
    require!(fam, positive_definite(&inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    let ok = 0.0 <= a && a <= b && b > 0.0 && b / (a + b) <= g && g <= 2.0 * b / (a + b);
    h.window(ok, || {
        format!("need 0 ≤ alpha ≤ beta and beta/(alpha+beta) ≤ gamma ≤ 2beta/(alpha+beta), got ({a}, {b}, {g})")
    });
    let notes = gate!(h);
    let first = if fam == Family::Asy33 {
        pw(&inst.phi(&pw(&inst.a, -a)?)?, -g)?
    } else {
        pw(&inst.phi(&pw(&inst.a, a)?)?, g)?
    };
    let second = pw(&inst.phi(&pw(&inst.a, b)?)?, g)?;
    let lhs = abs_product(&first, &second)?;
    let rhs = inst.phi(&pw(&inst.a, (a + b) * g)?)?;
    Ok(with_notes(build(fam, lhs, rhs, ctx)?, notes))
}

fn perspective(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::Perspective;
    let b = inst.b()?;
    require!(fam, positive_definite(&inst.a));
    require!(fam, positive_definite(b));
    let lhs = inverse(&inst.phi(b)?)?.congruence(&inst.phi(&inst.a)?);
    let rhs = inst.phi(&inverse(b)?.congruence(&inst.a))?;
    Ok(Outcome::Checked(build(fam, lhs, rhs, ctx)?))
}

fn cor_f2(fam: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let f = inst.f()?;
    require!(fam, positive_definite(&inst.a));
    let fa = require!(fam, positive_values(f, &inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.operator(&f.derive(DeriveKind::FSquared, None)?, OperatorProperty::Concave)?;
    if fam == Family::CorF2Sandwich {
        let min_f = eig_hermitian(&fa)?.min();
        h.window(min_f >= 1.0 - 1e-12, || format!("f(A) ≥ 1 fails (min f = {min_f:.6e})"));
    }
    let notes = gate!(h);
    let pa = inst.phi(&inst.a)?;
    let pf = inst.phi(&fa)?;
    let upper_rhs = inst.phi(&apply(&f.derive(DeriveKind::TTimesF, None)?, &inst.a)?)?;
    let lower_lhs = inst.phi(&apply(&f.derive(DeriveKind::TOverF, None)?, &inst.a)?)?;
    let inv_abs = abs_product(&inverse(&pf)?, &pa)?;
    let r = match fam {
        Family::CorF2Upper => build(fam, abs_product(&pf, &pa)?, upper_rhs, ctx)?,
        Family::CorF2Lower => build(fam, lower_lhs, inv_abs, ctx)?,
        _ => {
            let direct = abs_product(&pf, &pa)?;
            let chain = alloc::vec![
                link("Φ(A/f(A)) ≤ |Φ(f(A))⁻¹Φ(A)|", &lower_lhs, &inv_abs, ctx)?,
                link("|Φ(f(A))⁻¹Φ(A)| ≤ |Φ(f(A))Φ(A)|", &inv_abs, &direct, ctx)?,
                link("|Φ(f(A))Φ(A)| ≤ Φ(Af(A))", &direct, &upper_rhs, ctx)?,
            ];
            let mut r = build(fam, lower_lhs, upper_rhs, ctx)?;
            r.verdict = chain.iter().fold(r.verdict, |v, l| v.and(l.verdict));
            r.chain = Some(chain);
            r
        }
    };
    Ok(with_notes(r, notes))
}

fn cor_gamma(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::CorGamma;
    let g = inst.params.gamma()?;
    require!(fam, positive_definite(&inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window((0.0..=0.5).contains(&g), || format!("gamma = {g} outside [0, 1/2]"));
    let notes = gate!(h);
    let pa = inst.phi(&inst.a)?;
    let pg = inst.phi(&pw(&inst.a, g)?)?;
    let upper = abs_product(&pg, &pa)?;
    let upper_rhs = inst.phi(&pw(&inst.a, 1.0 + g)?)?;
    let lower_lhs = inst.phi(&pw(&inst.a, 1.0 - g)?)?;
    let lower = abs_product(&inverse(&pg)?, &pa)?;
    let chain = alloc::vec![
        link("|Φ(A^γ)Φ(A)| ≤ Φ(A^{1+γ})", &upper, &upper_rhs, ctx)?,
        link("Φ(A^{1−γ}) ≤ |Φ(A^γ)⁻¹Φ(A)|", &lower_lhs, &lower, ctx)?,
    ];
    let mut r = build(fam, upper, upper_rhs, ctx)?;
    r.verdict = r.verdict.and(chain[1].verdict);
    r.chain = Some(chain);
    Ok(with_notes(r, notes))
}

fn prop_fr(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::PropFr;
    let f = inst.f()?;
    let r = inst.params.r()?;
    require!(fam, positive_definite(&inst.a));
    let fa = require!(fam, positive_values(f, &inst.a));
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window((0.0..=0.5).contains(&r), || format!("r = {r} outside [0, 1/2]"));
    h.operator(&f.derive(DeriveKind::FSquared, None)?, OperatorProperty::Concave)?;
    let notes = gate!(h);
    let left = pw(&inst.phi(&inverse(&fa)?)?, -r)?;
    let lhs = abs_product(&left, &pw(&inst.phi(&inst.a)?, r)?)?;
    let rhs = pw(&inst.phi(&apply(&f.derive(DeriveKind::TTimesF, None)?, &inst.a)?)?, r)?;
    Ok(with_notes(build(fam, lhs, rhs, ctx)?, notes))
}

fn br_unitary(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::BrUnitaryDominance;
    let h1 = inst.f()?;
    let h2 = inst.g.as_ref().ok_or_else(|| Error::InvalidParameter(String::from("instance needs g")))?;
    require!(fam, in_domain(h1, &inst.a));
    require!(fam, in_domain(h2, &inst.a));
    let s = eig_hermitian(&inst.a)?;
    let (lo, hi) = (s.min(), s.max());
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window(lo >= -1e-12 * hi.abs().max(1.0), || format!("C is not positive (λ_min = {lo:.3e})"));
    for (name, func) in [("h1", h1), ("h2", h2)] {
        let (min, monotone) = scalar_min_and_monotone(func, lo, hi)?;
        h.window(min >= 0.0 && monotone, || {
            format!("{name} = {func} is not nonnegative and nondecreasing on [{lo}, {hi}]")
        });
    }
    let notes = gate!(h);
    let a = apply(h1, &inst.a)?;
    let b = apply(h2, &inst.a)?;
    let lhs = inst.phi(&b)?.congruence(&inst.phi(&a)?);
    let rhs = inst.phi(&b.congruence(&a))?;
    Ok(with_notes(dominance(fam, lhs, rhs, ctx)?, notes))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn chebyshev(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let fam = Family::ScalarChebyshev;
    let a = inst.a.diagonal();
    let b = inst.b()?.diagonal();
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let inc = |v: &[f64]| v.windows(2).all(|w| w[0] <= w[1]);
    let dec = |v: &[f64]| v.windows(2).all(|w| w[0] >= w[1]);
    let same = (inc(&a) && inc(&b)) || (dec(&a) && dec(&b));
    let opposite = (inc(&a) && dec(&b)) || (dec(&a) && inc(&b));
    let mut h = Hypotheses::new(fam, inst, ctx);
    h.window(a.iter().chain(&b).all(|&x| x > 0.0), || String::from("sequences must be positive"));
    h.window(same || opposite, || String::from("sequences are not monotone"));
    let notes = gate!(h);
    let product_of_means = mean(&a) * mean(&b);
    let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    let mean_of_products = mean(&ab);
    let one = |v: f64| HermitianMatrix::from_diag(&[v]);
    let mut r = if same {
        build(fam, one(product_of_means), one(mean_of_products), ctx)?
    } else {
        let mut r = build(fam, one(mean_of_products), one(product_of_means), ctx)?;
        r.notes.push(String::from("reversed: one sequence is decreasing"));
        r
    };
    r.notes.extend(notes);
    Ok(Outcome::Checked(r))
}

fn moment(inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let r = inst.params.r()?;
    if !(r >= 1.0) || libm::floor(r) != r {
        return Ok(skipped(Family::Moment, format!("r = {r} is not a positive integer")));
    }
    Ok(Outcome::Checked(check_moment_matrix(&inst.phi, &inst.a, r as usize, ctx.tol)?))
}

/// Positivity of the block matrix `[Φ(A^{i+j})]_{i,j=0..r}`; `lhs` is zero.
pub fn check_moment_matrix(phi: &MapSpec, a: &HermitianMatrix, r: usize, tol: ToleranceConfig) -> Result<CheckResult> {
    if r == 0 {
        return Err(Error::InvalidParameter(String::from("moment order r must be ≥ 1")));
    }
    let mut powers = Vec::with_capacity(2 * r + 1);
    powers.push(HermitianMatrix::identity(a.dim()));
    for k in 1..=2 * r {
        let next = HermitianMatrix::from_hermitian_part(&powers[k - 1].as_matrix().try_mul(a.as_matrix())?);
        powers.push(next);
    }
    let images = powers.iter().map(|p| phi.apply(p)).collect::<Result<Vec<_>>>()?;
    let k = phi.n_out();
    let size = (r + 1) * k;
    let mut block = ComplexMatrix::zeros(size, size);
    for i in 0..=r {
        for j in 0..=r {
            let m = images[i + j].as_matrix();
            for u in 0..k {
                for v in 0..k {
                    block[(i * k + u, j * k + v)] = m[(u, v)];
                }
            }
        }
    }
    let rhs = HermitianMatrix::from_hermitian_part(&block);
    let lhs = HermitianMatrix::zeros(size);
    let verdict = loewner_leq(&lhs, &rhs, tol)?;
    Ok(CheckResult {
        family: Family::Moment,
        lhs,
        rhs,
        constant: None,
        isometry: None,
        chain: None,
        verdict,
        notes: Vec::new(),
        witness: None,
    })
}

fn refuted(fam: Family, inst: &Instance, ctx: &CheckContext) -> Result<Outcome> {
    let b = inst.b()?;
    require!(fam, positive_definite(&inst.a));
    require!(fam, positive_definite(b));
    let pa = inst.phi(&inst.a)?;
    let pb = inst.phi(b)?;
    let r = if fam == Family::ChOp1 {
        let lhs = abs_product(&pb, &pa)?;
        let rhs = inst.phi(&b.congruence(&sqrt_psd(&inst.a)?))?;
        build(fam, lhs, rhs, ctx)?
    } else {
        build(fam, pb.congruence(&pa), inst.phi(&b.congruence(&inst.a))?, ctx)?
    };
    Ok(Outcome::Checked(r))
}
