//! Seeded random instances that satisfy each family's hypotheses.
//!
//! Functions come from small catalogues of known operator convex, concave
//! or monotone functions; the corresponding [`Claim`]s are attached so the
//! checkers need not re-certify them. Exponents are drawn from the family's
//! admissible window unless [`ParamRanges`] overrides them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::hypothesis::Claim;
use super::{Family, Instance};
use crate::constants::{ExponentParams, SpectralBounds};
use crate::linalg::HermitianMatrix;
use crate::maps::{gallery_map, MapSpec};
use crate::random::{log_uniform, random_hermitian, random_index, random_positive, rng_from_seed, uniform, Rng64};
use crate::scalar::{parse_fn, DeriveKind, OperatorProperty, ScalarFn};
use crate::{Error, Result};

/// Optional `[lo, hi]` overrides for the sampled exponents.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamRanges {
    pub r: Option<(f64, f64)>,
    pub p: Option<(f64, f64)>,
    pub q: Option<(f64, f64)>,
    pub alpha: Option<(f64, f64)>,
    pub beta: Option<(f64, f64)>,
    pub gamma: Option<(f64, f64)>,
}

impl ParamRanges {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// Smallest eigenvalue drawn for `A` lies in this range.
const LOW_EIG: (f64, f64) = (0.25, 1.0);
/// Condition number `M/m` drawn log-uniformly from this range.
const CONDITION: (f64, f64) = (1.2, 30.0);

struct Draw {
    rng: Rng64,
    ranges: ParamRanges,
}

impl Draw {
    fn pick(&mut self, over: Option<(f64, f64)>, lo: f64, hi: f64) -> f64 {
        let (lo, hi) = over.unwrap_or((lo, hi));
        if hi <= lo {
            lo
        } else {
            uniform(&mut self.rng, lo, hi)
        }
    }

    fn r(&mut self, lo: f64, hi: f64) -> f64 {
        self.pick(self.ranges.r, lo, hi)
    }
    fn p(&mut self, lo: f64, hi: f64) -> f64 {
        self.pick(self.ranges.p, lo, hi)
    }
    fn q(&mut self, lo: f64, hi: f64) -> f64 {
        self.pick(self.ranges.q, lo, hi)
    }
    fn alpha(&mut self, lo: f64, hi: f64) -> f64 {
        self.pick(self.ranges.alpha, lo, hi)
    }
    fn beta(&mut self, lo: f64, hi: f64) -> f64 {
        self.pick(self.ranges.beta, lo, hi)
    }
    fn gamma(&mut self, lo: f64, hi: f64) -> f64 {
        self.pick(self.ranges.gamma, lo, hi)
    }

    fn unit(&mut self) -> f64 {
        uniform(&mut self.rng, 0.0, 1.0)
    }

    fn choose(&mut self, k: usize) -> usize {
        random_index(&mut self.rng, 0, k - 1)
    }

    /// Positive `A` with pinned extreme eigenvalues and the matching bounds.
    fn positive(&mut self, n: usize) -> (HermitianMatrix, SpectralBounds) {
        let lo = uniform(&mut self.rng, LOW_EIG.0, LOW_EIG.1);
        let hi = lo * log_uniform(&mut self.rng, CONDITION.0, CONDITION.1);
        let a = random_positive(&mut self.rng, n, lo, hi, true);
        let bounds = if n >= 2 { SpectralBounds::new(lo, hi) } else { SpectralBounds::new(lo, lo * (1.0 + 1e-6)) };
        (a, bounds.expect("lo < hi by construction"))
    }

    fn positive_above(&mut self, n: usize, floor: f64) -> HermitianMatrix {
        let hi = floor * log_uniform(&mut self.rng, CONDITION.0, CONDITION.1);
        random_positive(&mut self.rng, n, floor, hi, false)
    }

    fn map(&mut self, n: usize) -> Result<MapSpec> {
        let variant = self.choose(5);
        let seed = self.rng.next_u64();
        gallery_map(variant, n, seed)
    }
}

fn f(text: &str) -> ScalarFn {
    parse_fn(text).expect("catalogue functions parse")
}

fn claim(inst: &mut Instance, func: &ScalarFn, property: OperatorProperty) {
    inst.claims.push(Claim::new(func, property));
}

/// `f` with `f²` operator concave, and whether `f ≥ 1` everywhere on `(0, ∞)`.
fn f_square_concave(d: &mut Draw) -> (ScalarFn, bool) {
    match d.choose(3) {
        0 => (ScalarFn::power(d.unit() * 0.5), false),
        1 => (f("sqrt(add(const(1),t))"), true),
        _ => (f("sqrt(div(t,add(const(1),t)))"), false),
    }
}

/// Builds a hypothesis-satisfying instance of `family` on `n × n` inputs.
pub fn generate_instance(family: Family, n: usize, seed: u64, ranges: &ParamRanges) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidParameter(String::from("dimension must be ≥ 1")));
    }
    let mut d = Draw { rng: rng_from_seed(seed), ranges: *ranges };
    let phi = d.map(n)?;
    let (a, bounds) = d.positive(n);
    let mut inst = Instance::new(phi, a);
    inst.seed = seed;
    let mut params = ExponentParams::default();
    use Family::*;
    use OperatorProperty::*;
    match family {
        Chda => {
            let (func, prop) = match d.choose(3) {
                0 => {
                    let p = d.p(-1.0, 2.0);
                    let prop = if (0.0..=1.0).contains(&p) {
                        Some(Concave)
                    } else if (-1.0..=2.0).contains(&p) {
                        Some(Convex)
                    } else {
                        None
                    };
                    (ScalarFn::power(p), prop)
                }
                1 => (f("div(t,add(const(1),t))"), Some(Concave)),
                _ => (f("div(pow(t,2),add(const(1),t))"), Some(Convex)),
            };
            if let Some(prop) = prop {
                claim(&mut inst, &func, prop);
            }
            inst.f = Some(func);
        }
        PowerCd => params.p = Some(d.p(-1.0, 2.0)),
        Kadison | Moment => {
            let scale = log_uniform(&mut d.rng, 0.2, 5.0);
            inst.a = random_hermitian(&mut d.rng, n, scale);
            if family == Moment {
                params.r = Some(libm::floor(d.r(1.0, 3.999)));
            }
        }
        Asy | CorGamma | CorNakamoto => {
            let hi = if family == CorGamma { 0.5 } else { 1.0 };
            params.gamma = Some(d.gamma(0.0, hi));
        }
        Asy2 | M4 => {
            let b = d.beta(0.05, 2.0);
            params.beta = Some(b);
            params.alpha = Some(d.alpha(0.0, b));
        }
        Asy222 | Asy33 => {
            let b = d.beta(0.05, 1.5);
            let a = d.alpha(0.0, b);
            params.alpha = Some(a);
            params.beta = Some(b);
            params.gamma = Some(d.gamma(b / (a + b), 2.0 * b / (a + b)));
        }
        Perspective | ChOp1 | ChOp2 => {
            let (b, _) = d.positive(n);
            inst.b = Some(b);
        }
        CorF2Upper | CorF2Lower | CorF2Sandwich | PropFr => {
            let (mut func, at_least_one) = f_square_concave(&mut d);
            if family == CorF2Sandwich && !at_least_one {
                // t^γ ≥ 1 needs A ≥ 1.
                func = ScalarFn::power(d.unit() * 0.5);
                inst.a = d.positive_above(n, 1.0);
            }
            claim(&mut inst, &func.derive(DeriveKind::FSquared, None)?, Concave);
            inst.f = Some(func);
            if family == PropFr {
                params.r = Some(d.r(0.0, 0.5));
            }
        }
        BrUnitaryDominance => {
            inst.f = Some(ScalarFn::power(d.unit() * 2.0));
            inst.g = Some(if d.choose(2) == 0 { ScalarFn::power(d.unit() * 2.0) } else { f("div(t,add(const(1),t))") });
        }
        ScalarChebyshev => {
            let mut x: Vec<f64> = (0..n).map(|_| log_uniform(&mut d.rng, 0.1, 10.0)).collect();
            let mut y: Vec<f64> = (0..n).map(|_| log_uniform(&mut d.rng, 0.1, 10.0)).collect();
            x.sort_by(f64::total_cmp);
            y.sort_by(f64::total_cmp);
            if d.choose(2) == 1 {
                y.reverse();
            }
            inst.a = HermitianMatrix::from_diag(&x);
            inst.b = Some(HermitianMatrix::from_diag(&y));
        }
        Po1 => {
            let (fx, gx) = match d.choose(3) {
                0 => {
                    let s = d.unit();
                    let u = d.unit() * s;
                    (ScalarFn::power(1.0 + s), ScalarFn::power(-u))
                }
                1 => (f("div(pow(t,2),add(const(1),t))"), ScalarFn::constant(1.0)),
                _ => (ScalarFn::identity(), ScalarFn::identity()),
            };
            params.r = Some(d.r(0.0, 0.5));
            claim(&mut inst, &fx, Convex);
            claim(&mut inst, &gx, Convex);
            claim(&mut inst, &fx.derive(DeriveKind::FgOverT, Some(&gx))?, Concave);
            inst.f = Some(fx);
            inst.g = Some(gx);
        }
        Po1Reverse => {
            let (fx, gx) = match d.choose(3) {
                0 => {
                    let a = d.unit();
                    let b = d.unit() * (1.0 - a);
                    (ScalarFn::power(a), ScalarFn::power(b))
                }
                1 => (f("div(t,add(const(1),t))"), ScalarFn::constant(1.0)),
                _ => (ScalarFn::constant(1.0), ScalarFn::constant(1.0)),
            };
            params.r = Some(d.r(0.0, 0.5));
            claim(&mut inst, &fx, Concave);
            claim(&mut inst, &gx, Concave);
            claim(&mut inst, &fx.derive(DeriveKind::TOverFg, Some(&gx))?, Concave);
            inst.f = Some(fx);
            inst.g = Some(gx);
        }
        Tt1m1 | Tt1m2 => {
            let (fx, gx) = if d.choose(3) == 0 {
                (f("sqrt(add(const(1),t))"), ScalarFn::constant(1.0))
            } else {
                (ScalarFn::power(d.unit() * 0.5), ScalarFn::power(d.unit() * 0.5))
            };
            claim(&mut inst, &fx.derive(DeriveKind::FSquared, None)?, Concave);
            claim(&mut inst, &gx.derive(DeriveKind::FSquared, None)?, Concave);
            if family == Tt1m1 {
                claim(&mut inst, &fx.derive(DeriveKind::TTimesFg, Some(&gx))?, Convex);
            } else {
                claim(&mut inst, &fx.derive(DeriveKind::TOverFg, Some(&gx))?, Concave);
            }
            inst.f = Some(fx);
            inst.g = Some(gx);
        }
        Me1 => {
            let g = d.gamma(0.2, 2.0);
            let big = d.unit() * g;
            let small = d.unit() * big.min(g / 2.0);
            let (a, b) = if d.choose(2) == 0 { (big, small) } else { (small, big) };
            params.alpha = Some(d.alpha(a, a));
            params.beta = Some(d.beta(b, b));
            params.gamma = Some(g);
            inst.bounds = Some(bounds);
        }
        RevJensen => {
            inst.f = Some(match d.choose(4) {
                0 => ScalarFn::power(d.p(0.05, 0.95)),
                1 => ScalarFn::power(d.p(1.05, 3.0)),
                2 => f("sqrt(add(const(1),t))"),
                _ => f("div(t,add(const(1),t))"),
            });
        }
        RevChoi => {
            params.p = Some(if d.choose(2) == 0 { d.p(0.05, 0.95) } else { d.p(1.05, 3.0) });
        }
        ThmReverseF => {
            inst.f = Some(match d.choose(3) {
                0 => ScalarFn::power(d.unit() * 0.5),
                1 => f("sqrt(add(const(1),t))"),
                _ => ScalarFn::constant(log_uniform(&mut d.rng, 0.5, 2.0)),
            });
        }
        Elh | LemmaAsa => {
            let (b, _) = d.positive(n);
            let floor = log_uniform(&mut d.rng, 0.05, 1.0);
            let gap = d.positive_above(n, floor);
            inst.a = b.try_add(&gap)?;
            inst.b = Some(b);
            if family == Elh {
                params.r = Some(d.r(0.0, 1.0));
            } else {
                let p = d.p(1.0, 3.0);
                let r = d.r(0.0, 2.0);
                params.p = Some(p);
                params.r = Some(r);
                params.q = Some(d.q(((p + r) / (1.0 + r)).max(1.0), 3.0));
            }
        }
        OmegaGap => params.r = Some(d.r(0.5, 1.0)),
        ThmMain2 => {
            let b = d.beta(0.1, 1.0);
            params.beta = Some(b);
            params.alpha = Some(d.alpha(b * 1.001, 2.0 * b));
        }
        CorLc => params.gamma = Some(d.gamma(0.5, 1.0)),
    }
    if matches!(family, RevJensen | RevChoi | ThmReverseF | CorNakamoto | M4) {
        inst.bounds = Some(bounds);
    }
    inst.params = params;
    Ok(inst)
}

/// Every family's gallery, used by tests that cross-check claims.
pub fn sample_instances(n: usize, seed: u64) -> Result<Vec<(Family, Instance)>> {
    let mut out = vec![];
    for &fam in Family::all() {
        out.push((fam, generate_instance(fam, n, seed, &ParamRanges::default())?));
    }
    Ok(out)
}
