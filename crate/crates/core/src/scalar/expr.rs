use alloc::boxed::Box;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::fmath;
use crate::{Error, Result};

/// Domain membership slack for closed endpoints.
pub const DOMAIN_MARGIN: f64 = 1e-9;
const VALIDATION_GRID: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    /// The variable `t`.
    Identity,
    /// `t^p`.
    Power(f64),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    /// `outer(inner(t))`.
    Compose {
        outer: Box<Expr>,
        inner: Box<Expr>,
    },
}

impl Expr {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Constant(c) => *c,
            Expr::Identity => t,
            Expr::Power(p) => power(t, *p),
            Expr::Sum(a, b) => a.eval(t) + b.eval(t),
            Expr::Product(a, b) => a.eval(t) * b.eval(t),
            Expr::Quotient(a, b) => a.eval(t) / b.eval(t),
            Expr::Compose { outer, inner } => outer.eval(inner.eval(t)),
        }
    }

    fn as_power(&self) -> Option<f64> {
        match self {
            Expr::Identity => Some(1.0),
            Expr::Power(p) => Some(*p),
            _ => None,
        }
    }

    fn is_constant(&self, c: f64) -> bool {
        matches!(self, Expr::Constant(x) if *x == c)
    }

    fn from_power(p: f64) -> Expr {
        if p == 1.0 {
            Expr::Identity
        } else if p == 0.0 {
            Expr::Constant(1.0)
        } else {
            Expr::Power(p)
        }
    }

    /// Folds power arithmetic and unit constants. Valid on `t > 0`.
    pub fn simplify(self) -> Expr {
        match self {
            Expr::Power(p) => Expr::from_power(p),
            Expr::Sum(a, b) => Expr::Sum(Box::new(a.simplify()), Box::new(b.simplify())),
            Expr::Product(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                if a.is_constant(1.0) {
                    return b;
                }
                if b.is_constant(1.0) {
                    return a;
                }
                if let (Some(p), Some(q)) = (a.as_power(), b.as_power()) {
                    return Expr::from_power(p + q);
                }
                if let (Expr::Constant(x), Expr::Constant(y)) = (&a, &b) {
                    return Expr::Constant(x * y);
                }
                Expr::Product(Box::new(a), Box::new(b))
            }
            Expr::Quotient(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                if b.is_constant(1.0) {
                    return a;
                }
                if let (Some(p), Some(q)) = (a.as_power(), b.as_power()) {
                    return Expr::from_power(p - q);
                }
                if let (Some(q), true) = (b.as_power(), a.is_constant(1.0)) {
                    return Expr::from_power(-q);
                }
                Expr::Quotient(Box::new(a), Box::new(b))
            }
            Expr::Compose { outer, inner } => {
                let (outer, inner) = (outer.simplify(), inner.simplify());
                if matches!(inner, Expr::Identity) {
                    return outer;
                }
                match (&outer, &inner) {
                    (Expr::Identity, _) => inner,
                    (Expr::Constant(c), _) => Expr::Constant(*c),
                    (Expr::Power(r), _) if inner.as_power().is_some() => {
                        Expr::from_power(r * inner.as_power().unwrap_or(1.0))
                    }
                    _ => Expr::Compose { outer: Box::new(outer), inner: Box::new(inner) },
                }
            }
            other => other,
        }
    }

    fn has_quotient(&self) -> bool {
        match self {
            Expr::Quotient(..) => true,
            Expr::Sum(a, b) | Expr::Product(a, b) => a.has_quotient() || b.has_quotient(),
            Expr::Compose { outer, inner } => outer.has_quotient() || inner.has_quotient(),
            _ => false,
        }
    }

    /// Pushes every quotient denominator evaluated at `t`, in traversal order.
    fn denominators(&self, t: f64, out: &mut Vec<f64>) {
        match self {
            Expr::Quotient(a, b) => {
                out.push(b.eval(t));
                a.denominators(t, out);
                b.denominators(t, out);
            }
            Expr::Sum(a, b) | Expr::Product(a, b) => {
                a.denominators(t, out);
                b.denominators(t, out);
            }
            Expr::Compose { outer, inner } => {
                outer.denominators(inner.eval(t), out);
                inner.denominators(t, out);
            }
            _ => {}
        }
    }
}

fn power(t: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 1.0 {
        t
    } else if p == 2.0 {
        t * t
    } else {
        fmath::pow(t, p)
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    write!(f, "{x}")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) => {
                write!(f, "const(")?;
                write_num(f, *c)?;
                write!(f, ")")
            }
            Expr::Identity => write!(f, "t"),
            Expr::Power(p) => {
                write!(f, "pow(t,")?;
                write_num(f, *p)?;
                write!(f, ")")
            }
            Expr::Sum(a, b) => write!(f, "add({a},{b})"),
            Expr::Product(a, b) => write!(f, "mul({a},{b})"),
            Expr::Quotient(a, b) => write!(f, "div({a},{b})"),
            Expr::Compose { outer, inner } => match outer.as_ref() {
                Expr::Power(p) => {
                    write!(f, "pow({inner},")?;
                    write_num(f, *p)?;
                    write!(f, ")")
                }
                _ => write!(f, "compose({outer},{inner})"),
            },
        }
    }
}

/// Real interval with endpoints in `[0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    /// `(0, ∞)`.
    pub const POSITIVE: Interval =
        Interval { lower: 0.0, upper: f64::INFINITY, lower_closed: false, upper_closed: false };

    pub fn closed(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, true, true)
    }

    pub fn new(lower: f64, upper: f64, lower_closed: bool, upper_closed: bool) -> Result<Self> {
        if !(lower >= 0.0) || !(upper > lower) || lower.is_infinite() {
            return Err(Error::InvalidParameter(format!("bad interval [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper, lower_closed, upper_closed: upper_closed && upper.is_finite() })
    }

    pub fn contains(&self, x: f64) -> bool {
        let margin = |e: f64| DOMAIN_MARGIN * e.abs().max(1.0);
        let above = if self.lower_closed { x >= self.lower - margin(self.lower) } else { x > self.lower };
        let below = if self.upper.is_infinite() {
            x.is_finite()
        } else if self.upper_closed {
            x <= self.upper + margin(self.upper)
        } else {
            x < self.upper
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Result<Interval> {
        let (lower, lower_closed) = if self.lower > other.lower {
            (self.lower, self.lower_closed)
        } else if other.lower > self.lower {
            (other.lower, other.lower_closed)
        } else {
            (self.lower, self.lower_closed && other.lower_closed)
        };
        let (upper, upper_closed) = if self.upper < other.upper {
            (self.upper, self.upper_closed)
        } else if other.upper < self.upper {
            (other.upper, other.upper_closed)
        } else {
            (self.upper, self.upper_closed && other.upper_closed)
        };
        Interval::new(lower, upper, lower_closed, upper_closed)
    }

    /// Finite sampling window `[lo, hi]` inside the interval, clipped to `[floor, ceil]`.
    pub fn sampling_window(&self, floor: f64, ceil: f64) -> (f64, f64) {
        let lo = if self.lower_closed { self.lower } else { self.lower * (1.0 + 1e-6) + 1e-12 };
        let hi = if self.upper.is_infinite() {
            ceil
        } else if self.upper_closed {
            self.upper
        } else {
            self.upper * (1.0 - 1e-6)
        };
        let lo = lo.max(floor).min(hi);
        let hi = hi.min(ceil).max(lo);
        (lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lower_closed { '[' } else { '(' };
        let r = if self.upper_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lower, self.upper)
    }
}

/// A scalar function on an interval of the positive half-line.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFn {
    expr: Expr,
    domain: Interval,
}

/// Functions built from `f` (and optionally `g`) by [`ScalarFn::derive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeriveKind {
    /// `t·f(t)`
    TTimesF,
    /// `t / f(t)`
    TOverF,
    /// `f(t)^r`
    FPowR(f64),
    /// `f(t)·g(t) / t`
    FgOverT,
    /// `t / (f(t)·g(t))`
    TOverFg,
    /// `t·f(t)·g(t)`
    TTimesFg,
    /// `1 / f(t)`
    Reciprocal,
    /// `f(t)²`
    FSquared,
}

impl ScalarFn {
    /// Validates that `expr` is finite on a 1024-point grid of `domain` and
    /// that no quotient denominator vanishes there.
    pub fn new(expr: Expr, domain: Interval) -> Result<Self> {
        let f = Self { expr, domain };
        let (lo, hi) = domain.sampling_window(1e-3, 1e3);
        let check_quotients = f.expr.has_quotient();
        let (mut prev, mut cur) = (Vec::new(), Vec::new());
        for i in 0..VALIDATION_GRID {
            let s = i as f64 / (VALIDATION_GRID - 1) as f64;
            let t = if lo > 0.0 { lo * fmath::pow(hi / lo, s) } else { lo + (hi - lo) * s };
            let v = f.expr.eval(t);
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{f} is not finite at t = {t}")));
            }
            if check_quotients {
                cur.clear();
                f.expr.denominators(t, &mut cur);
                let sign_change =
                    prev.len() == cur.len() && prev.iter().zip(&cur).any(|(a, b): (&f64, &f64)| a * b < 0.0);
                if cur.contains(&0.0) || sign_change {
                    return Err(Error::InvalidParameter(format!("{f} has a vanishing denominator near t = {t}")));
                }
                core::mem::swap(&mut prev, &mut cur);
            }
        }
        Ok(f)
    }

    pub fn on_positive(expr: Expr) -> Result<Self> {
        Self::new(expr, Interval::POSITIVE)
    }

    /// `t^p` on `(0, ∞)`.
    pub fn power(p: f64) -> Self {
        Self { expr: Expr::from_power(p), domain: Interval::POSITIVE }
    }

    pub fn identity() -> Self {
        Self { expr: Expr::Identity, domain: Interval::POSITIVE }
    }

    pub fn constant(c: f64) -> Self {
        Self { expr: Expr::Constant(c), domain: Interval::POSITIVE }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn with_domain(&self, domain: Interval) -> Result<Self> {
        Self::new(self.expr.clone(), domain)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !self.domain.contains(t) {
            return Err(Error::Domain { value: t, domain: self.domain.to_string() });
        }
        Ok(self.expr.eval(t))
    }

    /// Evaluation without the domain check.
    pub fn eval_unchecked(&self, t: f64) -> f64 {
        self.expr.eval(t)
    }

    /// Whether the function is `c·t^p`; returns `(c, p)`.
    pub fn as_monomial(&self) -> Option<(f64, f64)> {
        match &self.expr {
            Expr::Constant(c) => Some((*c, 0.0)),
            e => e.as_power().map(|p| (1.0, p)),
        }
    }

    pub fn derive(&self, kind: DeriveKind, g: Option<&ScalarFn>) -> Result<ScalarFn> {
        let one = ScalarFn::constant(1.0);
        let g = g.unwrap_or(&one);
        let f = Box::new(self.expr.clone());
        let gx = Box::new(g.expr.clone());
        let t = || Box::new(Expr::Identity);
        let (expr, domain) = match kind {
            DeriveKind::TTimesF => (Expr::Product(t(), f), self.domain),
            DeriveKind::TOverF => (Expr::Quotient(t(), f), self.domain),
            DeriveKind::FPowR(r) => (Expr::Compose { outer: Box::new(Expr::Power(r)), inner: f }, self.domain),
            DeriveKind::Reciprocal => (Expr::Quotient(Box::new(Expr::Constant(1.0)), f), self.domain),
            DeriveKind::FSquared => (Expr::Compose { outer: Box::new(Expr::Power(2.0)), inner: f }, self.domain),
            DeriveKind::FgOverT => {
                (Expr::Quotient(Box::new(Expr::Product(f, gx)), t()), self.domain.intersect(&g.domain)?)
            }
            DeriveKind::TOverFg => {
                (Expr::Quotient(t(), Box::new(Expr::Product(f, gx))), self.domain.intersect(&g.domain)?)
            }
            DeriveKind::TTimesFg => {
                (Expr::Product(t(), Box::new(Expr::Product(f, gx))), self.domain.intersect(&g.domain)?)
            }
        };
        Ok(ScalarFn { expr: expr.simplify(), domain })
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}
