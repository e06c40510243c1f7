//! Text syntax for scalar functions.
//!
//! ```text
//! expr := "t" | number | name "(" expr ("," expr)* ")"
//! ```
//!
//! | form              | meaning                 |
//! |-------------------|-------------------------|
//! | `const(c)` or `c` | constant `c`            |
//! | `pow(e,p)`        | `e^p` (`p` a number)    |
//! | `sqrt(e)`         | `e^0.5`                 |
//! | `add(a,b)`        | `a + b`                 |
//! | `mul(a,b)`        | `a · b`                 |
//! | `div(a,b)`        | `a / b`                 |
//! | `inv(e)`          | `1 / e`                 |
//! | `compose(f,g)`    | `f(g(t))`               |
//!
//! Whitespace is ignored. [`Expr`]'s `Display` emits this syntax.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::expr::{Expr, Interval, ScalarFn};
use crate::{Error, Result};

/// Parses an expression on `(0, ∞)`.
pub fn parse_fn(text: &str) -> Result<ScalarFn> {
    ScalarFn::on_positive(parse_expr(text)?)
}

pub fn parse_fn_on(text: &str, domain: Interval) -> Result<ScalarFn> {
    ScalarFn::new(parse_expr(text)?, domain)
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: String::from(message) }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'-' || s[i] == b'+') {
            i += 1;
        }
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            i += 1;
            if i < s.len() && (s[i] == b'-' || s[i] == b'+') {
                i += 1;
            }
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
        }
        let text = core::str::from_utf8(&s[start..i]).map_err(|_| self.error("invalid utf-8"))?;
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = i;
                Ok(v)
            }
            _ => Err(self.error("expected a finite number")),
        }
    }

    fn ident(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn args(&mut self, count: usize, numeric_last: bool) -> Result<(Vec<Expr>, f64)> {
        self.expect(b'(')?;
        let mut out = Vec::with_capacity(count);
        let mut last = 0.0;
        for k in 0..count {
            if k > 0 {
                self.expect(b',')?;
            }
            if numeric_last && k + 1 == count {
                last = self.number()?;
            } else {
                out.push(self.expr()?);
            }
        }
        self.expect(b')')?;
        Ok((out, last))
    }

    fn expr(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' || c == b'.' => Ok(Expr::Constant(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = String::from_utf8_lossy(self.ident()).into_owned();
                let two = |p: &mut Self| -> Result<(Box<Expr>, Box<Expr>)> {
                    let (mut v, _) = p.args(2, false)?;
                    let b = v.pop().expect("two args");
                    let a = v.pop().expect("two args");
                    Ok((Box::new(a), Box::new(b)))
                };
                let one = |p: &mut Self| -> Result<Expr> {
                    let (mut v, _) = p.args(1, false)?;
                    Ok(v.pop().expect("one arg"))
                };
                match name.as_str() {
                    "t" => Ok(Expr::Identity),
                    "const" => {
                        let (_, c) = self.args(1, true)?;
                        Ok(Expr::Constant(c))
                    }
                    "pow" => {
                        let (mut v, p) = self.args(2, true)?;
                        Ok(power_of(v.pop().expect("base"), p))
                    }
                    "sqrt" => Ok(power_of(one(self)?, 0.5)),
                    "inv" => Ok(Expr::Quotient(Box::new(Expr::Constant(1.0)), Box::new(one(self)?))),
                    "add" => two(self).map(|(a, b)| Expr::Sum(a, b)),
                    "mul" => two(self).map(|(a, b)| Expr::Product(a, b)),
                    "div" => two(self).map(|(a, b)| Expr::Quotient(a, b)),
                    "compose" => two(self).map(|(outer, inner)| Expr::Compose { outer, inner }),
                    _ => Err(Error::Parse { position: at, message: format!("unknown function '{name}'") }),
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }
}

fn power_of(base: Expr, p: f64) -> Expr {
    match base {
        Expr::Identity => Expr::Power(p),
        inner => Expr::Compose { outer: Box::new(Expr::Power(p)), inner: Box::new(inner) },
    }
}
