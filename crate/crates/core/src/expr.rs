//! Profile expressions over the energy density `t`.
//!
//! The grammar is deliberately closed: numeric constants, the variable `t`,
//! `+ - * /`, integer powers `^n`, unary minus, parentheses and `exp(...)`.
//! Division is stored as multiplication by a reciprocal node so that the
//! zero guard lives in exactly one place.
//!
//! ```
//! use natlift_core::expr::ScalarExpr;
//! let e: ScalarExpr = "1/(1+2*t)".parse().unwrap();
//! let j = e.eval_jet(0.25, 4).unwrap();
//! assert!((j.value() - 2.0 / 3.0).abs() < 1e-15);
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};

/// Arguments of reciprocal nodes closer to zero than this are rejected.
pub const RECIPROCAL_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    Const(f64),
    Var,
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Pow(Box<ScalarExpr>, i32),
    Recip(Box<ScalarExpr>),
    Exp(Box<ScalarExpr>),
}

impl ScalarExpr {
    pub fn constant(v: f64) -> Self {
        ScalarExpr::Const(v)
    }

    pub fn var() -> Self {
        ScalarExpr::Var
    }

    /// Value and derivatives up to `order` (clamped to 4) at `t`.
    pub fn eval_jet(&self, t: f64, order: usize) -> Result<Jet> {
        Ok(self.eval(t)?.truncate(order.min(MAX_ORDER)))
    }

    fn eval(&self, t: f64) -> Result<Jet> {
        Ok(match self {
            ScalarExpr::Const(v) => Jet::constant(*v),
            ScalarExpr::Var => Jet::variable(t),
            ScalarExpr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            ScalarExpr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            ScalarExpr::Pow(a, n) => {
                let base = a.eval(t)?;
                if *n < 0 {
                    guard(base, t)?;
                }
                base.powi(*n)
            }
            ScalarExpr::Recip(a) => {
                let base = a.eval(t)?;
                guard(base, t)?;
                base.recip()
            }
            ScalarExpr::Exp(a) => a.eval(t)?.exp(),
        })
    }
}

fn guard(j: Jet, t: f64) -> Result<()> {
    if j.value().abs() < RECIPROCAL_GUARD {
        return Err(Error::Domain {
            t,
            value: j.value(),
            tolerance: RECIPROCAL_GUARD,
        });
    }
    Ok(())
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarExpr::Const(v) => write!(f, "{v}"),
            ScalarExpr::Var => write!(f, "t"),
            ScalarExpr::Add(a, b) => write!(f, "({a} + {b})"),
            ScalarExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            ScalarExpr::Pow(a, n) => write!(f, "({a})^{n}"),
            ScalarExpr::Recip(a) => write!(f, "1/({a})"),
            ScalarExpr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

impl FromStr for ScalarExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' integer)?
// atom   := number | 't' | 'exp' '(' expr ')' | '(' expr ')'
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = ScalarExpr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                let neg = ScalarExpr::Mul(Box::new(ScalarExpr::Const(-1.0)), Box::new(rhs));
                lhs = ScalarExpr::Add(Box::new(lhs), Box::new(neg));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                lhs = ScalarExpr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                lhs = ScalarExpr::Mul(Box::new(lhs), Box::new(ScalarExpr::Recip(Box::new(rhs))));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarExpr> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(ScalarExpr::Mul(Box::new(ScalarExpr::Const(-1.0)), Box::new(inner)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            if self.src.get(self.pos) == Some(&b'-') {
                self.pos += 1;
            }
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let n: i32 = text
                .parse()
                .map_err(|_| self.error("exponent must be an integer literal"))?;
            return Ok(ScalarExpr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ScalarExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"t" => Ok(ScalarExpr::Var),
                    b"exp" => {
                        if !self.eat(b'(') {
                            return Err(self.error("expected '(' after exp"));
                        }
                        let e = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.error("expected ')'"));
                        }
                        Ok(ScalarExpr::Exp(Box::new(e)))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error("unknown identifier"))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<ScalarExpr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // exponent part, e.g. 1e-3
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>()
            .map(ScalarExpr::Const)
            .map_err(|_| Error::Parse {
                position: start,
                message: format!("invalid number '{text}'"),
            })
    }
}
