//! A small analytic-expression language for graph height functions.
//!
//! Grammar: `+ - * / ^`, parentheses, numeric literals, the chart variables
//! `x1..x4`, and `sin cos exp sqrt`. Expressions evaluate both over plain
//! floats and over jets, so the same height function drives the geometry and
//! any finite-difference cross-check.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jets::{Jet, JetError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
    #[error("expression domain error: {0}")]
    Domain(#[from] JetError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let mut p = Parser {
            src: src.as_bytes(),
            at: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.at != p.src.len() {
            return Err(ExprError::Parse {
                at: p.at,
                message: "trailing input".into(),
            });
        }
        Ok(e)
    }

    pub fn eval_jet(&self, vars: &[Jet; 4]) -> Result<Jet, ExprError> {
        Ok(match self {
            Expr::Const(c) => Jet::constant_any(*c),
            Expr::Var(i) => vars[*i].clone(),
            Expr::Add(a, b) => a.eval_jet(vars)? + b.eval_jet(vars)?,
            Expr::Sub(a, b) => a.eval_jet(vars)? - b.eval_jet(vars)?,
            Expr::Mul(a, b) => a.eval_jet(vars)? * b.eval_jet(vars)?,
            Expr::Div(a, b) => a.eval_jet(vars)? * b.eval_jet(vars)?.try_recip()?,
            Expr::Neg(a) => -a.eval_jet(vars)?,
            Expr::Pow(a, n) => {
                let base = a.eval_jet(vars)?;
                if *n >= 0 {
                    base.powi(*n as u32)
                } else {
                    base.powi((-n) as u32).try_recip()?
                }
            }
            Expr::Sin(a) => a.eval_jet(vars)?.sin(),
            Expr::Cos(a) => a.eval_jet(vars)?.cos(),
            Expr::Exp(a) => a.eval_jet(vars)?.exp(),
            Expr::Sqrt(a) => a.eval_jet(vars)?.try_sqrt()?,
        })
    }

    pub fn eval_f64(&self, vars: [f64; 4]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => vars[*i],
            Expr::Add(a, b) => a.eval_f64(vars) + b.eval_f64(vars),
            Expr::Sub(a, b) => a.eval_f64(vars) - b.eval_f64(vars),
            Expr::Mul(a, b) => a.eval_f64(vars) * b.eval_f64(vars),
            Expr::Div(a, b) => a.eval_f64(vars) / b.eval_f64(vars),
            Expr::Neg(a) => -a.eval_f64(vars),
            Expr::Pow(a, n) => a.eval_f64(vars).powi(*n),
            Expr::Sin(a) => a.eval_f64(vars).sin(),
            Expr::Cos(a) => a.eval_f64(vars).cos(),
            Expr::Exp(a) => a.eval_f64(vars).exp(),
            Expr::Sqrt(a) => a.eval_f64(vars).sqrt(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, n) => write!(f, "({a}^{n})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Expr, D::Error> {
        let text = String::deserialize(d)?;
        Expr::parse(&text).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    at: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.at < self.src.len() && self.src[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.at).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.at += 1;
        }
        c
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse {
            at: self.at,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.at += 1;
            let rhs = self.term()?;
            lhs = if op == b'+' {
                Expr::Add(lhs.into(), rhs.into())
            } else {
                Expr::Sub(lhs.into(), rhs.into())
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.at += 1;
            let rhs = self.factor()?;
            lhs = if op == b'*' {
                Expr::Mul(lhs.into(), rhs.into())
            } else {
                Expr::Div(lhs.into(), rhs.into())
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.at += 1;
            return Ok(Expr::Neg(self.factor()?.into()));
        }
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.at += 1;
            let neg = if self.peek() == Some(b'-') {
                self.at += 1;
                true
            } else {
                false
            };
            let start = self.at;
            while self.at < self.src.len() && self.src[self.at].is_ascii_digit() {
                self.at += 1;
            }
            if self.at == start {
                return self.err("expected integer exponent");
            }
            let n: i32 = std::str::from_utf8(&self.src[start..self.at])
                .unwrap()
                .parse()
                .map_err(|_| ExprError::Parse {
                    at: start,
                    message: "exponent out of range".into(),
                })?;
            return Ok(Expr::Pow(atom.into(), if neg { -n } else { n }));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.at += 1;
                let e = self.expr()?;
                if self.bump() != Some(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => self.err("expected a value"),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.src.len()
            && (self.src[self.at].is_ascii_digit()
                || matches!(self.src[self.at], b'.' | b'e' | b'E')
                || (self.at > start
                    && matches!(self.src[self.at], b'+' | b'-')
                    && matches!(self.src[self.at - 1], b'e' | b'E')))
        {
            self.at += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.at]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Const(v)),
            Err(_) => Err(ExprError::Parse {
                at: start,
                message: format!("bad number `{text}`"),
            }),
        }
    }

    fn ident(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.src.len()
            && (self.src[self.at].is_ascii_alphanumeric() || self.src[self.at] == b'_')
        {
            self.at += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.at]).unwrap();
        match name {
            "x1" | "x2" | "x3" | "x4" => {
                Ok(Expr::Var(name[1..].parse::<usize>().unwrap() - 1))
            }
            "pi" => Ok(Expr::Const(std::f64::consts::PI)),
            "sin" | "cos" | "exp" | "sqrt" => {
                if self.bump() != Some(b'(') {
                    return self.err(format!("expected '(' after {name}"));
                }
                let arg = self.expr()?;
                if self.bump() != Some(b')') {
                    return self.err("expected ')'");
                }
                let arg = Box::new(arg);
                Ok(match name {
                    "sin" => Expr::Sin(arg),
                    "cos" => Expr::Cos(arg),
                    "exp" => Expr::Exp(arg),
                    _ => Expr::Sqrt(arg),
                })
            }
            _ => Err(ExprError::Parse {
                at: start,
                message: format!("unknown identifier `{name}`"),
            }),
        }
    }
}
