//! Small expression language for catalog fixtures.
//!
//! Grammar: sums and products of rationals, identifiers, parenthesized
//! groups, integer powers `^k` and the calls `e1(..)`, `e2(..)`, `e3(..)`
//! (elementary symmetric polynomials of the argument list). Juxtaposition
//! multiplies, so `(t+1)(t+b+1)` and `2t` parse as products.

use crate::exact::{elementary_symmetric, MPoly, Ring, Scalar};
use rug::{Integer, Rational};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("parse error in `{input}` at byte {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor `{0}` is not a constant")]
    NonConstantDivisor(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let err = |pos: usize, msg: &str| ExprError::Parse { input: input.to_string(), pos, msg: msg.to_string() };
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: Integer = input[start..i].parse().map_err(|_| err(start, "bad number"))?;
            out.push((start, Tok::Num(Rational::from(n))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(input[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, "unexpected character"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.input.len(), |(p, _)| *p)
    }

    fn fail<T>(&self, msg: &str) -> Result<T, ExprError> {
        Err(ExprError::Parse { input: self.input.to_string(), pos: self.offset(), msg: msg.to_string() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if self.starts_primary() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(q)) if q.denom() == &1 && q.numer().to_u32().is_some() => {
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), q.numer().to_u32().unwrap_or(0)))
                }
                _ => self.fail("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Expr::Num(q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                // other names followed by `(` multiply, as in `omega(t+1)`
                if is_function(&name) && self.eat('(') {
                    let mut args = vec![self.sum()?];
                    while self.eat(',') {
                        args.push(self.sum()?);
                    }
                    if !self.eat(')') {
                        return self.fail("expected `)`");
                    }
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return self.fail("expected `)`");
                }
                Ok(e)
            }
            _ => self.fail("expected a number, name or `(`"),
        }
    }
}

pub fn parse(input: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(input)?;
    let mut p = Parser { input, toks, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(e)
}

fn is_function(name: &str) -> bool {
    matches!(name, "e1" | "e2" | "e3")
}

fn symmetric<R: Ring>(name: &str, args: Vec<R>) -> Result<R, ExprError> {
    let k = match name {
        "e1" => 1,
        "e2" => 2,
        "e3" => 3,
        _ => return Err(ExprError::UnknownFunction(name.to_string())),
    };
    Ok(elementary_symmetric(&args, k))
}

impl Expr {
    /// Symbolic value; division is only allowed by constants.
    pub fn to_mpoly(&self) -> Result<MPoly, ExprError> {
        Ok(match self {
            Expr::Num(q) => MPoly::constant(q.clone()),
            Expr::Var(v) => MPoly::var(v),
            Expr::Neg(e) => -e.to_mpoly()?,
            Expr::Add(x, y) => x.to_mpoly()? + y.to_mpoly()?,
            Expr::Sub(x, y) => x.to_mpoly()? - y.to_mpoly()?,
            Expr::Mul(x, y) => x.to_mpoly()? * y.to_mpoly()?,
            Expr::Div(x, y) => {
                let d = y.to_mpoly()?;
                let q = d.as_constant().ok_or_else(|| ExprError::NonConstantDivisor(y.to_string()))?;
                if q == 0 {
                    return Err(ExprError::DivisionByZero);
                }
                x.to_mpoly()?.scale(&q.recip())
            }
            Expr::Pow(x, k) => x.to_mpoly()?.pow(*k),
            Expr::Call(f, args) => {
                symmetric(f, args.iter().map(Expr::to_mpoly).collect::<Result<Vec<_>, _>>()?)?
            }
        })
    }

    /// Numeric value given every variable.
    pub fn eval(&self, env: &BTreeMap<String, Scalar>) -> Result<Scalar, ExprError> {
        Ok(match self {
            Expr::Num(q) => Scalar::from_rational(q.clone()),
            Expr::Var(v) => env.get(v).cloned().ok_or_else(|| ExprError::UnknownVariable(v.clone()))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Add(x, y) => x.eval(env)? + y.eval(env)?,
            Expr::Sub(x, y) => x.eval(env)? - y.eval(env)?,
            Expr::Mul(x, y) => x.eval(env)? * y.eval(env)?,
            Expr::Div(x, y) => x.eval(env)?.checked_div(&y.eval(env)?).ok_or(ExprError::DivisionByZero)?,
            Expr::Pow(x, k) => x.eval(env)?.pow(*k),
            Expr::Call(f, args) => {
                symmetric(f, args.iter().map(|a| a.eval(env)).collect::<Result<Vec<_>, _>>()?)?
            }
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Add(x, y) => write!(f, "({x} + {y})"),
            Expr::Sub(x, y) => write!(f, "({x} - {y})"),
            Expr::Mul(x, y) => write!(f, "{x}*{y}"),
            Expr::Div(x, y) => write!(f, "{x}/({y})"),
            Expr::Pow(x, k) => write!(f, "({x})^{k}"),
            Expr::Call(name, args) => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{name}({})", parts.join(", "))
            }
        }
    }
}

/// Parses and converts to the symbolic algebra in one step.
pub fn symbolic(input: &str) -> Result<MPoly, ExprError> {
    parse(input)?.to_mpoly()
}
