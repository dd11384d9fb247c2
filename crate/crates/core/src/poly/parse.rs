//! Infix expressions over one named variable, e.g. `(2*j+3)/(j-1)` or
//! `z^2-1/3`. Integers, decimals, `+ - * / ^` (integer exponents, possibly
//! negative) and parentheses.

use num_bigint::BigInt;

use super::{PolyError, RationalFunction};
use crate::arith::BigRational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Var,
    Op(char),
    LParen,
    RParen,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    src: &'a str,
}

fn err(position: usize, message: impl Into<String>) -> PolyError {
    PolyError::Parse {
        position,
        message: message.into(),
    }
}

fn tokenize(src: &str, var: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let text = &src[start..i];
            out.push((
                Tok::Num(parse_decimal(text).ok_or_else(|| err(start, format!("bad number `{text}`")))?),
                start,
            ));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = &src[start..i];
            if name != var {
                return Err(err(
                    start,
                    format!("unknown identifier `{name}` (expected `{var}`)"),
                ));
            }
            out.push((Tok::Var, start));
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(err(i, format!("unexpected character `{c}`"))),
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let mut parts = text.split('.');
    let whole = parts.next()?;
    let frac = parts.next().unwrap_or("");
    if parts.next().is_some() || (whole.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = BigInt::from(10).pow(frac.len() as u32);
    Some(BigRational::new(n, d))
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RationalFunction, PolyError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.bump();
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, PolyError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            let at = self.here();
            self.bump();
            let rhs = self.unary()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                acc.try_div(&rhs).map_err(|_| err(at, "division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, PolyError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.bump();
        let at = self.here();
        let exp = self.exponent()?;
        if exp < 0 {
            let inv = base.recip().map_err(|_| err(at, "negative power of zero"))?;
            Ok(pow(&inv, exp.unsigned_abs()))
        } else {
            Ok(pow(&base, exp as u64))
        }
    }

    fn exponent(&mut self) -> Result<i64, PolyError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::LParen) => {
                let e = self.exponent()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(err(self.here(), "expected `)` after exponent")),
                }
            }
            Some(Tok::Op('-')) => Ok(-self.exponent()?),
            Some(Tok::Op('+')) => self.exponent(),
            Some(Tok::Num(n)) if n.is_integer() => {
                let v: i64 = n.numer().try_into().map_err(|_| err(at, "exponent too large"))?;
                if v > 100_000 {
                    return Err(err(at, "exponent too large"));
                }
                Ok(v)
            }
            _ => Err(err(at, "expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<RationalFunction, PolyError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(RationalFunction::constant(n)),
            Some(Tok::Var) => Ok(RationalFunction::x()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(err(self.here().min(self.src.len()), "expected `)`")),
                }
            }
            Some(t) => Err(err(at, format!("unexpected {}", describe(&t)))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(_) => "number".into(),
        Tok::Var => "variable".into(),
        Tok::Op(c) => format!("`{c}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

fn pow(base: &RationalFunction, mut e: u64) -> RationalFunction {
    let mut acc = RationalFunction::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &b;
        }
        e >>= 1;
        if e > 0 {
            b = b.square();
        }
    }
    acc
}

/// Parses `src` as a rational function of `var`.
pub fn parse_rational_function(src: &str, var: &str) -> Result<RationalFunction, PolyError> {
    let toks = tokenize(src, var)?;
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        src,
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(err(
            p.here(),
            format!("unexpected {}", describe(&p.toks[p.pos].0)),
        ));
    }
    Ok(out)
}

/// Parses a rational literal such as `-3/7`, `12` or `0.25`.
pub fn parse_rational(src: &str) -> Result<BigRational, PolyError> {
    // Reuse the expression grammar with no admissible variable name.
    let f = parse_rational_function(src, "\u{0}")?;
    f.as_constant()
        .ok_or_else(|| err(0, "expected a rational literal"))
}
