// SPDX-License-Identifier: Apache-2.0

//! Expression grammar shared by scalar and differential-polynomial inputs.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' INT)?
//! base   := RATIONAL | VAR | '(' expr ')'
//! VAR    := 'u' INDEX ('_' ORDER)?
//! ```
//!
//! `u3` is the coordinate u³ and `u3_2` its second x-derivative `u^{3,2}`.
//! Indices are one-based in text. Division is only allowed by expressions
//! free of jet variables.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var { index: usize, order: u32 },
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |start: usize| -> usize {
        let mut j = start;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((col, Tok::Plus)),
            b'-' => out.push((col, Tok::Minus)),
            b'*' => out.push((col, Tok::Star)),
            b'/' => out.push((col, Tok::Slash)),
            b'^' => out.push((col, Tok::Caret)),
            b'(' => out.push((col, Tok::LParen)),
            b')' => out.push((col, Tok::RParen)),
            b'0'..=b'9' => {
                let j = digits(i);
                let n: BigInt = text[i..j].parse().expect("digits");
                out.push((col, Tok::Int(n)));
                i = j;
                continue;
            }
            b'u' => {
                let j = digits(i + 1);
                if j == i + 1 {
                    return Err(syntax(col, "expected coordinate index after 'u'"));
                }
                let index: usize = text[i + 1..j]
                    .parse()
                    .map_err(|_| syntax(col, "coordinate index too large"))?;
                if index == 0 {
                    return Err(syntax(col, "coordinate indices start at 1"));
                }
                let mut order = 0;
                let mut end = j;
                if j < bytes.len() && bytes[j] == b'_' {
                    let k = digits(j + 1);
                    if k == j + 1 {
                        return Err(syntax(j + 1, "expected derivative order after '_'"));
                    }
                    order = text[j + 1..k]
                        .parse()
                        .map_err(|_| syntax(j + 1, "derivative order too large"))?;
                    end = k;
                }
                out.push((col, Tok::Var { index: index - 1, order }));
                i = end;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(col, format!("unexpected character '{}'", ch)));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let col = self.col();
                    let d = self.factor()?;
                    let d = d.as_scalar().ok_or_else(|| syntax(col, "division by an expression containing jet variables"))?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    let inv = d.recip()?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let col = self.col();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| syntax(col, "exponent too large"))?;
                    let mut acc = DiffPoly::one();
                    for _ in 0..e {
                        acc = &acc * &base;
                    }
                    Ok(acc)
                }
                _ => Err(syntax(col, "expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<DiffPoly> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(DiffPoly::from_scalar(Scalar::from_rational(BigRational::from_integer(n)))),
            Some(Tok::Var { index, order }) => Ok(DiffPoly::u(index, order)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let close = self.col();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(syntax(close, "expected ')'")),
                }
            }
            Some(t) => Err(syntax(col, format!("unexpected token {:?}", t))),
            None => Err(syntax(col, "unexpected end of input")),
        }
    }
}

/// Parse a differential polynomial (no odd variables).
pub fn parse_diffpoly(text: &str) -> Result<DiffPoly> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.len() + 1,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Parse a function of the coordinates.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let d = parse_diffpoly(text)?;
    d.as_scalar().ok_or_else(|| Error::NotScalar(text.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_jets_and_coordinates() {
        let a = parse_diffpoly("u1_1^2*u2/u1 - 3*u2_3").unwrap();
        let expect = &(&(&DiffPoly::u(0, 1) * &DiffPoly::u(0, 1)) * &DiffPoly::from_scalar(Scalar::parse("u2/u1").unwrap()))
            - &DiffPoly::u(1, 3).scale_int(3);
        assert_eq!(a, expect);
        assert_eq!(parse_diffpoly("u2_0").unwrap(), DiffPoly::u(1, 0));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_scalar("3/4").unwrap(), Scalar::from_ratio(3, 4));
        assert_eq!(parse_scalar("1/2*u1").unwrap(), Scalar::coord(0).scale(&BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_scalar("-(u1)").unwrap(), -Scalar::coord(0));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_scalar("u1 + * u2") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 6),
            other => panic!("{:?}", other),
        }
        match parse_scalar("(u1 + 1") {
            Err(Error::Syntax { .. }) => {}
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_scalar("u0"), Err(Error::Syntax { column: 1, .. })));
        assert!(matches!(parse_scalar("1/(u1 - u1)"), Err(Error::DivisionByZero)));
        assert!(matches!(parse_scalar("u1_1"), Err(Error::NotScalar(_))));
        assert!(matches!(parse_diffpoly("1/u1_1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_scalar("x"), Err(Error::Syntax { column: 1, .. })));
    }
}
