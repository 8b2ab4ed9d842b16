//! A small infix parser for polynomials in `x` and `y`, e.g. `(y^2+x^3)^2+x^6*y`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        k += 1;
        let t = match c {
            ' ' | '\t' | '\n' | '\r' => continue,
            'x' | 'X' => Tok::X,
            'y' | 'Y' => Tok::Y,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                let start = k - 1;
                while k < cs.len() && cs[k].is_ascii_digit() {
                    k += 1;
                }
                let lit: String = cs[start..k].iter().collect();
                Tok::Num(lit.parse().expect("digits"))
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        };
        out.push(t);
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::Parse("division only by nonzero constants".into()));
                    }
                    acc = acc.scale(&(Rat::from_integer(1.into()) / d.constant_term()));
                }
                Some(Tok::Num(_)) | Some(Tok::X) | Some(Tok::Y) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(n)) => {
                    let k = n.to_u64().filter(|&k| k <= 10_000).ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(Error::Parse("expected a nonnegative integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(BiPoly::constant(Rat::from_integer(n))),
            Some(Tok::X) => Ok(BiPoly::x()),
            Some(Tok::Y) => Ok(BiPoly::y()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(Tok::Minus) => Ok(self.power()?.neg()),
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse_poly(s: &str) -> Result<BiPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

/// Parses a rational literal such as `17/33`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    crate::rat::parse_rat(s).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn parses_curves() {
        let f1 = parse_poly("(y^2+x^3)^2+x^6*y").unwrap();
        assert_eq!(f1, BiPoly::from_int_terms(&[(0, 4, 1), (3, 2, 2), (6, 0, 1), (6, 1, 1)]));
        assert_eq!(parse_poly("y^3 + x^5").unwrap(), BiPoly::from_int_terms(&[(0, 3, 1), (5, 0, 1)]));
        assert_eq!(parse_poly("-2x y + 3/4").unwrap(), BiPoly::from_terms([((1, 1), rat(-2, 1)), ((0, 0), rat(3, 4))]));
        assert_eq!(parse_poly("x - (y)").unwrap(), BiPoly::x().sub(&BiPoly::y()));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("(x+y").is_err());
        assert!(parse_poly("z").is_err());
        assert!(parse_poly("x/y").is_err());
        assert!(parse_poly("x y)").is_err());
    }
}
