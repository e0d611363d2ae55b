//! Text grammar for polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/') power)*
//! power  := atom ('^' integer)?
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! Integers are reduced mod 2 and `-` is the same as `+`. The right operand of
//! `/` must be a monomial in inverted variables. `w` denotes the generator of
//! the coefficient field. Whitespace (including newlines) is ignored.

use crate::poly::{Polynomial, Ring};
use crate::{AlgebraError, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Name(String),
    Plus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

fn err(pos: Pos, msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' | '-' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v: u64 = s
                .parse()
                .map_err(|_| err(pos, format!("integer literal too large: {s}")))?;
            col += i - start;
            out.push((Tok::Int(v), pos));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Name(chars[start..i].iter().collect()), pos));
            continue;
        }
        return Err(err(pos, format!("unexpected character `{c}`")));
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        if *self.peek() == Tok::Plus {
            self.bump();
        }
        let mut acc = self.term()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.power()?);
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.power()?;
                    let inv = d.invert_monomial().map_err(|_| {
                        err(
                            pos,
                            format!("divisor `{d}` is not a monomial in inverted variables"),
                        )
                    })?;
                    acc = acc.mul(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let (t, pos) = self.bump();
            match t {
                Tok::Int(e) if e <= u32::MAX as u64 => Ok(base.pow(e as u32)),
                _ => Err(err(pos, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let (t, pos) = self.bump();
        match t {
            Tok::Int(v) => Ok(Polynomial::constant(self.ring, v & 1)),
            Tok::Name(n) if n == "w" => Ok(Polynomial::constant(
                self.ring,
                self.ring.field().generator_value(),
            )),
            Tok::Name(n) => match self.ring.vars().index(&n) {
                Some(i) => Ok(self.ring.var_at(i)),
                None => Err(err(pos, format!("undeclared variable `{n}`"))),
            },
            Tok::LParen => {
                let e = self.expr()?;
                let (t, p) = self.bump();
                if t != Tok::RParen {
                    return Err(err(p, "expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(err(pos, "unexpected end of input")),
            other => Err(err(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse `text` as a polynomial of `ring`.
pub fn parse_polynomial(ring: &Ring, text: &str) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut p = Parser { ring, toks, at: 0 };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(err(p.pos(), format!("unexpected token {:?}", p.peek())));
    }
    Ok(out)
}

/// Shift a parse error produced on a fragment to its place in a larger text.
pub fn offset_error(e: AlgebraError, line: usize, col: usize) -> AlgebraError {
    match e {
        AlgebraError::Parse { line: l, col: c, msg } => AlgebraError::Parse {
            line: line + l - 1,
            col: if l == 1 { col + c - 1 } else { c },
            msg,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn ring() -> Ring {
        Ring::with_vars(&Field::gf2(), &["x", "y", "t"], &["t"]).unwrap()
    }

    #[test]
    fn minus_is_plus_and_integers_reduce() {
        let r = ring();
        assert_eq!(r.parse("x - y").unwrap(), r.parse("x+y").unwrap());
        assert_eq!(r.parse("3*x + 2").unwrap(), r.parse("x").unwrap());
        assert_eq!(r.parse("-t*(t-1)").unwrap(), r.parse("t^2+t").unwrap());
    }

    #[test]
    fn errors_have_positions() {
        let r = ring();
        match r.parse("x +\n  q*y").unwrap_err() {
            AlgebraError::Parse { line, col, .. } => assert_eq!((line, col), (2, 3)),
            e => panic!("{e}"),
        }
        match r.parse("x/(y)").unwrap_err() {
            AlgebraError::Parse { line, col, .. } => assert_eq!((line, col), (1, 3)),
            e => panic!("{e}"),
        }
        assert!(r.parse("x/(t+1)").is_err());
        assert!(r.parse("(x").is_err());
        assert!(r.parse("x y").is_err());
    }

    #[test]
    fn division_by_inverted_monomial() {
        let r = ring();
        let p = r.parse("x^2/t^3").unwrap();
        assert_eq!(p.terms()[0].0.exps(), &[2, 0, -3]);
    }
}
