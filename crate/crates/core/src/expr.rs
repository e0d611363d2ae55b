//! Scalar expressions and predicates in the coefficients `e1`, `e2` (and an
//! optional polynomial variable `t`), evaluated over a finite field.
//!
//! ```text
//! pred  := conj ('or' conj)*
//! conj  := unary ('and' unary)*
//! unary := 'not' unary | 'true' | 'false' | '(' pred ')' | sum cmp sum
//! cmp   := '==' | '=' | '!='
//! sum   := term (('+'|'-') term)*
//! term  := power (('*'|'/') power)*
//! power := atom ('^' int)?
//! atom  := int | 'w' | 'e1' | 'e2' | 't' | 'sqrt' '(' sum ')' | '(' sum ')'
//! ```
//!
//! A predicate is undefined where it divides by zero.

use algebra::univariate::UniPoly;
use algebra::Field;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(u64),
    Gen,
    E1,
    E2,
    T,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Pred {
    True,
    False,
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    Eq(Expr, Expr),
    Ne(Expr, Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.col, self.msg)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Op(&'static str),
    End,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let b: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v: String = b[st..i].iter().collect();
            out.push((Tok::Int(v.parse().map_err(|_| ExprError { col, msg: "integer too large".into() })?), col));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(b[st..i].iter().collect()), col));
        } else {
            let two: String = b[i..(i + 2).min(b.len())].iter().collect();
            let op = match two.as_str() {
                "==" => Some("=="),
                "!=" => Some("!="),
                _ => None,
            };
            if let Some(op) = op {
                out.push((Tok::Op(op), col));
                i += 2;
                continue;
            }
            let op = match c {
                '+' => "+",
                '-' => "+",
                '*' => "*",
                '/' => "/",
                '^' => "^",
                '(' => "(",
                ')' => ")",
                '=' => "==",
                _ => return Err(ExprError { col, msg: format!("unexpected character `{c}`") }),
            };
            out.push((Tok::Op(op), col));
            i += 1;
        }
    }
    out.push((Tok::End, b.len() + 1));
    Ok(out)
}

struct P {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }
    fn col(&self) -> usize {
        self.toks[self.at].1
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { col: self.col(), msg: msg.into() })
    }
    fn is_op(&self, op: &str) -> bool {
        matches!(self.peek(), Tok::Op(o) if *o == op)
    }
    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }
    fn expect_op(&mut self, op: &str) -> Result<(), ExprError> {
        if self.is_op(op) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{op}`"))
        }
    }

    fn pred(&mut self) -> Result<Pred, ExprError> {
        let mut a = self.conj()?;
        while self.is_word("or") {
            self.bump();
            a = Pred::Or(Box::new(a), Box::new(self.conj()?));
        }
        Ok(a)
    }
    fn conj(&mut self) -> Result<Pred, ExprError> {
        let mut a = self.unary()?;
        while self.is_word("and") {
            self.bump();
            a = Pred::And(Box::new(a), Box::new(self.unary()?));
        }
        Ok(a)
    }
    fn unary(&mut self) -> Result<Pred, ExprError> {
        if self.is_word("not") {
            self.bump();
            return Ok(Pred::Not(Box::new(self.unary()?)));
        }
        if self.is_word("true") {
            self.bump();
            return Ok(Pred::True);
        }
        if self.is_word("false") {
            self.bump();
            return Ok(Pred::False);
        }
        if self.is_op("(") {
            // a parenthesized predicate, unless the parentheses belong to a sum
            let save = self.at;
            self.bump();
            if let Ok(p) = self.pred() {
                if self.is_op(")") {
                    self.bump();
                    if matches!(self.peek(), Tok::End | Tok::Op(")")) || self.is_word("and") || self.is_word("or") {
                        return Ok(p);
                    }
                }
            }
            self.at = save;
        }
        let a = self.sum()?;
        let op = match self.bump() {
            Tok::Op("==") => true,
            Tok::Op("!=") => false,
            _ => {
                self.at -= 1;
                return self.err("expected a comparison `==` or `!=`");
            }
        };
        let b = self.sum()?;
        Ok(if op { Pred::Eq(a, b) } else { Pred::Ne(a, b) })
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut a = self.term()?;
        while self.is_op("+") {
            self.bump();
            a = Expr::Add(Box::new(a), Box::new(self.term()?));
        }
        Ok(a)
    }
    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut a = self.power()?;
        loop {
            if self.is_op("*") {
                self.bump();
                a = Expr::Mul(Box::new(a), Box::new(self.power()?));
            } else if self.is_op("/") {
                self.bump();
                a = Expr::Div(Box::new(a), Box::new(self.power()?));
            } else {
                return Ok(a);
            }
        }
    }
    fn power(&mut self) -> Result<Expr, ExprError> {
        let a = self.atom()?;
        if self.is_op("^") {
            self.bump();
            match self.bump() {
                Tok::Int(e) if e <= 64 => return Ok(Expr::Pow(Box::new(a), e as u32)),
                _ => {
                    self.at -= 1;
                    return self.err("expected a small exponent");
                }
            }
        }
        Ok(a)
    }
    fn atom(&mut self) -> Result<Expr, ExprError> {
        let col = self.col();
        match self.bump() {
            Tok::Int(v) => Ok(Expr::Const(v & 1)),
            Tok::Ident(s) => match s.as_str() {
                "w" => Ok(Expr::Gen),
                "e1" => Ok(Expr::E1),
                "e2" => Ok(Expr::E2),
                "t" => Ok(Expr::T),
                "sqrt" => {
                    self.expect_op("(")?;
                    let e = self.sum()?;
                    self.expect_op(")")?;
                    Ok(Expr::Sqrt(Box::new(e)))
                }
                other => Err(ExprError { col, msg: format!("unknown name `{other}`") }),
            },
            Tok::Op("(") => {
                let e = self.sum()?;
                self.expect_op(")")?;
                Ok(e)
            }
            _ => Err(ExprError { col, msg: "expected a value".into() }),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ExprError> {
    let mut p = P { toks: lex(s)?, at: 0 };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_pred(s: &str) -> Result<Pred, ExprError> {
    let mut p = P { toks: lex(s)?, at: 0 };
    let e = p.pred()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Value as a polynomial in `t`; `None` where a division by zero or a
    /// non-constant square root or divisor occurs.
    pub fn eval(&self, field: &Field, e1: u64, e2: u64) -> Option<UniPoly> {
        let c = |v: u64| UniPoly::new(field, vec![v]);
        Some(match self {
            Expr::Const(v) => c(*v),
            Expr::Gen => c(field.generator_value()),
            Expr::E1 => c(e1),
            Expr::E2 => c(e2),
            Expr::T => UniPoly::x(field),
            Expr::Add(a, b) => a.eval(field, e1, e2)?.add(&b.eval(field, e1, e2)?),
            Expr::Mul(a, b) => a.eval(field, e1, e2)?.mul(&b.eval(field, e1, e2)?),
            Expr::Div(a, b) => {
                let d = b.eval(field, e1, e2)?;
                if d.degree() != Some(0) {
                    return None;
                }
                a.eval(field, e1, e2)?.scale(field.inv(d.coeffs()[0]).ok()?)
            }
            Expr::Pow(a, e) => {
                let base = a.eval(field, e1, e2)?;
                let mut out = c(1);
                for _ in 0..*e {
                    out = out.mul(&base);
                }
                out
            }
            Expr::Sqrt(a) => {
                let v = a.eval(field, e1, e2)?;
                match v.degree() {
                    None => c(0),
                    Some(0) => c(field.sqrt(v.coeffs()[0])),
                    _ => return None,
                }
            }
        })
    }

    /// Scalar value (no `t`).
    pub fn value(&self, field: &Field, e1: u64, e2: u64) -> Option<u64> {
        let p = self.eval(field, e1, e2)?;
        match p.degree() {
            None => Some(0),
            Some(0) => Some(p.coeffs()[0]),
            _ => None,
        }
    }
}

impl Pred {
    /// Truth value at `(e1, e2)`; `None` where undefined.
    pub fn eval(&self, field: &Field, e1: u64, e2: u64) -> Option<bool> {
        match self {
            Pred::True => Some(true),
            Pred::False => Some(false),
            Pred::Not(p) => p.eval(field, e1, e2).map(|b| !b),
            Pred::And(a, b) => match (a.eval(field, e1, e2), b.eval(field, e1, e2)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Pred::Or(a, b) => match (a.eval(field, e1, e2), b.eval(field, e1, e2)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Pred::Eq(a, b) => Some(a.value(field, e1, e2)? == b.value(field, e1, e2)?),
            Pred::Ne(a, b) => Some(a.value(field, e1, e2)? != b.value(field, e1, e2)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicates_over_gf4() {
        let f = Field::canonical(2);
        let p = parse_pred("e1 - e2 != 0 and e2 != 0").unwrap();
        assert_eq!(p.eval(&f, 1, 2), Some(true));
        assert_eq!(p.eval(&f, 1, 1), Some(false));
        assert_eq!(p.eval(&f, 0, 0), Some(false));
        let q = parse_pred("e2 != 0 and (e2/e1) + sqrt(e2/e1) + 1 != 0").unwrap();
        assert_eq!(q.eval(&f, 0, 1), None);
        // w^2 + w + 1 = 0 in GF(4)
        assert_eq!(q.eval(&f, 1, 2), Some(false));
        assert_eq!(q.eval(&f, 1, 1), Some(true));
        let r = parse_pred("(e1 != 0) or not (e2 == 0)").unwrap();
        assert_eq!(r.eval(&f, 0, 0), Some(false));
    }

    #[test]
    fn polynomials_in_t() {
        let f = Field::canonical(2);
        let e = parse_expr("e1*t*(t+1) + e2").unwrap();
        let p = e.eval(&f, 1, 1).unwrap();
        assert_eq!(p.coeffs(), &[1, 1, 1]);
        assert!(parse_expr("e1 +").is_err());
        assert_eq!(parse_pred("e1 + q != 0").unwrap_err().col, 6);
    }
}
