//! Expression grammar shared by every textual input:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' positive-integer)?
//! atom   := integer ('/' integer)? | identifier | '(' expr ')'
//! ```
//!
//! There is no implicit multiplication; `2x` is a syntax error.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, VarContext};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if d.is_ascii_digit() {
                    s.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Int(s.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if d.is_alphanumeric() || d == '_' {
                    s.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Ident(s)));
        } else {
            let op = match c {
                '\u{2212}' => '-',
                '+' | '-' | '*' | '^' | '/' | '(' | ')' => c,
                _ => return Err(Error::Syntax { pos, msg: format!("unexpected character {c:?}") }),
            };
            out.push((pos, Tok::Op(op)));
            it.next();
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a, F> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    ctx: &'a Arc<VarContext>,
    resolve: F,
}

impl<F: Fn(&str) -> Option<Polynomial>> Parser<'_, F> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peek() == &Tok::Op('*') {
            self.bump();
            acc = acc.mul(&self.unary()?);
        }
        match self.peek() {
            Tok::Ident(_) | Tok::Int(_) | Tok::Op('(') => self.err("implicit multiplication is not allowed; use `*`"),
            _ => Ok(acc),
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Int(n) => {
                let e: u32 = u32::try_from(&n).ok().filter(|e| *e >= 1).ok_or_else(|| Error::Syntax {
                    pos: self.toks[self.at - 1].0,
                    msg: "exponent must be a positive integer".into(),
                })?;
                if self.peek() == &Tok::Op('^') {
                    return self.err("chained exponents are ambiguous; add parentheses");
                }
                Ok(base.pow(e))
            }
            _ => {
                self.at -= 1;
                self.err("expected a positive integer exponent")
            }
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => {
                let value = if self.peek() == &Tok::Op('/') {
                    self.bump();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => BigRational::new(n, d),
                        Tok::Int(_) => return Err(Error::Syntax { pos, msg: "zero denominator".into() }),
                        _ => {
                            self.at -= 1;
                            return self.err("`/` is only allowed between integer literals");
                        }
                    }
                } else {
                    BigRational::from_integer(n)
                };
                Ok(Polynomial::constant(self.ctx, Rat::from_big(value)))
            }
            Tok::Ident(name) => {
                if let Some(p) = (self.resolve)(&name) {
                    return Ok(p);
                }
                match self.ctx.index_of(&name) {
                    Some(i) => Ok(Polynomial::var(self.ctx, i)),
                    None => Err(Error::UnknownVariable(name)),
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.bump() != Tok::Op(')') {
                    self.at -= 1;
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Tok::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            Tok::Op(c) => Err(Error::Syntax { pos, msg: format!("unexpected `{c}`") }),
        }
    }
}

pub fn parse_poly(text: &str, ctx: &Arc<VarContext>) -> Result<Polynomial> {
    parse_poly_with(text, ctx, |_| None)
}

/// Like [`parse_poly`], but identifiers are first offered to `resolve`, which
/// may return a named polynomial (already expressed in `ctx`).
pub fn parse_poly_with(text: &str, ctx: &Arc<VarContext>, resolve: impl Fn(&str) -> Option<Polynomial>) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, ctx, resolve };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        Tok::Op(')') => p.err("unbalanced `)`"),
        _ => p.err("unexpected trailing input"),
    }
}

/// Identifiers in order of first appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in tokenize(text)? {
        if let Tok::Ident(s) = t {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Splits `(a, b, c)` into its top-level components. A bare expression
/// without outer parentheses is a one-component tuple.
pub fn split_tuple(text: &str) -> Result<Vec<String>> {
    let t = text.trim();
    let inner = match (t.strip_prefix('('), t.strip_suffix(')')) {
        (Some(_), Some(_)) if outer_parens_match(t) => &t[1..t.len() - 1],
        _ => t,
    };
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(inner[start..i].trim().to_string());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Syntax { pos: i, msg: "unbalanced `)`".into() });
        }
    }
    parts.push(inner[start..].trim().to_string());
    if parts.iter().any(String::is_empty) {
        return Err(Error::Syntax { pos: 0, msg: "empty component in tuple".into() });
    }
    Ok(parts)
}

fn outer_parens_match(t: &str) -> bool {
    let mut depth = 0;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 != t.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Monomial, Role};
    use num_traits::One;

    fn ctx(names: &[&str]) -> Arc<VarContext> {
        VarContext::uniform(names, Role::Source).unwrap()
    }

    #[test]
    fn single_monomial() {
        let c = ctx(&["y"]);
        let p = parse_poly("y^2", &c).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&Monomial::new(vec![2])), Rat::one());
    }

    #[test]
    fn p8_member_has_four_terms() {
        let c = ctx(&["x", "y", "z"]);
        let p = parse_poly("x^3+y^3+z^3+ (-1)*x*y*z", &c).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coeff(&Monomial::new(vec![1, 1, 1])), Rat::from_int(-1));
    }

    #[test]
    fn cancellation_gives_zero() {
        let c = ctx(&["y"]);
        let p = parse_poly("y^3 - y^3", &c).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.terms().count(), 0);
    }

    #[test]
    fn rational_literals_and_unicode_minus() {
        let c = ctx(&["x"]);
        assert_eq!(parse_poly("3/6*x \u{2212} 1", &c).unwrap(), parse_poly("1/2*x-1", &c).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let c = ctx(&["x", "y"]);
        assert_eq!(parse_poly("x + w", &c), Err(Error::UnknownVariable("w".into())));
        match parse_poly("2x", &c) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("x^0", &c), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x^y", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("(x+y", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x+y)", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x/y", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x # y", &c), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn tuples() {
        assert_eq!(split_tuple("(y^2, y^3 + (z+1)*y, z)").unwrap(), vec!["y^2", "y^3 + (z+1)*y", "z"]);
        assert_eq!(split_tuple("(x+1)*(x-1)").unwrap(), vec!["(x+1)*(x-1)"]);
        assert_eq!(split_tuple("(x)").unwrap(), vec!["x"]);
        assert!(split_tuple("(x,,y)").is_err());
    }
}
