//! Text grammar for polynomials.
//!
//! Grammar: integer literals, identifiers, binary `+ - *`, `^` with a
//! nonnegative integer literal exponent, unary minus, parentheses.
//! Implicit multiplication is not allowed (`x*y`, not `x y` or `xy`).

use crate::poly::{Polynomial, PolyError};
use crate::ring::{Coef, CoefficientRing};
use num_bigint::BigInt;
use std::sync::Arc;

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
#[error("syntax error at line {line}, column {col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tl, tc) = (line, col);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' | '-' | '*' | '^' | '(' | ')' => {
                chars.next();
                col += 1;
                let tok = match ch {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push(Spanned { tok, line: tl, col: tc });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Int(s.parse().expect("digits")),
                    line: tl,
                    col: tc,
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: tl,
                    col: tc,
                });
            }
            other => {
                return Err(SyntaxError {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    ring: CoefficientRing,
    vars: &'a Arc<[String]>,
    bindings: &'a [(String, Coef)],
    end_line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn err_here(&self, msg: impl Into<String>) -> SyntaxError {
        match self.peek() {
            Some(s) => SyntaxError {
                line: s.line,
                col: s.col,
                msg: msg.into(),
            },
            None => SyntaxError {
                line: self.end_line,
                col: self.end_col,
                msg: msg.into(),
            },
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Polynomial, SyntaxError> {
        let mut acc = self.term()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Plus => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t).expect("same ring");
                }
                Tok::Minus => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t).expect("same ring");
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := unary ('*' unary)*
    fn term(&mut self) -> Result<Polynomial, SyntaxError> {
        let mut acc = self.unary()?;
        while let Some(s) = self.peek() {
            if s.tok == Tok::Star {
                self.pos += 1;
                let t = self.unary()?;
                acc = acc.mul(&t).expect("same ring");
            } else {
                break;
            }
        }
        Ok(acc)
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Polynomial, SyntaxError> {
        if let Some(s) = self.peek() {
            if s.tok == Tok::Minus {
                self.pos += 1;
                return Ok(self.unary()?.neg());
            }
            if s.tok == Tok::Plus {
                self.pos += 1;
                return self.unary();
            }
        }
        self.power()
    }

    // power := atom ('^' integer)?
    fn power(&mut self) -> Result<Polynomial, SyntaxError> {
        let base = self.atom()?;
        if let Some(s) = self.peek() {
            if s.tok == Tok::Caret {
                self.pos += 1;
                let e = match self.peek() {
                    Some(Spanned {
                        tok: Tok::Int(n), ..
                    }) => {
                        let e: u32 = n.try_into().map_err(|_| {
                            self.err_here("exponent does not fit in 32 bits")
                        })?;
                        self.pos += 1;
                        e
                    }
                    _ => {
                        return Err(
                            self.err_here("expected a nonnegative integer literal after `^`")
                        )
                    }
                };
                return Ok(base.pow(e).expect("same ring"));
            }
        }
        Ok(base)
    }

    // atom := integer | identifier | '(' expr ')'
    fn atom(&mut self) -> Result<Polynomial, SyntaxError> {
        let s = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err_here("unexpected end of input"))?;
        match s.tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Polynomial::constant(
                    self.ring,
                    self.vars.clone(),
                    self.ring.from_bigint(&n),
                ))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(idx) = self.vars.iter().position(|v| v == &name) {
                    return Ok(Polynomial::var(self.ring, self.vars.clone(), idx));
                }
                if let Some((_, c)) = self.bindings.iter().find(|(n, _)| n == &name) {
                    return Ok(Polynomial::constant(self.ring, self.vars.clone(), c.clone()));
                }
                Err(SyntaxError {
                    line: s.line,
                    col: s.col,
                    msg: format!("unknown variable `{name}`"),
                })
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Spanned {
                        tok: Tok::RParen, ..
                    }) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err_here("expected `)`")),
                }
            }
            _ => Err(SyntaxError {
                line: s.line,
                col: s.col,
                msg: "expected an integer, a variable, or `(`".into(),
            }),
        }
    }
}

/// Parse a polynomial in the text grammar. `bindings` supplies values for
/// parameter identifiers that are not projective variables.
pub fn parse_polynomial(
    text: &str,
    ring: CoefficientRing,
    vars: &Arc<[String]>,
    bindings: &[(String, Coef)],
) -> Result<Polynomial, SyntaxError> {
    let toks = lex(text)?;
    let end_line = 1 + text.matches('\n').count();
    let end_col = text
        .rsplit('\n')
        .next()
        .map(|l| l.chars().count() + 1)
        .unwrap_or(1);
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ring,
        vars,
        bindings,
        end_line,
        end_col,
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(out)
}

/// Round-trip helper used by serialization: parse over the same ring and
/// variables a polynomial was printed with.
pub fn reparse(printed: &str, template: &Polynomial) -> Result<Polynomial, PolyError> {
    parse_polynomial(printed, template.ring(), template.vars(), &[])
        .map_err(|e| PolyError::UnknownVariable(e.msg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::varset;

    #[test]
    fn parses_hv_coordinate() {
        let vars = varset(&["x", "y", "z"]);
        let p = parse_polynomial(
            "x^3 + a*z^3 - y*x^2",
            CoefficientRing::ExactInteger,
            &vars,
            &[("a".into(), Coef::Int(BigInt::from(2)))],
        )
        .unwrap();
        assert_eq!(p.homogeneous_degree(), Some(3));
        assert_eq!(p.n_terms(), 3);
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let vars = varset(&["x", "y"]);
        // "x y" lexes as two identifiers with nothing between
        let e = parse_polynomial("x y", CoefficientRing::ExactInteger, &vars, &[]).unwrap_err();
        assert_eq!(e.col, 3);
        // "xy" is a single unknown identifier
        let e = parse_polynomial("xy", CoefficientRing::ExactInteger, &vars, &[]).unwrap_err();
        assert!(e.msg.contains("unknown variable"));
    }

    #[test]
    fn error_positions() {
        let vars = varset(&["x"]);
        let e = parse_polynomial("x +\n* 2", CoefficientRing::ExactInteger, &vars, &[])
            .unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        let e = parse_polynomial("x^", CoefficientRing::ExactInteger, &vars, &[]).unwrap_err();
        assert!(e.msg.contains("after `^`"));
        let e = parse_polynomial("x^y", CoefficientRing::ExactInteger, &vars, &[]).unwrap_err();
        assert!(e.msg.contains("after `^`"));
    }

    #[test]
    fn display_round_trip() {
        let vars = varset(&["x", "y", "z"]);
        let p = parse_polynomial(
            "4*x^3 - 7*y*z^2 + 1 - z^3",
            CoefficientRing::ExactInteger,
            &vars,
            &[],
        )
        .unwrap();
        let q = parse_polynomial(&p.to_string(), CoefficientRing::ExactInteger, &vars, &[])
            .unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parenthesized_binomial_products() {
        let vars = varset(&["x", "y", "z", "u", "t"]);
        let p = parse_polynomial(
            "x*u*y*(t - y)",
            CoefficientRing::ExactInteger,
            &vars,
            &[],
        )
        .unwrap();
        assert_eq!(p.homogeneous_degree(), Some(4));
        assert_eq!(p.n_terms(), 2);
    }
}
