//! Precedence-climbing parser for polynomial expressions.
//!
//! Grammar: `+ -` (left), `* /` (left), unary `-`, `^` with a non-negative
//! integer exponent, integer literals, variable names, parentheses, and `z`
//! for the primitive root of unity when the ring is cyclotomic. Division is
//! only allowed by nonzero constants.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{PolyRing, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

pub(super) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && s.trim_end_matches('\'')
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
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
            out.push((start, Tok::Num(text[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            while i < bytes.len() && bytes[i] == b'\'' {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

fn binary_prec(op: char) -> Option<u8> {
    match op {
        '+' | '-' => Some(1),
        '*' | '/' => Some(2),
        _ => None,
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self, min_prec: u8) -> Result<Polynomial, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op(c) => *c,
                _ => break,
            };
            let Some(prec) = binary_prec(op) else { break };
            if prec < min_prec {
                break;
            }
            let op_pos = self.pos();
            self.at += 1;
            let rhs = self.expr(prec + 1)?;
            lhs = match op {
                '+' => lhs.add(&rhs),
                '-' => lhs.sub(&rhs),
                '*' => lhs.mul(&rhs),
                '/' => {
                    if !rhs.is_constant() || rhs.is_zero() {
                        return Err(ParseError::Syntax {
                            pos: op_pos,
                            msg: "division only by nonzero constants".into(),
                        });
                    }
                    lhs.scale(&rhs.constant_term().inv().expect("nonzero"))
                }
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.at += 1;
            return Ok(self.unary()?.neg());
        }
        if *self.peek() == Tok::Op('+') {
            self.at += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.at += 1;
        match self.peek().clone() {
            Tok::Num(e) => {
                let e: u32 = match e.try_into() {
                    Ok(e) => e,
                    Err(_) => return self.syntax("exponent too large"),
                };
                self.at += 1;
                Ok(base.pow(e))
            }
            _ => self.syntax("expected a non-negative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.ring.nvars();
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.at += 1;
                Ok(Polynomial::constant(
                    n,
                    Scalar::Rational(BigRational::from_integer(v)),
                ))
            }
            Tok::Ident(name) => {
                self.at += 1;
                if let Some(i) = self.ring.names().iter().position(|v| *v == name) {
                    Ok(Polynomial::var(n, i))
                } else if name == "z" && self.ring.field().is_some() {
                    Ok(Polynomial::constant(n, self.ring.field().unwrap().zeta()))
                } else {
                    Err(ParseError::UnknownIdentifier { pos, name })
                }
            }
            Tok::Op('(') => {
                self.at += 1;
                let inner = self.expr(1)?;
                if *self.peek() != Tok::Op(')') {
                    return self.syntax("expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Tok::End => self.syntax("unexpected end of input"),
            Tok::Op(c) => self.syntax(format!("unexpected `{c}`")),
        }
    }
}

pub(super) fn parse(ring: &PolyRing, text: &str) -> Result<Polynomial, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { ring, toks, at: 0 };
    let out = p.expr(1)?;
    if *p.peek() != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_positions() {
        let r = PolyRing::rational(&["x", "y"]);
        assert_eq!(
            r.parse("x + w"),
            Err(ParseError::UnknownIdentifier {
                pos: 4,
                name: "w".into()
            })
        );
        assert!(matches!(
            r.parse("x + "),
            Err(ParseError::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            r.parse("x $ y"),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            r.parse("x / y"),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            r.parse("2x"),
            Err(ParseError::Syntax { pos: 1, .. })
        ));
        // z is only special in cyclotomic rings
        assert!(matches!(
            r.parse("z"),
            Err(ParseError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn precedence() {
        let r = PolyRing::rational(&["x"]);
        assert_eq!(r.parse("-x^2").unwrap(), r.parse("0 - x*x").unwrap());
        assert_eq!(r.parse("2*x/4").unwrap(), r.parse("1/2*x").unwrap());
        assert_eq!(r.parse("1 - x - x").unwrap(), r.parse("1 - 2*x").unwrap());
        assert_eq!(
            r.parse("(x+1)^3").unwrap(),
            r.parse("x^3+3*x^2+3*x+1").unwrap()
        );
    }
}
