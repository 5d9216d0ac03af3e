//! Recursive descent parser for form expressions.
//!
//! ```text
//! statement := expr "=" expr
//! expr      := ["-"] term (("+" | "-") term)*
//! term      := factor (["*"] factor)*
//! factor    := primary ["^" int]
//! primary   := rational | atom | "D" ["^" int] "(" expr ")" | "(" expr ")"
//!            | "[" expr "," expr "]" ["_" int]
//!            | "Phi" "(" int ";" expr "," int "," int ";" expr "," int "," int ")"
//! rational  := int ["/" int]
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::ast::{Atom, Expr, PhiOperand};
use crate::qseries::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" | "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "integer {v}"),
            Tok::Ident(s) => write!(f, "{s:?}"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            // a lone `D` is the operator, so `D(E4)` and `DE4` lex differently
            if &text[start..i] != "D" {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*/^()[],;=_".contains(&c) {
            out.push((i, Tok::Sym(c as char)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            return Err(ParseError {
                offset: i,
                expected: vec!["a token".into()],
                found: format!("{ch:?}"),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    fn expect_u32(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Tok::Int(v) => match u32::try_from(v) {
                Ok(x) => {
                    self.bump();
                    Ok(x)
                }
                Err(_) => Err(self.error(&["integer below 2^32"])),
            },
            _ => Err(self.error(&["integer"])),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if self.is_sym('-') {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.is_sym('+') {
                self.bump();
                acc = Expr::add(acc, self.term()?);
            } else if self.is_sym('-') {
                self.bump();
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::Ident(_) => true,
            Tok::Sym(c) => matches!(c, '(' | '['),
            Tok::End => false,
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                acc = Expr::mul(acc, self.factor()?);
            } else if self.starts_factor() {
                acc = Expr::mul(acc, self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.is_sym('^') {
            self.bump();
            let k = self.expect_u32()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        const START: &[&str] = &["integer", "atom", "'D'", "'Phi'", "'('", "'['"];
        match self.peek().clone() {
            Tok::Int(p) => {
                self.bump();
                if self.is_sym('/') {
                    self.bump();
                    let q = match self.peek() {
                        Tok::Int(q) if !q.is_zero() => q.clone(),
                        Tok::Int(_) => return Err(self.error(&["nonzero denominator"])),
                        _ => return Err(self.error(&["integer"])),
                    };
                    self.bump();
                    return Ok(Expr::Rational(Rational::new(p, q)));
                }
                Ok(Expr::Rational(Rational::from_integer(p)))
            }
            Tok::Ident(name) if name == "D" => {
                self.bump();
                let order = if self.is_sym('^') {
                    self.bump();
                    self.expect_u32()?
                } else {
                    1
                };
                self.expect_sym('(')?;
                let arg = self.expr()?;
                self.expect_sym(')')?;
                Ok(Expr::derive(order, arg))
            }
            Tok::Ident(name) if name == "Phi" => {
                self.bump();
                self.expect_sym('(')?;
                let order = self.expect_u32()?;
                self.expect_sym(';')?;
                let left = self.phi_operand()?;
                self.expect_sym(';')?;
                let right = self.phi_operand()?;
                self.expect_sym(')')?;
                Ok(Expr::Phi { order, left, right })
            }
            Tok::Ident(name) => match Atom::from_name(&name) {
                Some(a) => {
                    self.bump();
                    Ok(Expr::Atom(a))
                }
                None => Err(self.error(START)),
            },
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                self.bump();
                let left = self.expr()?;
                self.expect_sym(',')?;
                let right = self.expr()?;
                self.expect_sym(']')?;
                let order = if self.is_sym('_') {
                    self.bump();
                    self.expect_u32()?
                } else {
                    1
                };
                Ok(Expr::Bracket {
                    left: Box::new(left),
                    right: Box::new(right),
                    order,
                })
            }
            _ => Err(self.error(START)),
        }
    }

    fn phi_operand(&mut self) -> Result<PhiOperand, ParseError> {
        let form = self.expr()?;
        self.expect_sym(',')?;
        let weight = self.expect_u32()?;
        self.expect_sym(',')?;
        let depth = self.expect_u32()?;
        Ok(PhiOperand {
            form: Box::new(form),
            weight,
            depth,
        })
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(&["operator", "end of input"]))
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses `lhs = rhs`.
pub fn parse_statement(text: &str) -> Result<(Expr, Expr), ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let lhs = p.expr()?;
    p.expect_sym('=')?;
    let rhs = p.expr()?;
    p.finish()?;
    Ok((lhs, rhs))
}
