//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (UTF-8 text, whitespace insensitive):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' nat]
//! atom   := rational | identifier | '(' expr ')'
//! ```
//!
//! `p/q` is a rational literal: `/` is only legal between integer literals.
//! `^` takes a nonnegative integer literal only. Juxtaposition is not
//! multiplication. Errors carry the byte position of the offending token.

use super::arith::{self, Coef, TermMap};
use super::ring::PolyRing;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn lex(input: &str) -> Result<Lexer> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let n: BigInt = text
                    .parse()
                    .map_err(|_| err(start, format!("bad integer literal `{text}`")))?;
                toks.push((Tok::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(input[start..i].to_string()), start));
            }
            _ => return Err(err(i, format!("unexpected character `{c}`"))),
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: input.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize> {
        let here = self.here();
        match self.next() {
            Some((t, p)) if t == want => Ok(p),
            Some((_, p)) => Err(err(p, format!("expected {what}"))),
            None => Err(err(here, format!("expected {what}, found end of input"))),
        }
    }
}

struct Parser<'r> {
    lx: Lexer,
    ring: &'r PolyRing,
}

pub(crate) fn parse_raw(input: &str, ring: &PolyRing) -> Result<TermMap> {
    let lx = lex(input)?;
    let mut p = Parser { lx, ring };
    let out = p.expr()?;
    if let Some(tok) = p.lx.peek() {
        return Err(err(p.lx.here(), format!("unexpected trailing token {tok:?}")));
    }
    Ok(out)
}

impl<'r> Parser<'r> {
    fn expr(&mut self) -> Result<TermMap> {
        let mut acc = if matches!(self.lx.peek(), Some(Tok::Minus)) {
            self.lx.next();
            arith::neg(&self.term()?)
        } else {
            self.term()?
        };
        loop {
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.next();
                    acc = arith::add(&acc, &self.term()?);
                }
                Some(Tok::Minus) => {
                    self.lx.next();
                    acc = arith::sub(&acc, &self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TermMap> {
        let mut acc = self.factor()?;
        while matches!(self.lx.peek(), Some(Tok::Star)) {
            self.lx.next();
            acc = arith::mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<TermMap> {
        let base = self.atom()?;
        if matches!(self.lx.peek(), Some(Tok::Caret)) {
            self.lx.next();
            let here = self.lx.here();
            match self.lx.next() {
                Some((Tok::Int(n), p)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| err(p, "exponent out of range"))?;
                    Ok(arith::pow(&base, e, self.ring.num_vars()))
                }
                Some((_, p)) => Err(err(p, "exponent must be a nonnegative integer literal")),
                None => Err(err(here, "expected exponent, found end of input")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<TermMap> {
        let here = self.lx.here();
        match self.lx.next() {
            Some((Tok::Int(n), _)) => {
                // rational literal p/q
                if matches!(self.lx.peek(), Some(Tok::Slash)) {
                    self.lx.next();
                    let dpos = self.lx.here();
                    match self.lx.next() {
                        Some((Tok::Int(d), p)) => {
                            if d.is_zero() {
                                return Err(err(p, "zero denominator in rational literal"));
                            }
                            Ok(arith::constant(self.ring.num_vars(), Coef::new(n, d)))
                        }
                        Some((_, p)) => {
                            Err(err(p, "`/` is only legal between integer literals"))
                        }
                        None => Err(err(dpos, "expected denominator, found end of input")),
                    }
                } else {
                    Ok(arith::constant(self.ring.num_vars(), Coef::from_integer(n)))
                }
            }
            Some((Tok::Ident(name), p)) => match self.ring.var_index(&name) {
                Some(i) => Ok(arith::var(i, self.ring.num_vars())),
                None => Err(err(p, format!("unknown variable `{name}`"))),
            },
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                self.lx.expect(Tok::RParen, "closing `)`")?;
                Ok(inner)
            }
            Some((Tok::Slash, p)) => Err(err(p, "`/` is only legal between integer literals")),
            Some((t, p)) => Err(err(p, format!("unexpected token {t:?}"))),
            None => Err(err(here, "unexpected end of input")),
        }
    }
}
