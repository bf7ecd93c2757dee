//! Textual term syntax: `S`, `K`, primitive names, decimal numerals,
//! variables `x0 x1 ...`, parentheses, and left-associative juxtaposition.
//!
//! `parse` and the `Display` printer round-trip exactly on canonical output
//! (single spaces, parentheses only around compound arguments).

use crate::term::{app, num_big, prim, s, var, Term, Tm};
use num_bigint::BigUint;
use std::fmt;
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub at: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.at, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            at: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// One application chain: `atom atom ...`.
    fn expr(&mut self) -> Result<Tm, ParseError> {
        self.skip_ws();
        let mut t = self.atom()?;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b')') => return Ok(t),
                _ => t = app(t, self.atom()?),
            }
        }
    }

    fn atom(&mut self) -> Result<Tm, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let t = self.expr()?;
                self.skip_ws();
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    Ok(t)
                } else {
                    self.err("expected ')'")
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigUint = text.parse().expect("digits");
                Ok(num_big(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(d) if d.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match word {
                    "K" => Ok(Rc::new(Term::K)),
                    "S" => Ok(s()),
                    w => {
                        if let Some(p) = crate::term::PrimOp::from_name(w) {
                            return Ok(prim(p));
                        }
                        if let Some(digits) = w.strip_prefix('x') {
                            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                                return Ok(var(digits.parse().map_err(|_| ParseError {
                                    at: start,
                                    message: "variable index too large".into(),
                                })?));
                            }
                        }
                        self.pos = start;
                        self.err(format!("unknown name `{}`", w))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected byte `{}`", c as char)),
        }
    }
}

pub fn parse(src: &str) -> Result<Tm, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let t = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

/// Canonical rendering; inverse of `parse` on its image.
pub fn print(t: &Term) -> String {
    t.to_string()
}
