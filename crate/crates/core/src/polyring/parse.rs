//! Text form of polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' uint]
//! atom   := uint | 'a' | VAR | '(' expr ')'
//! ```
//!
//! `VAR` is `T` or `theta`, `a` is the generator of `F_q` over `F_p`.
//! Integer literals must be canonical prime-field representatives.
//! Output is strictly descending in the variable and never uses `-`.

use std::sync::Arc;

use super::{Poly, Var};
use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FqElem, GENERATOR_SYMBOL};

/// Upper bound on exponents accepted by the parser.
const MAX_EXPONENT: u64 = 1 << 20;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Arc<FieldSpec>,
    var: Var,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected an unsigned integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse()
            .or_else(|_| err(start, format!("integer {text} too large")))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let pos = self.pos;
            let e = self.uint()?;
            if e > MAX_EXPONENT {
                return err(pos, format!("exponent {e} exceeds {MAX_EXPONENT}"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let f = self.field;
        let start = match self.peek() {
            None => return err(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        let c = self.src[start];
        if c.is_ascii_digit() {
            let n = self.uint()?;
            if n >= f.p() as u64 {
                return Err(Error::NotInField(format!(
                    "integer {n} at position {start} is not a representative in [0, {})",
                    f.p()
                )));
            }
            return Ok(Poly::constant(f, f.from_int(n as i64), self.var));
        }
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(b')') {
                return err(self.pos, "expected ')'");
            }
            return Ok(inner);
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            if ident == self.var.name() {
                return Ok(Poly::x(f, self.var));
            }
            if ident == GENERATOR_SYMBOL {
                return match f.generator() {
                    Some(g) => Ok(Poly::constant(f, g, self.var)),
                    None => Err(Error::NotInField(format!(
                        "generator '{GENERATOR_SYMBOL}' at position {start} but F_{} is a prime field",
                        f.p()
                    ))),
                };
            }
            return err(
                start,
                format!(
                    "unknown identifier '{ident}' (expected '{}' or '{GENERATOR_SYMBOL}')",
                    self.var.name()
                ),
            );
        }
        err(start, format!("unexpected character '{}'", c as char))
    }
}

pub(super) fn parse_poly(text: &str, field: &Arc<FieldSpec>, var: Var) -> Result<Poly> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        field,
        var,
    };
    let poly = parser.expr()?;
    if parser.peek().is_some() {
        return err(parser.pos, "trailing input");
    }
    Ok(poly)
}

fn coeff_text(field: &FieldSpec, c: FqElem) -> String {
    field.format_elem(c)
}

pub(super) fn format_poly(poly: &Poly) -> String {
    let f = poly.field();
    let var = poly.var().name();
    let mut terms = Vec::new();
    for (e, &c) in poly.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        let ct = coeff_text(f, c);
        let term = if e == 0 {
            ct
        } else if c == FqElem::ONE {
            mono
        } else if ct.contains('+') {
            format!("({ct})*{mono}")
        } else {
            format!("{ct}*{mono}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}
