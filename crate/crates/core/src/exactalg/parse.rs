//! Element literal grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' ['-'] integer]
//! atom   := integer | variable | '(' expr ')' | '[' expr-in-u ']'
//! ```
//!
//! Integers are reduced mod `p` in positive characteristic. A bracketed
//! expression in `u` names a constant of a non-prime constant field, as a
//! polynomial over the next field down the tower.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::finite_field::FiniteField;
use super::integer::bigint_mod_u64;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::FieldElement;
use crate::error::{Error, Result};

struct Parser<'a, T> {
    src: &'a [u8],
    pos: usize,
    var: &'a str,
    make_int: &'a dyn Fn(&BigInt) -> T,
    make_var: &'a dyn Fn() -> Option<T>,
    make_bracket: &'a dyn Fn(&str) -> Result<T>,
}

impl<T: FieldElement> Parser<'_, T> {
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

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse().map_err(|_| Error::parse(start, "bad integer"))
    }

    fn expr(&mut self) -> Result<T> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<T> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.factor()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.factor()?;
                if d.is_zero() {
                    return Err(Error::parse(at, "division by zero"));
                }
                acc = acc / d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<T> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let neg = self.eat(b'-');
        let e: i64 = self
            .integer()?
            .try_into()
            .map_err(|_| Error::parse(at, "exponent too large"))?;
        base.pow_i64(if neg { -e } else { e })
            .ok_or_else(|| Error::parse(at, "division by zero"))
    }

    fn atom(&mut self) -> Result<T> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                Ok(v)
            }
            Some(b'[') => {
                self.pos += 1;
                let start = self.pos;
                let mut depth = 1;
                while self.pos < self.src.len() {
                    match self.src[self.pos] {
                        b'[' => depth += 1,
                        b']' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    self.pos += 1;
                }
                if depth != 0 {
                    return Err(Error::parse(at, "unclosed '['"));
                }
                let inner = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| Error::parse(start, "invalid utf-8"))?;
                self.pos += 1;
                (self.make_bracket)(inner).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::parse(start + pos, msg),
                    other => other,
                })
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok((self.make_int)(&n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if name != self.var {
                    return Err(Error::parse(start, format!("unknown symbol '{name}'")));
                }
                (self.make_var)().ok_or_else(|| Error::parse(start, "no variable in this field"))
            }
            Some(c) => Err(Error::parse(at, format!("unexpected '{}'", c as char))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }

    fn finish(mut self) -> Result<T> {
        let v = self.expr()?;
        if self.peek().is_some() {
            return Err(Error::parse(self.pos, "trailing input"));
        }
        Ok(v)
    }
}

/// Parse a constant of `field` written as an integer or a bracketed
/// polynomial in `u`.
pub fn parse_constant(field: &Arc<FiniteField>, src: &str) -> Result<u64> {
    let r = parse_ratfunc(field, src, "")?;
    if !r.is_polynomial() || !r.num().is_constant() {
        return Err(Error::parse(0, "expected a constant"));
    }
    Ok(r.num().coeff(0))
}

fn bracket_value(field: &Arc<FiniteField>, inner: &str) -> Result<u64> {
    let base = field
        .base()
        .ok_or_else(|| Error::parse(0, "bracketed constants need a non-prime field"))?;
    let p = parse_ratfunc(base, inner, "u")?;
    if !p.is_polynomial() {
        return Err(Error::parse(0, "bracketed constant must be a polynomial in u"));
    }
    let m = Poly::new(base, field.modulus().to_vec());
    let r = p.num().rem(&m)?;
    let mut digits = r.coeffs().to_vec();
    digits.resize(field.modulus().len() - 1, 0);
    Ok(field.encode(&digits))
}

/// Parse a rational function over `field` in the variable `var`.
pub fn parse_ratfunc(field: &Arc<FiniteField>, src: &str, var: &str) -> Result<RatFunc> {
    let make_int = |n: &BigInt| RatFunc::constant(field, bigint_mod_u64(n, field.characteristic()));
    let make_var = || (!var.is_empty()).then(|| RatFunc::t(field));
    let make_bracket = |inner: &str| Ok(RatFunc::constant(field, bracket_value(field, inner)?));
    Parser { src: src.as_bytes(), pos: 0, var, make_int: &make_int, make_var: &make_var, make_bracket: &make_bracket }
        .finish()
}

/// Parse a rational number.
pub fn parse_rational(src: &str) -> Result<BigRational> {
    let make_int = |n: &BigInt| BigRational::from_integer(n.clone());
    let make_var = || None;
    let make_bracket = |_: &str| Err(Error::parse(0, "brackets are not allowed over Q"));
    Parser { src: src.as_bytes(), pos: 0, var: "", make_int: &make_int, make_var: &make_var, make_bracket: &make_bracket }
        .finish()
}

/// Canonical printing of a rational: `-7/15`, `3`.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
