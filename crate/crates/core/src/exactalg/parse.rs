//! Infix parser for rational-function expressions such as
//! `(1 - a1*t)^-1 * (1 + 3/2*q^-1*t^2)`.

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{LaurentPoly, Rat};
use super::ratfunc::RationalFunction;
use super::var::Var;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: &str) -> Error {
        Error::parse("expression", format!("{reason} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                acc = acc.div(&self.power()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let neg = self.eat('-');
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: i32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.err("expected integer exponent"))?;
            return base.powi(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: BigInt = self.src[start..self.pos].parse().unwrap();
                Ok(RationalFunction::constant(Rat::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                    self.pos += self.peek().unwrap().len_utf8();
                }
                let name = &self.src[start..self.pos];
                Ok(RationalFunction::from_poly(LaurentPoly::monomial(
                    Rat::one(),
                    &[(Var::new(name), 1)],
                )))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Parses an expression into canonical form.
pub fn parse_rf(src: &str) -> Result<RationalFunction> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses an expression that must be a Laurent polynomial.
pub fn parse_poly(src: &str) -> Result<LaurentPoly> {
    let f = parse_rf(src)?;
    f.as_poly()
        .cloned()
        .ok_or_else(|| Error::parse("expression", format!("`{src}` is not a Laurent polynomial")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_powers() {
        let a = parse_poly("1 - 2*t^2 + t^-1").unwrap();
        let b = parse_poly("t^-1 + 1 - 2*t*t").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("-(1 - t)^2").unwrap(), parse_poly("-1 + 2*t - t^2").unwrap());
        assert_eq!(parse_poly("3/2*a").unwrap().to_string(), "3/2*a");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rf("1 + ").is_err());
        assert!(parse_rf("(1 - t").is_err());
        assert!(parse_poly("1/(1 - t)").is_err());
    }
}
