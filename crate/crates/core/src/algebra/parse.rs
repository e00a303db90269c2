//! Reader for polynomial literals such as `7x^3-72x^2+12x^2y` or
//! `2592(8y+x)(1-x-y^2)`.
//!
//! Grammar: sums of products with optional `*`, integer powers with `^`,
//! parentheses, unary minus and exact rational literals (`2/19`). Division is
//! only allowed by a literal. Variable names come from the [`VarSet`]:
//! `x`, `y`, `t` are single letters so `xy` reads as `x*y`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Coefficient, MultiPoly, VarSet};
use crate::error::{Error, Result};

type Poly = MultiPoly<BigRational>;

pub fn parse_poly(vars: VarSet, src: &str) -> Result<Poly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        vars,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: VarSet,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&(BigRational::one() / d));
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: u32 = digits
                .parse()
                .map_err(|_| self.error("expected a nonnegative integer exponent"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<BigRational> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
        Ok(BigRational::from_integer(n))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(Poly::constant(self.vars, n))
            }
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            _ => Err(self.error("expected a term")),
        }
    }

    fn variable(&mut self) -> Result<Poly> {
        let start = self.pos;
        self.pos += 1;
        if self.src[start] == b'c' {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match self.vars.index_of(name) {
            Some(i) => Ok(Poly::var(self.vars, i)),
            None => {
                self.pos = start;
                Err(self.error(&format!("unknown variable `{name}` for {}", self.vars)))
            }
        }
    }
}

/// Shorthand for an exact rational `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Shorthand for an exact integer as a rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_int(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_products_and_powers() {
        let p = parse_poly(VarSet::Xy, "12x^2y - 12xy^2").unwrap();
        assert_eq!(p.coeff(&[2, 1]), int(12));
        assert_eq!(p.coeff(&[1, 2]), int(-12));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn parenthesised_products_expand() {
        let p = parse_poly(VarSet::Xy, "72(2y+x)(1-x-y^2)").unwrap();
        assert_eq!(p.coeff(&[0, 1]), int(144));
        assert_eq!(p.coeff(&[1, 2]), int(-72));
        assert_eq!(p.coeff(&[0, 3]), int(-144));
    }

    #[test]
    fn schwarz_variables_and_rational_literals() {
        let p = parse_poly(VarSet::C4, "c3 - 2/19 c1 c2 + c1^3").unwrap();
        assert_eq!(p.coeff(&[1, 1, 0, 0]), ratio(-2, 19));
        assert_eq!(p.coeff(&[0, 0, 1, 0]), int(1));
    }

    #[test]
    fn unary_minus_binds_to_power() {
        let p = parse_poly(VarSet::Xy, "-x^2").unwrap();
        assert_eq!(p.coeff(&[2, 0]), int(-1));
        let q = parse_poly(VarSet::Xy, "x*-y").unwrap();
        assert_eq!(q.coeff(&[1, 1]), int(-1));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_poly(VarSet::Xy, "x + z"),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(parse_poly(VarSet::Xy, "x / 0").is_err());
        assert!(parse_poly(VarSet::Xy, "(x").is_err());
        assert!(parse_poly(VarSet::C4, "c5").is_err());
    }
}
