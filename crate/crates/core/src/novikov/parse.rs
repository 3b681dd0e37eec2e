//! Text grammar for scalars and u-series.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := ("+" | "-")? factor ("*" factor)*
//! factor   := atom ("^" exponent)?
//! atom     := number ("/" number)? | "q" | "u" | "(" expr ")"
//! exponent := "-"? int | "(" "-"? int ("/" int)? ")"
//! ```
//!
//! `q` takes exponents in the lattice, `u` and parenthesized groups take
//! nonnegative integer exponents. A whole fraction-field element is written
//! `(num)/(den)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::elem::NovikovElem;
use super::frac::Frac;
use super::ring::Setup;
use super::series::USeries;
use super::NovikovError;

type UPoly = Vec<NovikovElem>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    setup: Setup,
}

fn perr(msg: impl Into<String>) -> NovikovError {
    NovikovError::Parse(msg.into())
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

    fn expect(&mut self, c: u8) -> Result<(), NovikovError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(format!("expected '{}' at position {}", c as char, self.pos)))
        }
    }

    fn int(&mut self) -> Result<BigInt, NovikovError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(format!("expected an integer at position {start}")));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<BigInt>().map_err(|e| perr(e.to_string()))
    }

    fn scalar(&self, e: NovikovElem) -> UPoly {
        if e.is_zero() {
            Vec::new()
        } else {
            vec![e]
        }
    }

    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        let n = a.len().max(b.len());
        let z = NovikovElem::zero(self.setup);
        let mut out: UPoly =
            (0..n).map(|k| a.get(k).unwrap_or(&z).add(b.get(k).unwrap_or(&z))).collect();
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    fn neg(&self, a: &UPoly) -> UPoly {
        a.iter().map(|c| c.neg()).collect()
    }

    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![NovikovElem::zero(self.setup); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    fn expr(&mut self) -> Result<UPoly, NovikovError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term_body()?;
                acc = self.add(&acc, &t);
            } else if self.eat(b'-') {
                let t = self.term_body()?;
                acc = self.add(&acc, &self.neg(&t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<UPoly, NovikovError> {
        if self.eat(b'-') {
            let t = self.term_body()?;
            Ok(self.neg(&t))
        } else {
            self.eat(b'+');
            self.term_body()
        }
    }

    fn term_body(&mut self) -> Result<UPoly, NovikovError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = self.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<BigRational, NovikovError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.int()?;
            let d = if self.eat(b'/') { self.int()? } else { BigInt::from(1) };
            self.expect(b')')?;
            if d.is_zero() {
                return Err(perr("zero denominator in exponent"));
            }
            let r = BigRational::new(n, d);
            Ok(if neg { -r } else { r })
        } else {
            let neg = self.eat(b'-');
            let n = BigRational::from_integer(self.int()?);
            Ok(if neg { -n } else { n })
        }
    }

    fn small_power(&self, e: &BigRational) -> Result<usize, NovikovError> {
        if !e.is_integer() || e.is_negative() {
            return Err(perr(format!("exponent {e} must be a nonnegative integer here")));
        }
        e.to_integer().to_usize().filter(|&k| k <= 64).ok_or_else(|| perr("exponent too large"))
    }

    fn factor(&mut self) -> Result<UPoly, NovikovError> {
        let c = self.peek().ok_or_else(|| perr("unexpected end of input"))?;
        match c {
            b'q' => {
                self.pos += 1;
                let e = if self.eat(b'^') {
                    self.exponent()?
                } else {
                    BigRational::from_integer(1.into())
                };
                let idx = self
                    .setup
                    .lattice
                    .index_of(&e)
                    .ok_or_else(|| perr(format!("exponent {e} is not in the lattice")))?;
                Ok(self.scalar(NovikovElem::q_power(self.setup, idx)))
            }
            b'u' => {
                self.pos += 1;
                let k = if self.eat(b'^') {
                    let e = self.exponent()?;
                    self.small_power(&e)?
                } else {
                    1
                };
                let mut p = vec![NovikovElem::zero(self.setup); k];
                p.push(NovikovElem::one(self.setup));
                Ok(p)
            }
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                if self.eat(b'^') {
                    let e = self.exponent()?;
                    let k = self.small_power(&e)?;
                    let mut acc = self.scalar(NovikovElem::one(self.setup));
                    for _ in 0..k {
                        acc = self.mul(&acc, &inner);
                    }
                    Ok(acc)
                } else {
                    Ok(inner)
                }
            }
            b'0'..=b'9' => {
                let n = self.int()?;
                let mut r = BigRational::from_integer(n);
                // "3/2" is a rational literal; "(a)/(b)" is handled by parse_frac
                if self.peek() == Some(b'/')
                    && self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit() || c.is_ascii_whitespace())
                {
                    self.pos += 1;
                    let d = self.int()?;
                    if d.is_zero() {
                        return Err(perr("zero denominator"));
                    }
                    r /= BigRational::from_integer(d);
                }
                let coef = self
                    .setup
                    .ring
                    .from_rational(&r)
                    .ok_or_else(|| perr(format!("{r} is not in {}", self.setup.ring)))?;
                Ok(self.scalar(NovikovElem::monomial(self.setup, 0, coef)))
            }
            other => Err(perr(format!("unexpected '{}' at position {}", other as char, self.pos))),
        }
    }

    fn finish(&mut self) -> Result<(), NovikovError> {
        if self.peek().is_some() {
            Err(perr(format!("trailing input at position {}", self.pos)))
        } else {
            Ok(())
        }
    }
}

fn parse_upoly(src: &str, setup: Setup) -> Result<UPoly, NovikovError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, setup };
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

/// Parses a finite Novikov sum such as `3*q^(1/2) - q^2 + 5*q^3`.
pub fn parse_elem(src: &str, setup: Setup) -> Result<NovikovElem, NovikovError> {
    let v = parse_upoly(src, setup)?;
    match v.len() {
        0 => Ok(NovikovElem::zero(setup)),
        1 => Ok(v.into_iter().next().unwrap()),
        _ => Err(perr(format!("'{src}' depends on u"))),
    }
}

/// Splits `A/B` at a top-level slash that is not part of a numeric literal.
fn split_fraction(src: &str) -> Option<(&str, &str)> {
    let b = src.as_bytes();
    let mut depth = 0i32;
    for (i, &c) in b.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 => {
                let before = src[..i].trim_end();
                if before.ends_with(')') {
                    return Some((&src[..i], &src[i + 1..]));
                }
            }
            _ => {}
        }
    }
    None
}

/// Parses a fraction-field element: a finite sum, or `(num)/(den)`.
pub fn parse_frac(src: &str, setup: Setup) -> Result<Frac, NovikovError> {
    match split_fraction(src) {
        Some((a, b)) => Frac::new(parse_elem(a, setup)?, parse_elem(b, setup)?),
        None => {
            let e = parse_elem(src, setup)?;
            if setup.ring.is_field() {
                Ok(Frac::from_elem(e))
            } else {
                Err(NovikovError::NonField)
            }
        }
    }
}

/// Parses a u-polynomial with Novikov coefficients, e.g. `1 + (q)*u + (3)*u^2`.
/// Returns the coefficient list without truncation.
pub fn parse_upoly_elems(src: &str, setup: Setup) -> Result<Vec<NovikovElem>, NovikovError> {
    parse_upoly(src, setup)
}

/// Parses a u-series truncated at `order`; terms at order `≥ order` are dropped.
pub fn parse_series(src: &str, setup: Setup, order: usize) -> Result<USeries<NovikovElem>, NovikovError> {
    Ok(USeries::from_coeffs(setup, parse_upoly(src, setup)?, order))
}
