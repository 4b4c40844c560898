//! Exact orders of classical groups and the structure-descriptor grammar.
//!
//! A descriptor is a product of atoms joined by `×`, `:`, `.` or `·` (all
//! multiply orders) or `/` (exact division). Atoms:
//!
//! | atom            | order                                   |
//! |-----------------|-----------------------------------------|
//! | `Gamma_r(p)`    | p^(2r)                                  |
//! | `GL_k(q)`       | general linear group                    |
//! | `GU_k(q)`       | general unitary group                   |
//! | `PGL_k(q)`      | `|GL_k(q)|/(q-1)`                       |
//! | `PGU_k(q)`      | `|GU_k(q)|/(q+1)`                       |
//! | `Sp_2r(p)`      | symplectic group of dimension 2r        |
//! | `SO+_2r(2)`     | stabilizer of a hyperbolic form in Sp   |
//! | `SO-_2r(2)`     | stabilizer of an elliptic form in Sp    |
//! | `S_m`           | m!                                      |
//! | integer         | a group of that order                   |
//!
//! Any primary may carry an exponent `^a` or `^{a×b}` (direct power).

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

pub fn gl_order(n: u32, q: u64) -> BigUint {
    let mut acc = BigUint::one();
    let qn = big(q).pow(n);
    let mut qi = BigUint::one();
    for _ in 0..n {
        acc *= &qn - &qi;
        qi *= q;
    }
    acc
}

pub fn pgl_order(n: u32, q: u64) -> BigUint {
    gl_order(n, q) / big(q - 1)
}

/// `q^(n(n-1)/2) ∏_{i=1}^n (q^i - (-1)^i)`.
pub fn gu_order(n: u32, q: u64) -> BigUint {
    let mut acc = big(q).pow(n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        let qi = big(q).pow(i);
        acc *= if i % 2 == 0 { qi - 1u32 } else { qi + 1u32 };
    }
    acc
}

pub fn pgu_order(n: u32, q: u64) -> BigUint {
    gu_order(n, q) / big(q + 1)
}

/// `p^(r²) ∏_{i=1}^r (p^(2i) - 1)`.
pub fn sp_order(r: u32, p: u64) -> BigUint {
    let mut acc = big(p).pow(r * r);
    for i in 1..=r {
        acc *= big(p).pow(2 * i) - 1u32;
    }
    acc
}

/// Order of the stabilizer in Sp_2r(2) of a quadratic form of type `plus`.
pub fn so2_order(r: u32, plus: bool) -> BigUint {
    let q = big(2);
    let mut acc = big(2) * q.pow(r * (r - 1));
    let qr = q.pow(r);
    acc *= if plus { qr - 1u32 } else { qr + 1u32 };
    for i in 1..r {
        acc *= q.pow(2 * i) - 1u32;
    }
    acc
}

pub fn factorial(m: u32) -> BigUint {
    (1..=m as u64).fold(BigUint::one(), |a, b| a * b)
}

/// Exact order of the group named by a structure descriptor.
pub fn descriptor_order(descr: &str) -> Result<BigUint> {
    let tokens: Vec<char> = descr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parser = Parser { s: &tokens, i: 0, src: descr };
    let v = parser.expr()?;
    if parser.i != tokens.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [char],
    i: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::MalformedDescriptor(format!("{what} at position {} in {:?}", self.i, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn expr(&mut self) -> Result<BigUint> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('×') | Some('x') | Some(':') | Some('.') | Some('·') => {
                    self.i += 1;
                    acc *= self.factor()?;
                }
                Some('/') => {
                    self.i += 1;
                    let d = self.factor()?;
                    if d.is_zero() || !(&acc % &d).is_zero() {
                        return Err(self.err("inexact division"));
                    }
                    acc /= d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<BigUint> {
        let base = self.primary()?;
        if self.eat('^') {
            let e = self.exponent()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.eat('{') {
            let mut e = self.uint()?;
            while self.eat('×') || self.eat('x') || self.eat('*') {
                e *= self.uint()?;
            }
            self.expect('}')?;
            Ok(e as u32)
        } else {
            Ok(self.uint()? as u32)
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected integer"));
        }
        let text: String = self.s[start..self.i].iter().collect();
        text.parse().map_err(|_| self.err("integer overflow"))
    }

    fn big_uint(&mut self) -> Result<BigUint> {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected integer"));
        }
        let text: String = self.s[start..self.i].iter().collect();
        text.parse().map_err(|_| self.err("bad integer"))
    }

    fn subscript(&mut self) -> Result<u64> {
        self.expect('_')?;
        if self.eat('{') {
            let v = self.uint()?;
            self.expect('}')?;
            Ok(v)
        } else {
            self.uint()
        }
    }

    fn argument(&mut self) -> Result<u64> {
        self.expect('(')?;
        let v = self.uint()?;
        self.expect(')')?;
        Ok(v)
    }

    fn ident(&mut self) -> String {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.i += 1;
        }
        self.s[start..self.i].iter().collect()
    }

    fn primary(&mut self) -> Result<BigUint> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => self.big_uint(),
            Some(c) if c.is_ascii_alphabetic() => self.atom(),
            _ => Err(self.err("expected atom")),
        }
    }

    fn prime_power_arg(&mut self) -> Result<u64> {
        let q = self.argument()?;
        if crate::gfq::prime_power(q).is_none() {
            return Err(self.err("argument is not a prime power"));
        }
        Ok(q)
    }

    fn atom(&mut self) -> Result<BigUint> {
        let name = self.ident();
        match name.as_str() {
            "Gamma" => {
                let r = self.subscript()?;
                let p = self.prime_power_arg()?;
                Ok(big(p).pow(2 * r as u32))
            }
            "GL" | "GU" | "PGL" | "PGU" => {
                let k = self.subscript()? as u32;
                let q = self.prime_power_arg()?;
                Ok(match name.as_str() {
                    "GL" => gl_order(k, q),
                    "GU" => gu_order(k, q),
                    "PGL" => pgl_order(k, q),
                    _ => pgu_order(k, q),
                })
            }
            "Sp" => {
                let dim = self.subscript()?;
                if dim % 2 != 0 {
                    return Err(self.err("odd symplectic dimension"));
                }
                let p = self.prime_power_arg()?;
                Ok(sp_order(dim as u32 / 2, p))
            }
            "SO" => {
                let plus = match self.peek() {
                    Some('+') => true,
                    Some('-') | Some('−') => false,
                    _ => return Err(self.err("expected form type")),
                };
                self.i += 1;
                let dim = self.subscript()?;
                let p = self.argument()?;
                if dim % 2 != 0 || dim == 0 || p != 2 {
                    return Err(self.err("orthogonal factor must be SO±_2r(2)"));
                }
                Ok(so2_order(dim as u32 / 2, plus))
            }
            "S" => {
                let m = self.subscript()?;
                Ok(factorial(m as u32))
            }
            _ => Err(self.err(&format!("unknown atom {name:?}"))),
        }
    }
}

/// Converts a small order to `u64`, if it fits.
pub fn to_u64(v: &BigUint) -> Option<u64> {
    v.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> u64 {
        to_u64(&descriptor_order(s).unwrap()).unwrap()
    }

    #[test]
    fn descriptor_examples() {
        assert_eq!(ord("2^2 · Sp_2(2)"), 24);
        assert_eq!(ord("PGL_2(5)"), 120);
        assert_eq!(ord("PGU_3(2)"), 216);
        assert_eq!(ord("(Gamma_1(2) × PGL_1(5)).Sp_2(2)"), 24);
        assert_eq!(ord("2^{1×2}:(GL_1(2) × 2)"), 8);
        assert_eq!(ord("(GL_1(5) × GL_1(25))/4"), 24);
        assert_eq!(ord("SO+_4(2)"), 72);
        assert_eq!(ord("SO−_4(2)"), 120);
        assert_eq!(ord("S_3"), 6);
    }

    #[test]
    fn malformed_descriptors() {
        for bad in ["", "PGL_2", "Sp_3(2)", "Foo_1(2)", "PGL_2(6)", "(GL_1(5)", "5/3"] {
            assert!(descriptor_order(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn classical_orders() {
        assert_eq!(to_u64(&pgl_order(3, 4)), Some(60480));
        assert_eq!(to_u64(&pgl_order(3, 5)), Some(372000));
        assert_eq!(to_u64(&gu_order(3, 2)), Some(648));
        assert_eq!(to_u64(&sp_order(2, 2)), Some(720));
        assert_eq!(to_u64(&sp_order(1, 3)), Some(24));
        assert_eq!(to_u64(&so2_order(1, true)), Some(2));
        assert_eq!(to_u64(&so2_order(1, false)), Some(6));
    }
}
