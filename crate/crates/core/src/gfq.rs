//! Exact arithmetic in GF(ℓ^e) with an explicit modulus polynomial.
//!
//! Elements are stored packed: the coefficient vector `(c_0, .., c_{e-1})` of
//! the residue `Σ c_i x^i` is encoded as the integer `Σ c_i ℓ^i`. The packed
//! value doubles as the lexicographic order used for deterministic choices
//! (least primitive element, least modulus).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest supported field order.
pub const MAX_Q: u64 = 1 << 20;

const MAX_DEGREE: usize = 20;

/// An element of a finite field, packed as `Σ c_i ℓ^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(ℓ^e) together with its modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    characteristic: u32,
    degree: u32,
    /// Coefficients of the monic modulus, constant term first (length e+1).
    modulus: Vec<u32>,
    q: u32,
    primitive: Fe,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q = ℓ^e` into `(ℓ, e)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let ps = prime_divisors(q);
    if ps.len() != 1 {
        return None;
    }
    let l = ps[0];
    let mut e = 0;
    let mut m = q;
    while m > 1 {
        m /= l;
        e += 1;
    }
    Some((l, e))
}

/// p-adic valuation of `n` (n > 0).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

// Polynomials over F_ℓ as coefficient vectors, constant term first.

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], l: u64) -> Vec<u64> {
    // m is monic.
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let t = (lead * c) % l;
            r[shift + i] = (r[shift + i] + l - t) % l;
        }
        poly_trim(&mut r);
    }
    r
}

fn has_factor_of_degree(f: &[u64], d: u32, l: u64) -> bool {
    let count = l.pow(d);
    (0..count).any(|code| {
        let mut g = Vec::with_capacity(d as usize + 1);
        let mut c = code;
        for _ in 0..d {
            g.push(c % l);
            c /= l;
        }
        g.push(1);
        poly_rem(f, &g, l).is_empty()
    })
}

fn is_irreducible(f: &[u64], l: u64) -> bool {
    let e = (f.len() - 1) as u32;
    (1..=e / 2).all(|d| !has_factor_of_degree(f, d, l))
}

impl FieldSpec {
    /// GF(ℓ^e) with the least monic irreducible modulus of degree e, where
    /// polynomials are ordered by their packed lower coefficients.
    pub fn new(l: u64, e: u32) -> Result<FieldSpec> {
        if !is_prime(l) {
            return Err(Error::NonPrimeCharacteristic(l));
        }
        if e == 0 {
            return Err(Error::InvalidConfig("field degree must be positive".into()));
        }
        let q = l
            .checked_pow(e)
            .filter(|&q| q <= MAX_Q)
            .ok_or(Error::FieldTooLarge(l.saturating_pow(e)))?;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|code| {
                    let mut f = Vec::with_capacity(e as usize + 1);
                    let mut c = code;
                    for _ in 0..e {
                        f.push(c % l);
                        c /= l;
                    }
                    f.push(1);
                    f
                })
                .find(|f| is_irreducible(f, l))
                .expect("irreducible polynomials exist in every degree")
        };
        let mut spec = FieldSpec {
            characteristic: l as u32,
            degree: e,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            q: q as u32,
            primitive: Fe::ONE,
        };
        spec.primitive = spec.find_primitive();
        Ok(spec)
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u64) -> Result<FieldSpec> {
        let (l, e) = prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
        FieldSpec::new(l, e)
    }

    /// GF(q²), the matrix field of the unitary groups over GF(q).
    pub fn quadratic_extension(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.characteristic as u64, 2 * self.degree)
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The least primitive element.
    pub fn primitive_element(&self) -> Fe {
        self.primitive
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.characteristic as i64) as u32)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Fe {
        let l = self.characteristic;
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * l + c % l;
        }
        Fe(v)
    }

    pub fn coefficients(&self, a: Fe) -> Vec<u32> {
        let mut d = [0u32; MAX_DEGREE];
        self.unpack(a, &mut d);
        d[..self.degree as usize].to_vec()
    }

    #[inline]
    fn unpack(&self, a: Fe, out: &mut [u32; MAX_DEGREE]) {
        let l = self.characteristic;
        let mut v = a.0;
        for slot in out.iter_mut().take(self.degree as usize) {
            *slot = v % l;
            v /= l;
        }
    }

    #[inline]
    fn pack(&self, d: &[u32]) -> Fe {
        let l = self.characteristic;
        let mut v = 0u32;
        for &c in d[..self.degree as usize].iter().rev() {
            v = v * l + c;
        }
        Fe(v)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let l = self.characteristic;
        if self.degree == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= l { s - l } else { s });
        }
        if l == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y) = ([0u32; MAX_DEGREE], [0u32; MAX_DEGREE]);
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        for i in 0..self.degree as usize {
            x[i] = (x[i] + y[i]) % l;
        }
        self.pack(&x)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let l = self.characteristic;
        if self.degree == 1 {
            return Fe(if a.0 == 0 { 0 } else { l - a.0 });
        }
        if l == 2 {
            return a;
        }
        let mut x = [0u32; MAX_DEGREE];
        self.unpack(a, &mut x);
        for c in x.iter_mut().take(self.degree as usize) {
            *c = (l - *c) % l;
        }
        self.pack(&x)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let l = self.characteristic as u64;
        if self.degree == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % l) as u32);
        }
        let e = self.degree as usize;
        if l == 2 {
            // Carry-less product followed by reduction.
            let mut prod: u64 = 0;
            let (x, y) = (a.0 as u64, b.0 as u64);
            for i in 0..e {
                if (y >> i) & 1 == 1 {
                    prod ^= x << i;
                }
            }
            let mut m: u64 = 0;
            for (i, &c) in self.modulus.iter().enumerate() {
                m |= (c as u64) << i;
            }
            for i in (e..2 * e - 1).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= m << (i - e);
                }
            }
            return Fe(prod as u32);
        }
        let (mut x, mut y) = ([0u32; MAX_DEGREE], [0u32; MAX_DEGREE]);
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] += x[i] as u64 * y[j] as u64;
            }
        }
        for c in prod.iter_mut().take(2 * e - 1) {
            *c %= l;
        }
        for i in (e..2 * e - 1).rev() {
            let lead = prod[i];
            if lead == 0 {
                continue;
            }
            prod[i] = 0;
            for (k, &c) in self.modulus[..e].iter().enumerate() {
                let t = (lead * c as u64) % l;
                prod[i - e + k] = (prod[i - e + k] + l - t) % l;
            }
        }
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..e {
            out[i] = prod[i] as u32;
        }
        self.pack(&out)
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: Fe, mut k: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(ℓ^k)`.
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        let k = k % self.degree;
        let mut x = a;
        for _ in 0..k {
            x = self.pow(x, self.characteristic as u64);
        }
        x
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fe) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut ord = self.q as u64 - 1;
        for r in prime_divisors(ord) {
            while ord % r == 0 && self.pow(a, ord / r) == Fe::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    fn find_primitive(&self) -> Fe {
        let n = self.q as u64 - 1;
        if n == 1 {
            return Fe::ONE;
        }
        let rs = prime_divisors(n);
        (1..self.q)
            .map(Fe)
            .find(|&g| rs.iter().all(|&r| self.pow(g, n / r) != Fe::ONE))
            .expect("the multiplicative group is cyclic")
    }

    /// `g^((q-1)/p)` for the least primitive element `g`.
    pub fn root_of_unity(&self, p: u32) -> Result<Fe> {
        let n = self.q as u64 - 1;
        if !is_prime(p as u64) || n % p as u64 != 0 {
            return Err(Error::NoSuchRoot { p, q: self.q });
        }
        Ok(self.pow(self.primitive, n / p as u64))
    }

    /// All solutions of `x^p = t`.
    pub fn pth_roots(&self, t: Fe, p: u32) -> Vec<Fe> {
        let n = self.q as u64 - 1;
        if t.is_zero() {
            return vec![Fe::ZERO];
        }
        if n % p as u64 != 0 {
            // x ↦ x^p is a bijection of the multiplicative group.
            let inv = mod_inverse(p as u64, n).expect("p coprime to q-1");
            return vec![self.pow(t, inv)];
        }
        if self.pow(t, n / p as u64) != Fe::ONE {
            return Vec::new();
        }
        let beta = self.root_of_unity(p).expect("p divides q-1");
        let first = (1..self.q)
            .map(Fe)
            .find(|&x| self.pow(x, p as u64) == t)
            .expect("t is a p-th power");
        let mut out = Vec::with_capacity(p as usize);
        let mut x = first;
        for _ in 0..p {
            out.push(x);
            x = self.mul(x, beta);
        }
        out.sort();
        out
    }
}

/// Inverse of `a` modulo `m`, when it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
