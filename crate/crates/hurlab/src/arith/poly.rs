//! Polynomials over a prime field `F_q`.

use std::fmt;

use crate::linalg::{is_prime, mod_inv};
use crate::{Error, Result};

/// Coefficients low degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    q: u64,
    coeffs: Vec<u64>,
}

impl FqPoly {
    /// Reduces `coeffs` mod `q`. Only prime `q` is supported.
    pub fn new(q: u64, coeffs: Vec<u64>) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::validation(format!("q = {q} is not prime; only prime fields are supported")));
        }
        Ok(Self::from_raw(q, coeffs))
    }

    pub(crate) fn from_raw(q: u64, coeffs: Vec<u64>) -> Self {
        let mut p = FqPoly { q, coeffs: coeffs.into_iter().map(|c| c % q).collect() };
        p.trim();
        p
    }

    pub fn zero(q: u64) -> Self {
        FqPoly { q, coeffs: Vec::new() }
    }

    pub fn constant(q: u64, c: u64) -> Self {
        Self::from_raw(q, vec![c])
    }

    /// `t`.
    pub fn x(q: u64) -> Self {
        FqPoly { q, coeffs: vec![0, 1] }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.q as u128) as u64
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_raw(self.q, (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.q).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_raw(self.q, (0..n).map(|i| (self.coeff(i) + self.q - o.coeff(i)) % self.q).collect())
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(self.q, self.coeffs.iter().map(|&c| (self.q - c) % self.q).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::from_raw(self.q, self.coeffs.iter().map(|&a| self.mulm(a, c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.q);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulm(a, b)) % self.q;
            }
        }
        Self::from_raw(self.q, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let q = self.q;
        let inv = mod_inv(d.leading(), q).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        if r.len() <= dd {
            return (Self::zero(q), self.clone());
        }
        let mut quo = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = self.mulm(r[i], inv);
            if c == 0 {
                continue;
            }
            quo[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = (r[k] + q - self.mulm(c, b)) % q;
            }
        }
        (Self::from_raw(q, quo), Self::from_raw(q, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (quo, r) = self.divrem(d);
        r.is_zero().then_some(quo)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(mod_inv(self.leading(), self.q).expect("nonzero"))
    }

    /// `(g, s, t)` with `g = s·a + t·b` monic (or zero when both are zero).
    pub fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let q = a.q;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::constant(q, 1), Self::zero(q));
        let (mut t0, mut t1) = (Self::zero(q), Self::constant(q, 1));
        while !r1.is_zero() {
            let (quo, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&quo.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&quo.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = mod_inv(r0.leading(), q).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        Self::ext_gcd(self, o).0
    }

    pub fn derivative(&self) -> Self {
        Self::from_raw(self.q, self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| self.mulm(c, i as u64 % self.q)).collect())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == 0
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut acc = Self::constant(self.q, 1).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (self.mulm(acc, x) + c) % self.q)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Arithmetic in `F_{q^k} = F_q[x]/(m)`, elements stored as base-`q` integers.
pub(crate) struct ExtField {
    pub q: u64,
    pub k: u32,
    pub size: u64,
    modulus: FqPoly,
}

impl ExtField {
    pub fn new(q: u64, k: u32) -> Self {
        let size = q.pow(k);
        let modulus = if k == 1 {
            FqPoly::x(q)
        } else {
            (0..q.pow(k))
                .map(|i| {
                    let mut c = digits(i, q, k);
                    c.push(1);
                    FqPoly::from_raw(q, c)
                })
                .find(is_irreducible)
                .expect("irreducible polynomials exist in every degree")
        };
        ExtField { q, k, size, modulus }
    }

    pub fn to_poly(&self, a: u64) -> FqPoly {
        FqPoly::from_raw(self.q, digits(a, self.q, self.k))
    }

    pub fn index_of(&self, p: &FqPoly) -> u64 {
        p.coeffs.iter().rev().fold(0, |acc, &c| acc * self.q + c)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.index_of(&self.to_poly(a).mul(&self.to_poly(b)).rem(&self.modulus))
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.index_of(&self.to_poly(a).add(&self.to_poly(b)))
    }

    /// `p(a)` for `p` with coefficients in `F_q ⊂ F_{q^k}`.
    pub fn eval(&self, p: &FqPoly, a: u64) -> u64 {
        p.coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, a), c))
    }

    /// Table of the quadratic character `χ(a) ∈ {0, 1, -1}`.
    pub fn quadratic_character(&self) -> Vec<i8> {
        let mut chi = vec![-1i8; self.size as usize];
        chi[0] = 0;
        for a in 1..self.size {
            chi[self.mul(a, a) as usize] = 1;
        }
        chi
    }
}

fn digits(mut i: u64, q: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = i % q;
            i /= q;
            d
        })
        .collect()
}

/// Rabin's test: `t^{q^d} ≡ t` and `gcd(t^{q^{d/r}} − t, p) = 1` for primes `r | d`.
pub fn is_irreducible(p: &FqPoly) -> bool {
    let d = p.degree();
    if d < 1 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let q = p.q;
    let t = FqPoly::x(q);
    // t^{q^k} mod p for k = 0..=d by repeated q-th powers
    let mut frob = vec![t.rem(p)];
    for k in 1..=d as usize {
        let prev = frob[k - 1].clone();
        frob.push(prev.pow_mod(q as u128, p));
    }
    if frob[d as usize] != t.rem(p) {
        return false;
    }
    crate::linalg::factorize(d as u64).into_iter().all(|(r, _)| frob[d as usize / r as usize].sub(&t).gcd(p).degree() == 0)
}

/// All monic polynomials of degree exactly `d`, in lexicographic order.
pub fn monic_polys(q: u64, d: u32) -> impl Iterator<Item = FqPoly> {
    (0..q.pow(d)).map(move |i| {
        let mut c = digits(i, q, d);
        c.push(1);
        FqPoly::from_raw(q, c)
    })
}

/// All polynomials of degree `< d`, zero included.
pub fn polys_below(q: u64, d: u32) -> impl Iterator<Item = FqPoly> {
    (0..q.pow(d)).map(move |i| FqPoly::from_raw(q, digits(i, q, d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u64]) -> FqPoly {
        FqPoly::new(3, c.to_vec()).unwrap()
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[1, 2, 0, 1]); // t³ + 2t + 1
        let b = p(&[2, 1]); // t + 2
        let (quo, r) = a.divrem(&b);
        assert_eq!(quo.mul(&b).add(&r), a);
        let (g, s, t) = FqPoly::ext_gcd(&a, &b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(g.is_monic());
        assert!(FqPoly::new(4, vec![1]).is_err());
    }

    #[test]
    fn squarefree_counts() {
        // q^d − q^{d−1} monic squarefree polynomials for d ≥ 2
        for (q, d) in [(3u64, 2u32), (3, 3), (5, 2), (5, 3)] {
            let n = monic_polys(q, d).filter(|f| f.is_squarefree()).count() as u64;
            assert_eq!(n, q.pow(d) - q.pow(d - 1));
        }
    }

    #[test]
    fn extension_field_squares() {
        let f = ExtField::new(3, 2);
        let chi = f.quadratic_character();
        assert_eq!(chi.iter().filter(|&&c| c == 1).count(), 4);
        for a in 1..9 {
            assert!((1..9).any(|b| f.mul(a, b) == 1));
        }
    }

    #[test]
    fn irreducible_counts() {
        // (q³ − q)/3 monic irreducible cubics
        for q in [3u64, 5] {
            assert_eq!(monic_polys(q, 3).filter(is_irreducible).count() as u64, (q.pow(3) - q) / 3);
            assert_eq!(monic_polys(q, 2).filter(is_irreducible).count() as u64, (q * q - q) / 2);
        }
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 2, 0, 1]).to_string(), "t^3 + 2t + 1");
    }
}
