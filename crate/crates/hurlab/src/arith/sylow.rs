//! ℓ-Sylow subgroups of hyperelliptic Jacobians.
//!
//! Small curves are enumerated outright. Otherwise random prime divisors are
//! pushed into the ℓ-part and the subgroup they generate is grown until its
//! order matches `ℓ^{v_ℓ(L(1))}`; only then is a structure reported.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::abelian_p_group;
use super::cantor::{add_unchecked, divclass_mul, enumerate_classes, order_dividing, DivisorClass};
use super::curve::{jacobian_order, HyperellipticModel};
use super::poly::{is_irreducible, FqPoly};
use crate::grp::AbelianStructure;
use crate::linalg::valuation;
use crate::{Error, Result};

/// Tuning for [`sylow_structure`].
#[derive(Clone, Debug)]
pub struct SylowOptions {
    /// Enumerate the whole group when `q^{2g}` is at most this.
    pub enumeration_budget: u64,
    /// Random prime divisors tried before giving up.
    pub retry_budget: usize,
    /// Largest ℓ-part kept as an explicit element list.
    pub max_part: u64,
    pub seed: u64,
}

impl Default for SylowOptions {
    fn default() -> Self {
        SylowOptions { enumeration_budget: 1 << 20, retry_budget: 2000, max_part: 1 << 20, seed: 0 }
    }
}

/// Either a certified structure or an admission that none was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SylowResult {
    Certified(AbelianStructure),
    Inconclusive { reason: String },
}

impl SylowResult {
    pub fn certified(&self) -> Option<&AbelianStructure> {
        match self {
            SylowResult::Certified(a) => Some(a),
            SylowResult::Inconclusive { .. } => None,
        }
    }
}

/// The ℓ-part of `Jac(C)(F_q)`.
pub fn sylow_structure(model: &HyperellipticModel, ell: u64, opts: &SylowOptions) -> Result<SylowResult> {
    if !crate::linalg::is_prime(ell) {
        return Err(Error::validation(format!("ℓ = {ell} is not prime")));
    }
    if model.q().is_multiple_of(ell) {
        return Err(Error::validation(format!("ℓ = {ell} divides q = {}", model.q())));
    }
    let n = jacobian_order(model)?;
    let e = valuation(n, ell);
    match e {
        0 => return Ok(SylowResult::Certified(AbelianStructure::trivial())),
        1 => return Ok(SylowResult::Certified(AbelianStructure::from_cyclic(&[ell]))),
        _ => {}
    }
    let part = ell.pow(e);
    if part > opts.max_part {
        return Ok(SylowResult::Inconclusive { reason: format!("ℓ-part of order {part} is above the element-list cap") });
    }
    let cofactor = n / part;
    let mut sub = Subgroup::new(model.q());
    let g = model.genus as u32;
    if model.q().checked_pow(2 * g).is_some_and(|w| w <= opts.enumeration_budget) {
        for x in enumerate_classes(model, opts.enumeration_budget)? {
            sub.adjoin(model, &divclass_mul(model, &x, cofactor));
            if sub.len() as u64 == part {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.retry_budget {
            if sub.len() as u64 == part {
                break;
            }
            if let Some(x) = random_prime_divisor(model, &mut rng) {
                sub.adjoin(model, &divclass_mul(model, &x, cofactor));
            }
        }
    }
    if sub.len() as u64 != part {
        return Ok(SylowResult::Inconclusive { reason: format!("generated {} of the {part} elements of the ℓ-part", sub.len()) });
    }
    let orders = sub.elems.iter().map(|x| order_dividing(model, x, part));
    Ok(SylowResult::Certified(abelian_p_group(ell, orders)))
}

/// An explicit subgroup, grown one generator at a time.
struct Subgroup {
    elems: Vec<DivisorClass>,
    set: HashSet<DivisorClass>,
}

impl Subgroup {
    fn new(q: u64) -> Self {
        let id = DivisorClass::identity(q);
        Subgroup { elems: vec![id.clone()], set: HashSet::from([id]) }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    /// `S ← ⟨S, y⟩` by adding the cosets `S + y, S + 2y, …`.
    fn adjoin(&mut self, model: &HyperellipticModel, y: &DivisorClass) {
        let base = self.elems.clone();
        let mut shift = y.clone();
        while !self.set.contains(&shift) {
            for s in &base {
                let z = add_unchecked(model, s, &shift);
                if self.set.insert(z.clone()) {
                    self.elems.push(z);
                }
            }
            shift = add_unchecked(model, &shift, y);
        }
    }
}

/// A random class `(u, v)` with `u` monic irreducible of degree `≤ g` and
/// `f` a square mod `u`; `None` if the draw misses.
fn random_prime_divisor(model: &HyperellipticModel, rng: &mut ChaCha8Rng) -> Option<DivisorClass> {
    let q = model.q();
    let k = rng.gen_range(1..=model.genus.max(1));
    let mut c: Vec<u64> = (0..k).map(|_| rng.gen_range(0..q)).collect();
    c.push(1);
    let u = FqPoly::from_raw(q, c);
    if !is_irreducible(&u) {
        return None;
    }
    let a = model.f.rem(&u);
    // u | f gives a Weierstrass divisor, v = 0
    let v = if a.is_zero() { a } else { sqrt_mod_irreducible(&a, &u, rng)? };
    Some(DivisorClass { u, v })
}

/// Tonelli–Shanks in `F_q[t]/(u) ≅ F_{q^k}`; `None` for non-squares.
fn sqrt_mod_irreducible(a: &FqPoly, u: &FqPoly, rng: &mut ChaCha8Rng) -> Option<FqPoly> {
    let q = a.q();
    let k = u.degree() as u32;
    let order = (q as u128).pow(k) - 1;
    let one = FqPoly::constant(q, 1);
    if a.pow_mod(order / 2, u) != one {
        return None;
    }
    let mut s = 0;
    let mut t = order;
    while t.is_multiple_of(2) {
        t /= 2;
        s += 1;
    }
    let z = loop {
        let c: Vec<u64> = (0..k).map(|_| rng.gen_range(0..q)).collect();
        let z = FqPoly::from_raw(q, c);
        if !z.is_zero() && z.pow_mod(order / 2, u) != one {
            break z;
        }
    };
    let mut m = s;
    let mut c = z.pow_mod(t, u);
    let mut tt = a.pow_mod(t, u);
    let mut r = a.pow_mod(t.div_ceil(2), u);
    while tt != one {
        let mut i = 0;
        let mut x = tt.clone();
        while x != one {
            x = x.mul(&x).rem(u);
            i += 1;
        }
        let b = c.pow_mod(1u128 << (m - i - 1), u);
        r = r.mul(&b).rem(u);
        c = b.mul(&b).rem(u);
        tt = tt.mul(&c).rem(u);
        m = i;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::super::curve::enumerate_imaginary;
    use super::*;

    #[test]
    fn random_and_enumerated_paths_agree() {
        let exhaustive = SylowOptions::default();
        let random = SylowOptions { enumeration_budget: 0, seed: 9, ..SylowOptions::default() };
        let mut checked = 0;
        for m in enumerate_imaginary(3, 5).unwrap() {
            let n = jacobian_order(&m).unwrap();
            if valuation(n, 2) < 2 {
                continue;
            }
            let a = sylow_structure(&m, 2, &exhaustive).unwrap();
            let b = sylow_structure(&m, 2, &random).unwrap();
            let s = a.certified().unwrap();
            assert_eq!(s.order(), 2u64.pow(valuation(n, 2)));
            assert_eq!(Some(s), b.certified());
            checked += 1;
        }
        assert!(checked > 10);
    }

    #[test]
    fn order_seven_is_cyclic() {
        let m = HyperellipticModel::new(FqPoly::new(3, vec![1, 2, 0, 1]).unwrap()).unwrap();
        let s = sylow_structure(&m, 7, &SylowOptions::default()).unwrap();
        assert_eq!(s.certified().unwrap().factors(), &[7]);
        let s5 = sylow_structure(&m, 5, &SylowOptions::default()).unwrap();
        assert!(s5.certified().unwrap().is_trivial());
        assert!(sylow_structure(&m, 3, &SylowOptions::default()).is_err());
    }

    #[test]
    fn square_roots_in_extensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = FqPoly::new(5, vec![2, 0, 1]).unwrap(); // t² + 2, irreducible mod 5
        assert!(is_irreducible(&u));
        let a = FqPoly::new(5, vec![3, 4]).unwrap();
        let sq = a.mul(&a).rem(&u);
        let r = sqrt_mod_irreducible(&sq, &u, &mut rng).unwrap();
        assert_eq!(r.mul(&r).rem(&u), sq);
    }
}
