//! Divisor classes on imaginary hyperelliptic curves in Mumford form, with
//! Cantor's composition and reduction.

use super::curve::HyperellipticModel;
use super::poly::{monic_polys, polys_below, FqPoly};
use crate::{Error, Result};

/// A reduced class `(u, v)`: `u` monic, `deg v < deg u ≤ g`, `u | v² − f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub u: FqPoly,
    pub v: FqPoly,
}

impl DivisorClass {
    pub fn identity(q: u64) -> Self {
        DivisorClass { u: FqPoly::constant(q, 1), v: FqPoly::zero(q) }
    }

    pub fn is_identity(&self) -> bool {
        self.u.degree() == 0
    }

    /// Checks the Mumford conditions.
    pub fn new(model: &HyperellipticModel, u: FqPoly, v: FqPoly) -> Result<Self> {
        let d = DivisorClass { u, v };
        if !is_valid(model, &d) {
            return Err(Error::domain(format!("({}, {}) is not a reduced Mumford pair on {model}", d.u, d.v)));
        }
        Ok(d)
    }
}

fn is_valid(model: &HyperellipticModel, d: &DivisorClass) -> bool {
    d.u.is_monic()
        && d.v.degree() < d.u.degree()
        && d.u.degree() <= model.genus as isize
        && d.v.mul(&d.v).sub(&model.f).rem(&d.u).is_zero()
}

pub fn divclass_neg(a: &DivisorClass) -> DivisorClass {
    DivisorClass { u: a.u.clone(), v: a.v.neg().rem(&a.u) }
}

/// Cantor composition followed by reduction to `deg u ≤ g`.
pub fn divclass_add(model: &HyperellipticModel, a: &DivisorClass, b: &DivisorClass) -> Result<DivisorClass> {
    for d in [a, b] {
        if !is_valid(model, d) {
            return Err(Error::domain(format!("({}, {}) is not a reduced Mumford pair", d.u, d.v)));
        }
    }
    Ok(add_unchecked(model, a, b))
}

pub(crate) fn add_unchecked(model: &HyperellipticModel, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
    let f = &model.f;
    let (d1, e1, e2) = FqPoly::ext_gcd(&a.u, &b.u);
    let (d, c1, c2) = FqPoly::ext_gcd(&d1, &a.v.add(&b.v));
    let s1 = c1.mul(&e1);
    let s2 = c1.mul(&e2);
    let s3 = c2;
    let mut u = a.u.mul(&b.u).div_exact(&d.mul(&d)).expect("d² divides u₁u₂");
    let num = s1.mul(&a.u).mul(&b.v).add(&s2.mul(&b.u).mul(&a.v)).add(&s3.mul(&a.v.mul(&b.v).add(f)));
    let mut v = num.div_exact(&d).expect("d divides the Cantor numerator").rem(&u);
    while u.degree() > model.genus as isize {
        let nu = f.sub(&v.mul(&v)).div_exact(&u).expect("u divides f − v²");
        u = nu.monic();
        v = v.neg().rem(&u);
    }
    u = u.monic();
    v = v.rem(&u);
    DivisorClass { u, v }
}

/// `k·a` by double-and-add.
pub fn divclass_mul(model: &HyperellipticModel, a: &DivisorClass, mut k: u64) -> DivisorClass {
    let mut acc = DivisorClass::identity(model.q());
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = add_unchecked(model, &acc, &base);
        }
        base = add_unchecked(model, &base, &base);
        k >>= 1;
    }
    acc
}

/// Every reduced class, by scanning all `(u, v)` with `u` monic of degree `≤ g`.
pub fn enumerate_classes(model: &HyperellipticModel, budget: u64) -> Result<Vec<DivisorClass>> {
    let q = model.q();
    let g = model.genus as u32;
    if q.checked_pow(2 * g).is_none_or(|w| w > budget) {
        return Err(Error::capacity(format!("q^(2g) exceeds the enumeration budget {budget}")));
    }
    let mut out = vec![DivisorClass::identity(q)];
    for k in 1..=g {
        for u in monic_polys(q, k) {
            let target = model.f.rem(&u);
            for v in polys_below(q, k) {
                if v.mul(&v).rem(&u) == target {
                    out.push(DivisorClass { u: u.clone(), v });
                }
            }
        }
    }
    Ok(out)
}

/// The order of `a`, given a multiple `n` of it.
pub fn order_dividing(model: &HyperellipticModel, a: &DivisorClass, n: u64) -> u64 {
    let mut ord = n;
    for (p, _) in crate::linalg::factorize(n) {
        while ord.is_multiple_of(p) && divclass_mul(model, a, ord / p).is_identity() {
            ord /= p;
        }
    }
    ord
}

#[cfg(test)]
mod tests {
    use super::super::curve::{enumerate_imaginary, jacobian_order};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_laws_on_small_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in enumerate_imaginary(3, 5).unwrap().step_by(17) {
            let all = enumerate_classes(&m, 1 << 20).unwrap();
            let n = jacobian_order(&m).unwrap();
            assert_eq!(all.len() as u64, n, "{m}");
            let id = DivisorClass::identity(3);
            for _ in 0..30 {
                let a = &all[rng.gen_range(0..all.len())];
                let b = &all[rng.gen_range(0..all.len())];
                let c = &all[rng.gen_range(0..all.len())];
                assert_eq!(divclass_add(&m, a, &id).unwrap(), *a);
                assert!(divclass_add(&m, a, &divclass_neg(a)).unwrap().is_identity());
                let l = add_unchecked(&m, &add_unchecked(&m, a, b), c);
                let r = add_unchecked(&m, a, &add_unchecked(&m, b, c));
                assert_eq!(l, r);
                assert!(divclass_mul(&m, a, n).is_identity());
            }
        }
    }

    #[test]
    fn invalid_pair_is_rejected() {
        let m = HyperellipticModel::new(FqPoly::new(3, vec![1, 2, 0, 1]).unwrap()).unwrap();
        let bad = DivisorClass { u: FqPoly::new(3, vec![0, 1]).unwrap(), v: FqPoly::new(3, vec![0]).unwrap() };
        assert!(divclass_add(&m, &bad, &bad).is_err());
    }
}
