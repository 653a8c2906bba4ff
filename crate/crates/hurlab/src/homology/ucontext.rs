//! `U(G,c) = S_c ×_{G^ab} ℤ^{c/G}` with its bracket lifts.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{reduce_cover, schur_cover, validate_c, CentralExtension};
use crate::grp::{AbelianStructure, ConjClassTable, FiniteGroup};
use crate::{Error, Result};

/// Everything needed to multiply bracket lifts and read off lifting invariants.
#[derive(Clone, Debug)]
pub struct UContext {
    pub g: FiniteGroup,
    /// Sorted members of `c`.
    pub c: Vec<usize>,
    pub classes: ConjClassTable,
    /// Position in `c/G` of each conjugacy class of `G` (None outside `c`).
    pub class_index: Vec<Option<usize>>,
    /// Minimal element of each class in `c/G`, in `c/G` order.
    pub class_reps: Vec<usize>,
    pub sc: CentralExtension,
    /// `H₂(G,c)`, the kernel of `S_c → G`.
    pub h2c: AbelianStructure,
    /// Lift of each element of `c` in `S_c` (`usize::MAX` outside `c`).
    lift: Vec<usize>,
    pub gab: AbelianStructure,
    /// Image in `G^ab` of each element of `G`.
    pub gab_coords: Vec<Vec<i64>>,
}

/// An element `(s, v)` of `U(G,c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UElement {
    pub s: usize,
    pub v: Vec<BigInt>,
}

impl UContext {
    pub fn new(g: &FiniteGroup, c: &[usize]) -> Result<Self> {
        let c = validate_c(g, c)?;
        let cover = schur_cover(g)?;
        let sc = reduce_cover(g, &cover, &c)?;
        let classes = g.conjugacy_classes();
        let mut class_index = vec![None; classes.len()];
        let mut class_reps = Vec::new();
        for (id, &rep) in classes.reps.iter().enumerate() {
            if c.binary_search(&rep).is_ok() {
                class_index[id] = Some(class_reps.len());
                class_reps.push(rep);
            }
        }
        let n = g.order();
        let mut lift = vec![usize::MAX; n];
        for &rep in &class_reps {
            let xhat = sc.element(0, rep);
            for h in 0..n {
                let y = g.conj(h, rep);
                let hhat = sc.element(0, h);
                let l = sc.total.conj(hhat, xhat);
                if lift[y] == usize::MAX {
                    lift[y] = l;
                } else if lift[y] != l {
                    return Err(Error::internal(format!("bracket lift of {y} depends on the conjugating element")));
                }
            }
        }
        let (gab, gab_coords) = g.abelianization();
        let h2c = sc.tau.clone();
        Ok(UContext { g: g.clone(), c, classes, class_index, class_reps, sc, h2c, lift, gab, gab_coords })
    }

    /// Number of classes in `c/G`.
    pub fn num_classes(&self) -> usize {
        self.class_reps.len()
    }

    pub fn in_c(&self, x: usize) -> bool {
        self.lift.get(x).is_some_and(|&l| l != usize::MAX)
    }

    /// Position of `x`'s class in `c/G`.
    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.class_index[self.classes.class_of[x]]
    }

    /// Lift of `x ∈ c` in `S_c`.
    pub fn lift(&self, x: usize) -> usize {
        debug_assert!(self.in_c(x));
        self.lift[x]
    }

    pub fn identity(&self) -> UElement {
        UElement { s: 0, v: vec![BigInt::zero(); self.num_classes()] }
    }

    /// `[x] = (x̂, e_{class(x)})`.
    pub fn bracket(&self, x: usize) -> Result<UElement> {
        if !self.in_c(x) {
            return Err(Error::domain(format!("element {x} is not in c")));
        }
        let mut v = vec![BigInt::zero(); self.num_classes()];
        v[self.class_of(x).unwrap()] = BigInt::from(1);
        Ok(UElement { s: self.lift[x], v })
    }

    pub fn mul(&self, a: &UElement, b: &UElement) -> UElement {
        UElement { s: self.sc.total.mul(a.s, b.s), v: a.v.iter().zip(&b.v).map(|(x, y)| x + y).collect() }
    }

    pub fn inv(&self, a: &UElement) -> UElement {
        UElement { s: self.sc.total.inv(a.s), v: a.v.iter().map(|x| -x).collect() }
    }

    pub fn pow(&self, a: &UElement, k: i64) -> UElement {
        let s = self.sc.total.pow(a.s, k);
        UElement { s, v: a.v.iter().map(|x| x * k).collect() }
    }

    /// Image of `v` in `G^ab`.
    pub fn v_to_gab(&self, v: &[BigInt]) -> Vec<i64> {
        let mut acc = self.gab.zero();
        for (vi, &rep) in v.iter().zip(&self.class_reps) {
            let rc = &self.gab_coords[rep];
            for ((a, &r), &d) in acc.iter_mut().zip(rc).zip(self.gab.factors()) {
                let term = (vi * BigInt::from(r)) % BigInt::from(d);
                *a += term.to_i64().unwrap();
            }
        }
        self.gab.reduce(&mut acc);
        acc
    }

    /// Fiber-product compatibility of `(s, v)`.
    pub fn is_valid(&self, u: &UElement) -> bool {
        let g = self.sc.proj[u.s];
        u.v.len() == self.num_classes() && self.gab_coords[g] == self.v_to_gab(&u.v)
    }

    pub fn proj(&self, u: &UElement) -> usize {
        self.sc.proj[u.s]
    }

    pub fn in_k(&self, u: &UElement) -> bool {
        self.proj(u) == 0 && self.v_to_gab(&u.v).iter().all(|&x| x == 0)
    }

    /// `u ∈ K(G,c)` as `(H₂(G,c) coordinates, v)`.
    pub fn k_decompose(&self, u: &UElement) -> Result<(Vec<i64>, Vec<BigInt>)> {
        if self.proj(u) != 0 {
            return Err(Error::domain("element does not lie over the identity of G"));
        }
        if self.v_to_gab(&u.v).iter().any(|&x| x != 0) {
            return Err(Error::domain("degree vector has nonzero image in G^ab"));
        }
        let (a, _) = self.sc.split(u.s);
        Ok((self.sc.kernel_coords(a), u.v.clone()))
    }

    pub fn k_compose(&self, h: &[i64], v: &[BigInt]) -> UElement {
        UElement { s: self.sc.element(self.sc.kernel_index(h), 0), v: v.to_vec() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::catalog::{cyclic, dihedral, symmetric};

    #[test]
    fn u_of_c2_is_z() {
        let g = cyclic(2);
        let ctx = UContext::new(&g, &[1]).unwrap();
        assert!(ctx.h2c.is_trivial());
        let b = ctx.bracket(1).unwrap();
        assert_eq!(b.v, vec![BigInt::from(1)]);
        assert_eq!(ctx.proj(&b), 1);
        let b2 = ctx.mul(&b, &b);
        assert!(ctx.in_k(&b2));
        assert!(!ctx.in_k(&b));
        assert!(ctx.k_decompose(&b).is_err());
    }

    #[test]
    fn braid_compatibility_and_coherence_on_s3() {
        let (g, perms) = symmetric(3);
        let c: Vec<usize> = (0..6).filter(|&i| g.elem_order(i) == 2).collect();
        assert_eq!(c.len(), 3);
        let ctx = UContext::new(&g, &c).unwrap();
        for &x in &c {
            for &y in &c {
                let lhs = ctx.mul(&ctx.bracket(x).unwrap(), &ctx.bracket(y).unwrap());
                let rhs = ctx.mul(&ctx.bracket(g.conj(x, y)).unwrap(), &ctx.bracket(x).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        for u in 0..ctx.sc.total.order() {
            for &x in &c {
                let lhs = ctx.sc.total.conj(u, ctx.lift(x));
                assert_eq!(lhs, ctx.lift(g.conj(ctx.sc.proj[u], x)));
            }
        }
        let _ = perms;
    }

    #[test]
    fn k_round_trip_on_d4() {
        let g = dihedral(4);
        let c: Vec<usize> = (1..8).collect();
        let ctx = UContext::new(&g, &c).unwrap();
        for &x in &c {
            let b = ctx.bracket(x).unwrap();
            let o = g.elem_order(x) as i64;
            let k = ctx.pow(&b, 2 * o);
            let (h, v) = ctx.k_decompose(&k).unwrap();
            assert_eq!(ctx.k_compose(&h, &v), k);
        }
    }
}
