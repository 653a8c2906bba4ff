//! Finite groups as dense multiplication tables, and groups with an action
//! of a second finite group Γ.
//!
//! Elements are indices `0..order`; the identity is always `0`.

pub mod abelian;
pub mod catalog;
mod gamma;
pub mod io;

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use abelian::AbelianStructure;
pub use gamma::{count_gamma_homs, gamma_isomorphic, GammaGroup, GammaLattice, SemidirectProduct, DIRECT_TUPLE_LIMIT};

use crate::linalg::{gcd_u64, lcm_u64, smith};
use crate::{Error, Result};

/// Default cap on the order of groups built by closure.
pub const DEFAULT_ORDER_CAP: usize = 100_000;

/// A finite group stored as a full multiplication table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.n)
    }
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup { n: 1, mul: vec![0], inv: vec![0] }
    }

    /// Validates a Cayley table. The identity is relabelled to index 0 if needed
    /// (by swapping it with the element currently at 0).
    pub fn from_mult_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::validation("empty multiplication table"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::validation(format!("entry {x} in row {i} is out of range")));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::validation("identity axiom fails: no two-sided identity element"))?;
        let relabel = |x: usize| if x == e { 0 } else if x == 0 { e } else { x };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u32;
            }
        }
        let mut inv = vec![0u32; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| mul[g * n + h] == 0 && mul[h * n + g] == 0)
                .ok_or_else(|| Error::validation(format!("inverse axiom fails: element {} has no inverse", relabel(g))))?;
            inv[g] = h as u32;
        }
        let grp = FiniteGroup { n, mul, inv };
        if let Some((a, b, c)) = grp.associativity_witness() {
            return Err(Error::validation(format!(
                "associativity fails: ({x}*{y})*{z} != {x}*({y}*{z})",
                x = relabel(a),
                y = relabel(b),
                z = relabel(c)
            )));
        }
        Ok(grp)
    }

    /// Finds a non-associative triple, if any.
    ///
    /// Cancellation is checked first (a failure there yields a witness of the
    /// form `(a⁻¹, a, b)`); then Light's test over a generating set, which
    /// suffices because the elements satisfying `(xa)y = x(ay)` for all
    /// `x, y` are closed under products.
    fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let m = |a: usize, b: usize| self.mul[a * n + b] as usize;
        for a in 0..n {
            let mut seen = vec![usize::MAX; n];
            for b in 0..n {
                let x = m(a, b);
                if seen[x] != usize::MAX {
                    let c = seen[x];
                    let ai = self.inv[a] as usize;
                    for t in [b, c] {
                        if m(m(ai, a), t) != m(ai, m(a, t)) {
                            return Some((ai, a, t));
                        }
                    }
                }
                seen[x] = b;
            }
            let mut seen = vec![usize::MAX; n];
            for b in 0..n {
                let x = m(b, a);
                if seen[x] != usize::MAX {
                    let c = seen[x];
                    let ai = self.inv[a] as usize;
                    for t in [b, c] {
                        if m(m(t, a), ai) != m(t, m(a, ai)) {
                            return Some((t, a, ai));
                        }
                    }
                }
                seen[x] = b;
            }
        }
        // greedy generating set under right-multiplication closure
        let mut gens: Vec<usize> = Vec::new();
        let mut reached = vec![false; n];
        reached[0] = true;
        for x in 0..n {
            if reached[x] {
                continue;
            }
            gens.push(x);
            let mut queue: VecDeque<usize> = (0..n).filter(|&y| reached[y]).collect();
            for &g in &gens {
                if !reached[g] {
                    reached[g] = true;
                    queue.push_back(g);
                }
            }
            while let Some(y) = queue.pop_front() {
                for &g in &gens {
                    let z = m(y, g);
                    if !reached[z] {
                        reached[z] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
        for &g in &gens {
            for x in 0..n {
                let xg = m(x, g);
                for y in 0..n {
                    if m(xg, y) != m(x, m(g, y)) {
                        return Some((x, g, y));
                    }
                }
            }
        }
        None
    }

    /// Builds a group from elements of any concrete type by closing `gens`
    /// under multiplication. Elements are sorted by `Ord`, so `identity` must
    /// be the least element. Returns the group and the sorted element list.
    pub fn from_closure<T, F>(gens: &[T], identity: T, mul: F, cap: usize) -> Result<(Self, Vec<T>)>
    where
        T: Clone + Ord + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut seen: HashSet<T> = HashSet::new();
        seen.insert(identity.clone());
        let mut order = vec![identity.clone()];
        let mut i = 0;
        while i < order.len() {
            let x = order[i].clone();
            for g in gens {
                let y = mul(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::capacity(format!("closure exceeds the order cap of {cap}")));
                    }
                    order.push(y);
                }
            }
            i += 1;
        }
        order.sort();
        if order[0] != identity {
            return Err(Error::internal("identity is not the least element"));
        }
        let index: HashMap<&T, usize> = order.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let n = order.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&mul(&order[a], &order[b])] as u32;
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("finite closure is a group") as u32;
        }
        Ok((FiniteGroup { n, mul: table, inv }, order))
    }

    /// The permutation group generated by `gens` on `{0..degree-1}`, with the
    /// convention `(g·h)(i) = h(g(i))` (apply `g` first). Elements are ordered
    /// lexicographically by image list; the returned vector gives each
    /// element's images.
    pub fn from_permutations(gens: &[Vec<usize>], degree: usize, cap: usize) -> Result<(Self, Vec<Vec<u32>>)> {
        let mut perms = Vec::with_capacity(gens.len());
        for (k, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::validation(format!("generator {k} has length {}, expected degree {degree}", g.len())));
            }
            let mut hit = vec![false; degree];
            for &x in g {
                if x >= degree || hit[x] {
                    return Err(Error::validation(format!("generator {k} is not a bijection of 0..{degree}")));
                }
                hit[x] = true;
            }
            perms.push(g.iter().map(|&x| x as u32).collect::<Vec<u32>>());
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        Self::from_closure(&perms, id, |g, h| g.iter().map(|&i| h[i as usize]).collect(), cap)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Full table as rows (for export).
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let (base, mut e) = if k < 0 { (self.inv(a), k.unsigned_abs()) } else { (a, k as u64) };
        let mut r = 0;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.n).fold(1, |e, a| lcm_u64(e, self.elem_order(a) as u64))
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted members of the subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.n];
        mark[0] = true;
        let mut list = vec![0usize];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !mark[y] {
                    mark[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    /// Whether `gens` generate the whole group.
    pub fn generates(&self, gens: &[usize]) -> bool {
        self.generate(gens).len() == self.n
    }

    /// Sorted members of the normal closure of `set`.
    pub fn normal_closure(&self, set: &[usize]) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.n];
        for &s in set {
            for g in 0..self.n {
                let c = self.conj(g, s);
                if !mark[c] {
                    mark[c] = true;
                    gens.push(c);
                }
            }
        }
        self.generate(&gens)
    }

    /// The homomorphism to `dst` sending `gens[i] ↦ images[i]`, if there is one.
    /// `gens` must generate the group.
    pub fn extend_hom(&self, gens: &[usize], images: &[usize], dst: &FiniteGroup) -> Option<Vec<usize>> {
        let mut f = vec![usize::MAX; self.n];
        f[0] = 0;
        let mut list = vec![0usize];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for (&s, &t) in gens.iter().zip(images) {
                let y = self.mul(x, s);
                let fy = dst.mul(f[x], t);
                if f[y] == usize::MAX {
                    f[y] = fy;
                    list.push(y);
                } else if f[y] != fy {
                    return None;
                }
            }
            i += 1;
        }
        (list.len() == self.n).then_some(f)
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let mut mark = vec![false; self.n];
        for &s in sub {
            mark[s] = true;
        }
        sub.iter().all(|&s| (0..self.n).all(|g| mark[self.conj(g, s)]))
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.n];
        for x in 0..self.n {
            for y in 0..self.n {
                let c = self.commutator(x, y);
                if !mark[c] {
                    mark[c] = true;
                    comms.push(c);
                }
            }
        }
        self.generate(&comms)
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&z| (0..self.n).all(|g| self.mul(z, g) == self.mul(g, z))).collect()
    }

    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&g| self.mul(g, x) == self.mul(x, g)).collect()
    }

    /// A small generating set: elements are tried by decreasing order (then
    /// index) and kept when they enlarge the generated subgroup.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut cand: Vec<(usize, usize)> = (1..self.n).map(|g| (self.elem_order(g), g)).collect();
        cand.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut gens = Vec::new();
        let mut sub = vec![0usize];
        for (_, g) in cand {
            if sub.binary_search(&g).is_err() {
                gens.push(g);
                sub = self.generate(&gens);
                if sub.len() == self.n {
                    break;
                }
            }
        }
        gens
    }

    /// `G/N` for a normal subgroup `N`. Cosets are numbered by increasing
    /// minimal element; the returned map sends each element to its coset.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(normal) || normal.first() != Some(&0) {
            return Err(Error::validation("quotient by a subset that is not a normal subgroup"));
        }
        let mut coset = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if coset[g] == usize::MAX {
                let id = reps.len();
                reps.push(g);
                for &k in normal {
                    coset[self.mul(g, k)] = id;
                }
            }
        }
        let m = reps.len();
        let mut mul = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                mul[a * m + b] = coset[self.mul(reps[a], reps[b])] as u32;
            }
        }
        let inv = (0..m).map(|a| coset[self.inv(reps[a])] as u32).collect();
        Ok((FiniteGroup { n: m, mul, inv }, coset))
    }

    /// Subgroup as its own table, plus the embedding into `self`.
    pub fn subgroup(&self, members: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let pos: HashMap<usize, usize> = sorted.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let m = sorted.len();
        let mut mul = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                mul[a * m + b] = pos[&self.mul(sorted[a], sorted[b])] as u32;
            }
        }
        let inv = (0..m).map(|a| pos[&self.inv(sorted[a])] as u32).collect();
        (FiniteGroup { n: m, mul, inv }, sorted)
    }

    pub fn conjugacy_classes(&self) -> ConjClassTable {
        let mut class_of = vec![usize::MAX; self.n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = members.len();
            let mut cls: Vec<usize> = (0..self.n).map(|g| self.conj(g, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                class_of[y] = id;
            }
            members.push(cls);
        }
        let reps = members.iter().map(|c| c[0]).collect();
        ConjClassTable { class_of, reps, members, exponent: self.exponent() }
    }

    /// Abelianization with coordinates: returns the invariant factors and, for
    /// each element, its image as a vector mod those factors.
    pub fn abelianization(&self) -> (AbelianStructure, Vec<Vec<i64>>) {
        let gens = self.generating_set();
        let k = gens.len();
        if k == 0 {
            return (AbelianStructure::trivial(), vec![Vec::new(); self.n]);
        }
        // BFS tree over right multiplication by generators.
        let mut word: Vec<Option<Vec<i64>>> = vec![None; self.n];
        word[0] = Some(vec![0; k]);
        let mut queue = VecDeque::from([0usize]);
        let mut rels: Vec<Vec<BigInt>> = Vec::new();
        let mut edges = Vec::new();
        while let Some(g) = queue.pop_front() {
            for (j, &s) in gens.iter().enumerate() {
                let h = self.mul(g, s);
                if word[h].is_none() {
                    let mut w = word[g].clone().unwrap();
                    w[j] += 1;
                    word[h] = Some(w);
                    queue.push_back(h);
                } else {
                    edges.push((g, j, h));
                }
            }
        }
        for (g, j, h) in edges {
            let wg = word[g].as_ref().unwrap();
            let wh = word[h].as_ref().unwrap();
            let mut r: Vec<BigInt> = (0..k).map(|t| BigInt::from(wg[t] - wh[t])).collect();
            r[j] += 1;
            if r.iter().any(|x| x != &BigInt::from(0)) {
                rels.push(r);
            }
        }
        let s = smith(&rels, k);
        let diag: Vec<u64> = s.diag.iter().map(|d| d.to_u64().unwrap()).collect();
        assert!(diag.iter().all(|&d| d > 0), "finite group has finite abelianization");
        let keep: Vec<usize> = (0..k).filter(|&t| diag[t] > 1).collect();
        let factors: Vec<u64> = keep.iter().map(|&t| diag[t]).collect();
        let coords = (0..self.n)
            .map(|g| {
                let w: Vec<BigInt> = word[g].as_ref().unwrap().iter().map(|&x| BigInt::from(x)).collect();
                let y = crate::linalg::vec_mat_big(&w, &s.v);
                keep.iter()
                    .map(|&t| {
                        let d = BigInt::from(diag[t]);
                        (((&y[t] % &d) + &d) % &d).to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();
        (AbelianStructure::from_chain(factors), coords)
    }

    /// Direct product with index `a·|other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / n2, a % n2);
                let (b1, b2) = (b / n2, b % n2);
                mul[a * n + b] = (self.mul(a1, b1) * n2 + other.mul(a2, b2)) as u32;
            }
        }
        let inv = (0..n).map(|a| (self.inv(a / n2) * n2 + other.inv(a % n2)) as u32).collect();
        FiniteGroup { n, mul, inv }
    }

    /// Raw constructor for tables already known to be groups with identity 0.
    pub(crate) fn from_raw(n: usize, mul: Vec<u32>) -> FiniteGroup {
        let inv = (0..n).map(|a| (0..n).find(|&b| mul[a * n + b] == 0).expect("group table") as u32).collect();
        FiniteGroup { n, mul, inv }
    }

    /// Count of elements of each order, as `(order, count)` sorted by order.
    pub fn order_census(&self) -> Vec<(usize, usize)> {
        let mut m: std::collections::BTreeMap<usize, usize> = Default::default();
        for g in 0..self.n {
            *m.entry(self.elem_order(g)).or_default() += 1;
        }
        m.into_iter().collect()
    }

    /// Whether `f` (given on all elements) is a homomorphism to `h`.
    pub fn is_hom_to(&self, h: &FiniteGroup, f: &[usize]) -> bool {
        f.len() == self.n
            && (0..self.n).all(|a| (0..self.n).all(|b| f[self.mul(a, b)] == h.mul(f[a], f[b])))
    }
}

/// Conjugacy classes, numbered by increasing minimal element.
#[derive(Clone, Debug)]
pub struct ConjClassTable {
    pub class_of: Vec<usize>,
    /// Minimal element of each class.
    pub reps: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    exponent: u64,
}

impl ConjClassTable {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.len()).collect()
    }

    /// The permutation of classes induced by `x ↦ x^k`.
    pub fn power_map(&self, g: &FiniteGroup, k: i64) -> Result<Vec<usize>> {
        if gcd_u64(k.unsigned_abs(), self.exponent) != 1 {
            return Err(Error::domain(format!("power map x -> x^{k} is not invertible: gcd with exponent {} is not 1", self.exponent)));
        }
        Ok(self.reps.iter().map(|&r| self.class_of[g.pow(r, k)]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn trivial_and_cyclic_tables() {
        let g = FiniteGroup::from_mult_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        let c3 = FiniteGroup::from_mult_table(&cyclic_table(3)).unwrap();
        assert_eq!(c3.order(), 3);
        assert_eq!(c3.inv(1), 2);
        assert!(c3.is_abelian());
    }

    #[test]
    fn identity_is_relabelled_to_zero() {
        // Z/3 with 1 as the identity: a*b = a+b-1 mod 3
        let t: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b + 2) % 3).collect()).collect();
        let g = FiniteGroup::from_mult_table(&t).unwrap();
        assert_eq!(g.mul(0, 2), 2);
        assert_eq!(g.elem_order(1), 3);
    }

    #[test]
    fn rejects_bad_tables_naming_the_axiom() {
        let no_id = vec![vec![1, 0], vec![0, 0]];
        let e = FiniteGroup::from_mult_table(&no_id).unwrap_err();
        assert!(e.to_string().contains("identity"), "{e}");

        // identity 0, element 1 has no inverse: 1*1 = 1
        let no_inv = vec![vec![0, 1], vec![1, 1]];
        let e = FiniteGroup::from_mult_table(&no_inv).unwrap_err();
        assert!(e.to_string().contains("inverse"), "{e}");

        // a loop of order 5 that is not a group
        let lp = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let e = FiniteGroup::from_mult_table(&lp).unwrap_err();
        assert!(e.to_string().contains("associativity"), "{e}");

        let ragged = vec![vec![0, 1], vec![1]];
        assert!(FiniteGroup::from_mult_table(&ragged).is_err());
    }

    #[test]
    fn permutation_closure() {
        let (s3, perms) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(perms[0], vec![0, 1, 2]);
        assert!(!s3.is_abelian());
        let (t, _) = FiniteGroup::from_permutations(&[], 4, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(t.order(), 1);
        let (c5, _) = FiniteGroup::from_permutations(&[vec![1, 2, 3, 4, 0]], 5, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(c5.order(), 5);
        assert!(FiniteGroup::from_permutations(&[vec![1, 2, 3, 4, 0]], 5, 3).is_err());
        assert!(FiniteGroup::from_permutations(&[vec![0, 0, 1]], 3, 10).is_err());
    }

    #[test]
    fn classes_of_s3() {
        let (s3, _) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 100).unwrap();
        let cc = s3.conjugacy_classes();
        assert_eq!(cc.sizes(), vec![1, 3, 2]);
        assert!(cc.power_map(&s3, 2).is_err());
        assert_eq!(cc.power_map(&s3, 5).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn abelianization_of_small_groups() {
        let (s3, _) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 100).unwrap();
        let (ab, coords) = s3.abelianization();
        assert_eq!(ab.factors(), &[2]);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(ab.add(&coords[a], &coords[b]), coords[s3.mul(a, b)]);
            }
        }
        let c = FiniteGroup::from_mult_table(&cyclic_table(4)).unwrap().direct_product(&FiniteGroup::from_mult_table(&cyclic_table(6)).unwrap());
        assert_eq!(c.abelianization().0.factors(), &[2, 12]);
    }

    #[test]
    fn quotient_and_subgroups() {
        let c6 = FiniteGroup::from_mult_table(&cyclic_table(6)).unwrap();
        let sub = c6.generate(&[2]);
        assert_eq!(sub, vec![0, 2, 4]);
        let (q, map) = c6.quotient(&sub).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(map[3], 1);
        assert_eq!(c6.generating_set(), vec![1]);
        assert_eq!(c6.center().len(), 6);
    }
}
