//! Schur multipliers, Schur covers, reduced covers `S_c` and the group `U(G,c)`.
//!
//! `H₂(G,ℤ)` is computed from Hopf's formula. For a generating set `S`, the
//! relation module `R/[R,R]` of the free presentation on `S` is the cycle
//! space of the Cayley graph, with basis the fundamental cycles of a BFS
//! spanning tree. Its coinvariants `R/[F,R]` are `H₂(G) ⊕ ℤ^{|S|}`, so the
//! torsion of the Smith form of the relations `t·z − z` is the multiplier.
//! The same coordinates give a 2-cocycle `σ(g,h)` (the cycle traced by
//! `p_g · g·p_h · p_{gh}⁻¹`), hence an explicit Schur cover.
//!
//! [`oracle`] recomputes both multipliers from normalized 2-cocycles
//! over `ℤ/p^k` without any of this machinery.

pub mod oracle;
mod ucontext;

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::grp::catalog::{abelian_coords, abelian_index};
use crate::grp::{AbelianStructure, FiniteGroup};
use crate::linalg::smith;
use crate::{Error, Result};

pub use ucontext::{UContext, UElement};

/// Largest group order accepted by [`h2`] and [`schur_cover`].
pub const H2_ORDER_CAP: usize = 2048;

/// Largest Schur cover built explicitly.
pub const COVER_ORDER_CAP: usize = 4096;

/// Spanning tree of the right Cayley graph of `G` on a generating set.
struct CayleyTree {
    gens: Vec<usize>,
    /// For each element, the tree edges `(x, j)` of the path from the identity.
    path: Vec<Vec<(usize, usize)>>,
    /// Column of each non-tree edge `(x, j)`, indexed `x·k + j`.
    column: Vec<Option<usize>>,
    /// Non-tree edges in column order.
    edges: Vec<(usize, usize)>,
}

impl CayleyTree {
    fn new(g: &FiniteGroup) -> Self {
        let gens = g.generating_set();
        let n = g.order();
        let k = gens.len();
        let mut path: Vec<Option<Vec<(usize, usize)>>> = vec![None; n];
        path[0] = Some(Vec::new());
        let mut tree_edge = vec![false; n * k];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (j, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if path[y].is_none() {
                    let mut p = path[x].clone().unwrap();
                    p.push((x, j));
                    path[y] = Some(p);
                    tree_edge[x * k + j] = true;
                    queue.push_back(y);
                }
            }
        }
        let mut column = vec![None; n * k];
        let mut edges = Vec::new();
        for x in 0..n {
            for j in 0..k {
                if !tree_edge[x * k + j] {
                    column[x * k + j] = Some(edges.len());
                    edges.push((x, j));
                }
            }
        }
        CayleyTree { gens, path: path.into_iter().map(Option::unwrap).collect(), column, edges }
    }

    fn k(&self) -> usize {
        self.gens.len()
    }

    /// Adds `sign ×` the non-tree coordinates of the path `t·p_h` into `out`.
    fn add_translated_path(&self, g: &FiniteGroup, t: usize, h: usize, sign: i64, out: &mut [i64]) {
        let k = self.k();
        for &(x, j) in &self.path[h] {
            if let Some(c) = self.column[g.mul(t, x) * k + j] {
                out[c] += sign;
            }
        }
    }
}

/// Everything derived from the Hopf presentation: the multiplier and the
/// torsion coordinates used to evaluate the cocycle.
struct HopfData {
    tree: CayleyTree,
    multiplier: AbelianStructure,
    /// For each torsion factor, the column of `V` reduced mod the factor.
    vcols: Vec<Vec<u64>>,
}

fn hopf(g: &FiniteGroup) -> Result<HopfData> {
    if g.order() > H2_ORDER_CAP {
        return Err(Error::capacity(format!(
            "H2 of a group of order {} exceeds the cap {H2_ORDER_CAP}; use a smaller presentation or raise the cap",
            g.order()
        )));
    }
    let tree = CayleyTree::new(g);
    let m = tree.edges.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (e, &(x, j)) in tree.edges.iter().enumerate() {
        let y = g.mul(x, tree.gens[j]);
        for &t in &tree.gens {
            let mut r = vec![0i64; m];
            tree.add_translated_path(g, t, x, 1, &mut r);
            if let Some(c) = tree.column[g.mul(t, x) * tree.k() + j] {
                r[c] += 1;
            }
            tree.add_translated_path(g, t, y, -1, &mut r);
            r[e] -= 1;
            if r.iter().any(|&v| v != 0) {
                rows.push(r.into_iter().map(BigInt::from).collect());
            }
        }
    }
    let s = smith(&rows, m);
    let free = s.diag.iter().filter(|d| d.is_zero()).count();
    if free != tree.k() {
        return Err(Error::internal(format!("relation module has free rank {free}, expected {}", tree.k())));
    }
    let mut factors = Vec::new();
    let mut vcols = Vec::new();
    for (t, d) in s.diag.iter().enumerate() {
        let d = d.to_u64().ok_or_else(|| Error::internal("multiplier factor overflow"))?;
        if d > 1 {
            factors.push(d);
            let bd = BigInt::from(d);
            vcols.push(
                s.v.iter()
                    .map(|row| (((&row[t] % &bd) + &bd) % &bd).to_u64().unwrap())
                    .collect(),
            );
        }
    }
    Ok(HopfData { tree, multiplier: AbelianStructure::from_chain(factors), vcols })
}

/// `H₂(G, ℤ)` in divisor-chain form.
pub fn h2(g: &FiniteGroup) -> Result<AbelianStructure> {
    Ok(hopf(g)?.multiplier)
}

/// A central extension `1 → A → S → G → 1` stored as `A × G` with a
/// normalized 2-cocycle. Element `(a, g)` has index `g·|A| + index(a)`,
/// where `index` is mixed radix over the factors of `A`, last factor fastest.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub total: FiniteGroup,
    pub proj: Vec<usize>,
    /// Elements of the kernel (the indices `0..|A|`).
    pub kernel: Vec<usize>,
    pub tau: AbelianStructure,
    /// `σ(g,h)` as an index into `A`, stored row-major.
    sigma: Vec<u32>,
    base_order: usize,
}

impl CentralExtension {
    fn from_cocycle(g: &FiniteGroup, a: AbelianStructure, sigma: Vec<u32>) -> Result<Self> {
        let na = a.order() as usize;
        let n = g.order();
        let total_order = na * n;
        if total_order > COVER_ORDER_CAP {
            return Err(Error::capacity(format!("central extension of order {total_order} exceeds the cap {COVER_ORDER_CAP}")));
        }
        let radix: Vec<usize> = a.factors().iter().map(|&d| d as usize).collect();
        let mut addt = vec![0u32; na * na];
        for x in 0..na {
            let cx = abelian_coords(&radix, x);
            for y in 0..na {
                let cy = abelian_coords(&radix, y);
                let s: Vec<usize> = cx.iter().zip(&cy).map(|(p, q)| p + q).collect();
                addt[x * na + y] = abelian_index(&radix, &s) as u32;
            }
        }
        let mut mul = vec![0u32; total_order * total_order];
        for u in 0..total_order {
            let (g1, a1) = (u / na, u % na);
            for w in 0..total_order {
                let (g2, a2) = (w / na, w % na);
                let s = sigma[g1 * n + g2] as usize;
                let aa = addt[addt[a1 * na + a2] as usize * na + s] as usize;
                mul[u * total_order + w] = (g.mul(g1, g2) * na + aa) as u32;
            }
        }
        let total = FiniteGroup::from_raw(total_order, mul);
        Ok(CentralExtension {
            proj: (0..total_order).map(|u| u / na).collect(),
            kernel: (0..na).collect(),
            tau: a,
            total,
            sigma,
            base_order: n,
        })
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel.len()
    }

    /// Index of `(a, g)` with `a` given by its kernel index.
    pub fn element(&self, a_idx: usize, g: usize) -> usize {
        g * self.kernel.len() + a_idx
    }

    /// `(kernel index, g)`.
    pub fn split(&self, s: usize) -> (usize, usize) {
        (s % self.kernel.len(), s / self.kernel.len())
    }

    /// Coordinates of a kernel element.
    pub fn kernel_coords(&self, a_idx: usize) -> Vec<i64> {
        let radix: Vec<usize> = self.tau.factors().iter().map(|&d| d as usize).collect();
        abelian_coords(&radix, a_idx).into_iter().map(|x| x as i64).collect()
    }

    pub fn kernel_index(&self, coords: &[i64]) -> usize {
        let radix: Vec<usize> = self.tau.factors().iter().map(|&d| d as usize).collect();
        let c: Vec<usize> = coords.iter().zip(&radix).map(|(&x, &d)| x.rem_euclid(d as i64) as usize).collect();
        abelian_index(&radix, &c)
    }

    /// `σ(g,h)` as kernel coordinates.
    pub fn sigma(&self, g: usize, h: usize) -> Vec<i64> {
        self.kernel_coords(self.sigma[g * self.base_order + h] as usize)
    }

    /// Checks centrality and the stem condition `A ⊆ [S,S]`.
    pub fn verify_stem(&self) -> Result<()> {
        let s = &self.total;
        for &k in &self.kernel {
            if (0..s.order()).any(|x| s.mul(k, x) != s.mul(x, k)) {
                return Err(Error::internal("kernel is not central"));
            }
        }
        let derived = s.derived_subgroup();
        let inside = self.kernel.iter().filter(|k| derived.binary_search(k).is_ok()).count();
        if inside != self.kernel.len() {
            return Err(Error::internal(format!(
                "stem condition fails: |ker ∩ [S,S]| = {inside}, |ker| = {}",
                self.kernel.len()
            )));
        }
        Ok(())
    }
}

/// A Schur covering group of `G`, built from the Hopf cocycle and checked to be stem.
pub fn schur_cover(g: &FiniteGroup) -> Result<CentralExtension> {
    let data = hopf(g)?;
    let n = g.order();
    let a = data.multiplier.clone();
    let radix: Vec<usize> = a.factors().iter().map(|&d| d as usize).collect();
    let m = data.tree.edges.len();
    let mut sigma = vec![0u32; n * n];
    let mut x = vec![0i64; m];
    for g1 in 0..n {
        for g2 in 0..n {
            x.iter_mut().for_each(|v| *v = 0);
            data.tree.add_translated_path(g, g1, g2, 1, &mut x);
            let coords: Vec<usize> = data
                .vcols
                .iter()
                .zip(a.factors())
                .map(|(col, &d)| {
                    let mut acc: i128 = 0;
                    for (xi, vi) in x.iter().zip(col) {
                        if *xi != 0 {
                            acc += *xi as i128 * *vi as i128;
                        }
                    }
                    acc.rem_euclid(d as i128) as usize
                })
                .collect();
            sigma[g1 * n + g2] = abelian_index(&radix, &coords) as u32;
        }
    }
    let ext = CentralExtension::from_cocycle(g, a, sigma)?;
    ext.verify_stem()?;
    if ext.total.order() != n * data.multiplier.order() as usize {
        return Err(Error::internal("cover has the wrong order"));
    }
    Ok(ext)
}

/// Checks that `c` is a valid class set: nonempty subset of `G∖{1}`, closed
/// under conjugation and invertible powers, generating `G`.
pub fn validate_c(g: &FiniteGroup, c: &[usize]) -> Result<Vec<usize>> {
    let n = g.order();
    let mut set = c.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut mark = vec![false; n];
    for &x in &set {
        if x >= n {
            return Err(Error::validation(format!("element {x} is out of range")));
        }
        if x == 0 {
            return Err(Error::validation("c must not contain the identity"));
        }
        mark[x] = true;
    }
    for &x in &set {
        for h in 0..n {
            let y = g.conj(h, x);
            if !mark[y] {
                return Err(Error::validation(format!("c is not closed under conjugation: {h}·{x}·{h}⁻¹ = {y} is missing")));
            }
        }
        let o = g.elem_order(x) as u64;
        for m in 2..o {
            if crate::linalg::gcd_u64(m, o) == 1 && !mark[g.pow(x, m as i64)] {
                return Err(Error::validation(format!("c is not closed under invertible powers: {x}^{m} is missing")));
            }
        }
    }
    if !g.generates(&set) {
        return Err(Error::validation("c does not generate G"));
    }
    Ok(set)
}

/// The reduced cover `S_c = S / ⟨[x̂, ŷ] : x ∈ c, [x,y] = 1⟩`, whose kernel is `H₂(G,c)`.
pub fn reduce_cover(g: &FiniteGroup, cover: &CentralExtension, c: &[usize]) -> Result<CentralExtension> {
    let n = g.order();
    let a = &cover.tau;
    let r = a.rank();
    // Relations: σ(x,y) − σ(y,x) for commuting x ∈ c, y ∈ G, plus the orders of A.
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &x in c {
        for y in 0..n {
            if g.mul(x, y) != g.mul(y, x) {
                continue;
            }
            let d = a.add(&cover.sigma(x, y), &a.neg(&cover.sigma(y, x)));
            if d.iter().any(|&v| v != 0) && seen.insert(d.clone()) {
                rows.push(d.into_iter().map(BigInt::from).collect());
            }
        }
    }
    for (i, &d) in a.factors().iter().enumerate() {
        let mut row = vec![BigInt::zero(); r];
        row[i] = BigInt::from(d);
        rows.push(row);
    }
    let s = smith(&rows, r);
    let mut keep = Vec::new();
    let mut factors = Vec::new();
    for (t, d) in s.diag.iter().enumerate() {
        let d = d.to_u64().expect("quotient of a finite group");
        if d > 1 {
            keep.push((t, d));
            factors.push(d);
        }
    }
    let a2 = AbelianStructure::from_chain(factors);
    let radix2: Vec<usize> = a2.factors().iter().map(|&d| d as usize).collect();
    // image of every element of A in A'
    let na = a.order() as usize;
    let image: Vec<usize> = (0..na)
        .map(|ai| {
            let x: Vec<BigInt> = cover.kernel_coords(ai).into_iter().map(BigInt::from).collect();
            let y = crate::linalg::vec_mat_big(&x, &s.v);
            let coords: Vec<usize> = keep
                .iter()
                .map(|&(t, d)| {
                    let bd = BigInt::from(d);
                    (((&y[t] % &bd) + &bd) % &bd).to_usize().unwrap()
                })
                .collect();
            abelian_index(&radix2, &coords)
        })
        .collect();
    let sigma: Vec<u32> = cover.sigma.iter().map(|&s| image[s as usize] as u32).collect();
    CentralExtension::from_cocycle(g, a2, sigma)
}

/// `H₂(G,c)`.
pub fn h2_reduced(g: &FiniteGroup, c: &[usize]) -> Result<AbelianStructure> {
    let c = validate_c(g, c)?;
    let cover = schur_cover(g)?;
    Ok(reduce_cover(g, &cover, &c)?.tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::catalog::{abelian, cyclic, dihedral, quaternion8, symmetric};

    #[test]
    fn small_multipliers() {
        assert!(h2(&cyclic(7)).unwrap().is_trivial());
        assert_eq!(h2(&abelian(&[3, 3])).unwrap().factors(), &[3]);
        assert!(h2(&symmetric(3).0).unwrap().is_trivial());
        assert_eq!(h2(&dihedral(4)).unwrap().factors(), &[2]);
        assert!(h2(&quaternion8()).unwrap().is_trivial());
        assert_eq!(h2(&abelian(&[2, 2, 2])).unwrap().factors(), &[2, 2, 2]);
        assert_eq!(h2(&symmetric(4).0).unwrap().factors(), &[2]);
    }

    #[test]
    fn cover_of_c3_squared_is_extraspecial() {
        // Both extraspecial groups of order 27 are Schur covers; the Hopf
        // complement picks the one of exponent 9.
        let g = abelian(&[3, 3]);
        let s = schur_cover(&g).unwrap();
        assert_eq!(s.total.order(), 27);
        assert_eq!(s.total.center().len(), 3);
        assert_eq!(s.total.derived_subgroup(), s.total.center());
        assert_eq!(s.total.exponent(), 9);
    }

    #[test]
    fn trivial_multiplier_gives_trivial_cover() {
        let g = cyclic(2);
        let s = schur_cover(&g).unwrap();
        assert_eq!(s.total, g);
    }

    #[test]
    fn reduced_multipliers() {
        let g = abelian(&[3, 3]);
        let all: Vec<usize> = (1..9).collect();
        assert!(h2_reduced(&g, &all).unwrap().is_trivial());
        // c = the two nontrivial classes of a single cyclic factor do not generate
        assert!(h2_reduced(&g, &[1, 2]).is_err());
        let d4 = dihedral(4);
        // reflections only: pairs of commuting reflections kill nothing new?
        let refl: Vec<usize> = (4..8).collect();
        let r = h2_reduced(&d4, &refl).unwrap();
        assert!(r.order() <= 2);
    }

    #[test]
    fn c_validation_names_the_failure() {
        let (s3, _) = symmetric(3);
        let e = validate_c(&s3, &[1]).unwrap_err();
        assert!(e.to_string().contains("conjugation"), "{e}");
        let e = validate_c(&cyclic(5), &[1]).unwrap_err();
        assert!(e.to_string().contains("powers"), "{e}");
    }
}
