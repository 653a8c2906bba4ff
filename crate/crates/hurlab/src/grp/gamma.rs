//! Groups with an action of Γ by automorphisms.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::FiniteGroup;
use crate::linalg::gcd_u64;
use crate::{par, Error, Result};

/// Above this many tuples the surjection count switches from direct
/// enumeration to Möbius inversion over the lattice of Γ-stable subgroups.
pub const DIRECT_TUPLE_LIMIT: u128 = 100_000_000;

/// A finite group `base` with a left action of `gamma`: `act[γ][h] = γ(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaGroup {
    pub base: FiniteGroup,
    pub gamma: FiniteGroup,
    act: Vec<Vec<u32>>,
}

impl GammaGroup {
    /// Validates that each `act[γ]` is an automorphism and `γ ↦ act[γ]` is a homomorphism.
    pub fn new(base: FiniteGroup, gamma: FiniteGroup, act: Vec<Vec<usize>>) -> Result<Self> {
        let n = base.order();
        if act.len() != gamma.order() {
            return Err(Error::validation(format!("action lists {} maps for a group of order {}", act.len(), gamma.order())));
        }
        for (g, p) in act.iter().enumerate() {
            if p.len() != n {
                return Err(Error::validation(format!("action of {g} has {} images, expected {n}", p.len())));
            }
            let mut hit = vec![false; n];
            for &x in p {
                if x >= n || hit[x] {
                    return Err(Error::validation(format!("action of {g} is not a permutation")));
                }
                hit[x] = true;
            }
            for a in 0..n {
                for b in 0..n {
                    if p[base.mul(a, b)] != base.mul(p[a], p[b]) {
                        return Err(Error::validation(format!("action of {g} is not an automorphism (fails on {a}, {b})")));
                    }
                }
            }
        }
        if act[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::validation("identity of Γ does not act trivially"));
        }
        for g in 0..gamma.order() {
            for d in 0..gamma.order() {
                let gd = gamma.mul(g, d);
                if (0..n).any(|h| act[gd][h] != act[g][act[d][h]]) {
                    return Err(Error::validation(format!("action is not a homomorphism at ({g}, {d})")));
                }
            }
        }
        let act = act.into_iter().map(|p| p.into_iter().map(|x| x as u32).collect()).collect();
        Ok(GammaGroup { base, gamma, act })
    }

    pub fn trivial_action(base: FiniteGroup, gamma: FiniteGroup) -> Self {
        let n = base.order();
        let act = vec![(0..n as u32).collect(); gamma.order()];
        GammaGroup { base, gamma, act }
    }

    /// Γ = ℤ/2 acting on an abelian group by inversion.
    pub fn inversion(base: FiniteGroup) -> Result<Self> {
        if !base.is_abelian() {
            return Err(Error::validation("inversion is an automorphism only of abelian groups"));
        }
        let gamma = super::catalog::cyclic(2);
        let n = base.order();
        let act = vec![(0..n).collect(), (0..n).map(|h| base.inv(h)).collect()];
        Self::new(base, gamma, act)
    }

    /// Extends images of generators of Γ to the whole action.
    pub fn from_generator_images(base: FiniteGroup, gamma: FiniteGroup, gens: &[usize], images: &[Vec<usize>]) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::validation("one image permutation is needed per generator"));
        }
        let n = base.order();
        let mut act: Vec<Option<Vec<usize>>> = vec![None; gamma.order()];
        act[0] = Some((0..n).collect());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for (s, img) in gens.iter().zip(images) {
                let gs = gamma.mul(g, *s);
                let cur = act[g].as_ref().unwrap();
                let next: Vec<usize> = (0..n).map(|h| cur[img[h]]).collect();
                match &act[gs] {
                    None => {
                        act[gs] = Some(next);
                        queue.push_back(gs);
                    }
                    Some(prev) if *prev != next => {
                        return Err(Error::validation("generator images do not define an action"));
                    }
                    _ => {}
                }
            }
        }
        let act: Option<Vec<Vec<usize>>> = act.into_iter().collect();
        let act = act.ok_or_else(|| Error::validation("listed elements do not generate Γ"))?;
        Self::new(base, gamma, act)
    }

    #[inline]
    pub fn act(&self, g: usize, h: usize) -> usize {
        self.act[g][h] as usize
    }

    pub fn action_table(&self) -> Vec<Vec<usize>> {
        self.act.iter().map(|p| p.iter().map(|&x| x as usize).collect()).collect()
    }

    /// Fixed points of the subgroup `d` of Γ.
    pub fn invariants(&self, d: &[usize]) -> Vec<usize> {
        (0..self.base.order()).filter(|&h| d.iter().all(|&g| self.act(g, h) == h)).collect()
    }

    /// `Y(g) = (g⁻¹γ(g))_γ`.
    pub fn y(&self, g: usize) -> Vec<usize> {
        let gi = self.base.inv(g);
        (0..self.gamma.order()).map(|c| self.base.mul(gi, self.act(c, g))).collect()
    }

    /// Smallest Γ-stable subgroup containing `gens`.
    pub fn stable_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut all: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.base.order()];
        for &x in gens {
            for c in 0..self.gamma.order() {
                let y = self.act(c, x);
                if !mark[y] {
                    mark[y] = true;
                    all.push(y);
                }
            }
        }
        self.base.generate(&all)
    }

    /// Smallest Γ-stable subgroup containing every coordinate of `Y(s)`, `s ∈ set`.
    pub fn admissible_closure(&self, set: &[usize]) -> Vec<usize> {
        let coords: Vec<usize> = set.iter().flat_map(|&s| self.y(s)).collect();
        self.stable_closure(&coords)
    }

    pub fn is_admissible(&self) -> bool {
        let all: Vec<usize> = (0..self.base.order()).collect();
        self.admissible_closure(&all).len() == self.base.order() && self.coprime()
    }

    /// `gcd(|H|, |Γ|) = 1`.
    pub fn coprime(&self) -> bool {
        gcd_u64(self.base.order() as u64, self.gamma.order() as u64) == 1
    }

    pub fn is_stable(&self, sub: &[usize]) -> bool {
        let mut mark = vec![false; self.base.order()];
        for &s in sub {
            mark[s] = true;
        }
        sub.iter().all(|&s| (0..self.gamma.order()).all(|c| mark[self.act(c, s)]))
    }

    /// Smallest Γ-stable normal subgroup containing `set`.
    pub fn gamma_normal_closure(&self, set: &[usize]) -> Vec<usize> {
        let mut cur: Vec<usize> = set.to_vec();
        loop {
            let images: Vec<usize> = cur.iter().flat_map(|&x| (0..self.gamma.order()).map(move |c| (c, x))).map(|(c, x)| self.act(c, x)).collect();
            let n = self.base.normal_closure(&images);
            if self.is_stable(&n) {
                return n;
            }
            cur = n;
        }
    }

    /// A Γ-stable subgroup as a Γ-group in its own right.
    pub fn restrict(&self, members: &[usize]) -> (GammaGroup, Vec<usize>) {
        let (sub, emb) = self.base.subgroup(members);
        let pos: HashMap<usize, usize> = emb.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let act = self.act.iter().map(|p| emb.iter().map(|&g| pos[&(p[g] as usize)] as u32).collect()).collect();
        (GammaGroup { base: sub, gamma: self.gamma.clone(), act }, emb)
    }

    /// `H/N` for a Γ-stable normal subgroup `N`.
    pub fn quotient(&self, normal: &[usize]) -> Result<(GammaGroup, Vec<usize>)> {
        if !self.is_stable(normal) {
            return Err(Error::validation("quotient by a subgroup that is not Γ-stable"));
        }
        let (q, map) = self.base.quotient(normal)?;
        let mut rep = vec![usize::MAX; q.order()];
        for (g, &c) in map.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = g;
            }
        }
        let act = self.act.iter().map(|p| rep.iter().map(|&r| map[p[r] as usize] as u32).collect()).collect();
        Ok((GammaGroup { base: q, gamma: self.gamma.clone(), act }, map))
    }

    /// `H ⋊ Γ` with element `(h, γ)` at index `γ·|H| + h`.
    pub fn semidirect(&self) -> SemidirectProduct {
        let (nh, ng) = (self.base.order(), self.gamma.order());
        let n = nh * ng;
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            let (g1, h1) = (a / nh, a % nh);
            for b in 0..n {
                let (g2, h2) = (b / nh, b % nh);
                let h = self.base.mul(h1, self.act(g1, h2));
                let g = self.gamma.mul(g1, g2);
                mul[a * n + b] = (g * nh + h) as u32;
            }
        }
        let group = FiniteGroup::from_raw(n, mul);
        SemidirectProduct {
            group,
            embed_h: (0..nh).collect(),
            embed_gamma: (0..ng).map(|g| g * nh).collect(),
            proj: (0..n).map(|a| a / nh).collect(),
        }
    }

    /// The lattice of Γ-stable subgroups.
    pub fn stable_lattice(&self) -> GammaLattice {
        GammaLattice::new(self)
    }

    /// `#{(h₁..hₙ) ∈ Hⁿ : admissible closure = H} / |H^Γ|ⁿ`.
    ///
    /// The division accounts for the fibres of restriction from the free
    /// Γ-group to the free admissible one: the image of a generator in `H` is
    /// only determined up to right multiplication by `H^Γ`.
    pub fn count_sur_free_admissible(&self, n: usize) -> BigUint {
        let lat = self.stable_lattice();
        let raw = if (self.base.order() as u128).saturating_pow(n as u32) <= DIRECT_TUPLE_LIMIT {
            lat.count_full_direct(n)
        } else {
            lat.count_full_mobius(n)
        };
        let fixed = BigUint::from(self.invariants(&(0..self.gamma.order()).collect::<Vec<_>>()).len()).pow(n as u32);
        assert!((&raw % &fixed).is_zero(), "tuple count not divisible by |H^Γ|^n");
        raw / fixed
    }

    /// `|Aut_Γ(H)|`.
    pub fn count_aut_gamma(&self) -> u64 {
        count_gamma_homs(self, self, true)
    }

    pub fn gamma_invariants_all(&self) -> Vec<usize> {
        self.invariants(&(0..self.gamma.order()).collect::<Vec<_>>())
    }
}

/// `H ⋊ Γ` together with its structure maps.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    pub embed_h: Vec<usize>,
    pub embed_gamma: Vec<usize>,
    /// Projection onto Γ.
    pub proj: Vec<usize>,
}

/// Γ-stable subgroups of a Γ-group, sorted by size then members.
#[derive(Clone, Debug)]
pub struct GammaLattice {
    pub subgroups: Vec<Vec<usize>>,
    masks: Vec<Vec<u64>>,
    index: HashMap<Vec<u64>, usize>,
    /// Id of the admissible closure of each single element.
    closure_of: Vec<usize>,
    join: Vec<Vec<u32>>,
}

fn mask_of(members: &[usize], n: usize) -> Vec<u64> {
    let mut m = vec![0u64; n.div_ceil(64)];
    for &x in members {
        m[x / 64] |= 1 << (x % 64);
    }
    m
}

impl GammaLattice {
    fn new(h: &GammaGroup) -> Self {
        let n = h.base.order();
        let mut subs: Vec<Vec<usize>> = vec![vec![0]];
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        index.insert(mask_of(&[0], n), 0);
        let mut i = 0;
        while i < subs.len() {
            let k = subs[i].clone();
            let kmask = mask_of(&k, n);
            for x in 0..n {
                if kmask[x / 64] >> (x % 64) & 1 == 1 {
                    continue;
                }
                let mut gens = k.clone();
                gens.push(x);
                let s = h.stable_closure(&gens);
                let m = mask_of(&s, n);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(m) {
                    e.insert(subs.len());
                    subs.push(s);
                }
            }
            i += 1;
        }
        subs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let masks: Vec<Vec<u64>> = subs.iter().map(|s| mask_of(s, n)).collect();
        let index: HashMap<Vec<u64>, usize> = masks.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let closure_of = (0..n).map(|x| index[&mask_of(&h.admissible_closure(&[x]), n)]).collect();
        let l = subs.len();
        let mut join = vec![vec![0u32; l]; l];
        for a in 0..l {
            for b in a..l {
                let mut gens = subs[a].clone();
                gens.extend_from_slice(&subs[b]);
                let j = index[&mask_of(&h.base.generate(&gens), n)] as u32;
                join[a][b] = j;
                join[b][a] = j;
            }
        }
        GammaLattice { subgroups: subs, masks, index, closure_of, join }
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn id_of(&self, members: &[usize], n: usize) -> Option<usize> {
        let mut s = members.to_vec();
        s.sort_unstable();
        self.index.get(&mask_of(&s, n)).copied()
    }

    fn contains(&self, big: usize, small: usize) -> bool {
        self.masks[small].iter().zip(&self.masks[big]).all(|(s, b)| s & !b == 0)
    }

    /// Number of n-tuples whose admissible closure is each lattice element.
    fn exact_counts_mobius(&self, n: usize) -> Vec<BigUint> {
        let l = self.len();
        let mut f: Vec<BigUint> = Vec::with_capacity(l);
        for k in 0..l {
            let p = self.closure_of.iter().filter(|&&c| self.contains(k, c)).count();
            let mut v = BigUint::from(p).pow(n as u32);
            for (j, fj) in f.iter().enumerate() {
                if self.contains(k, j) {
                    v -= fj;
                }
            }
            f.push(v);
        }
        f
    }

    /// Tuples with full admissible closure, by Möbius inversion.
    pub fn count_full_mobius(&self, n: usize) -> BigUint {
        self.exact_counts_mobius(n).pop().unwrap_or_default()
    }

    /// Tuples with full admissible closure, by enumerating every tuple.
    pub fn count_full_direct(&self, n: usize) -> BigUint {
        let h = self.closure_of.len();
        let top = self.top() as u32;
        if n == 0 {
            return if self.top() == 0 { BigUint::one() } else { BigUint::zero() };
        }
        let counts = par::map_range(h, |first| {
            let mut count: u64 = 0;
            let mut idx = vec![0usize; n - 1];
            let start = self.closure_of[first] as u32;
            loop {
                let mut j = start;
                for &x in &idx {
                    j = self.join[j as usize][self.closure_of[x]];
                }
                if j == top {
                    count += 1;
                }
                // odometer
                let mut t = 0;
                loop {
                    if t == idx.len() {
                        return count;
                    }
                    idx[t] += 1;
                    if idx[t] < h {
                        break;
                    }
                    idx[t] = 0;
                    t += 1;
                }
            }
        });
        counts.into_iter().map(BigUint::from).sum()
    }
}

/// Γ-equivariant homomorphisms `x → h` (both must share the same Γ table),
/// optionally only the surjective ones.
pub fn count_gamma_homs(x: &GammaGroup, h: &GammaGroup, surjective: bool) -> u64 {
    let mut count = 0u64;
    for_each_gamma_hom(x, h, |img| {
        if !surjective || is_onto(img, h.base.order()) {
            count += 1;
        }
        true
    });
    count
}

/// Whether a Γ-isomorphism `x → h` exists.
pub fn gamma_isomorphic(x: &GammaGroup, h: &GammaGroup) -> bool {
    if x.base.order() != h.base.order() || x.gamma.order() != h.gamma.order() {
        return false;
    }
    let mut found = false;
    for_each_gamma_hom(x, h, |img| {
        if is_onto(img, h.base.order()) {
            found = true;
            false
        } else {
            true
        }
    });
    found
}

fn is_onto(img: &[usize], n: usize) -> bool {
    let mut hit = vec![false; n];
    let mut c = 0;
    for &y in img {
        if !hit[y] {
            hit[y] = true;
            c += 1;
        }
    }
    c == n
}

/// Calls `f` with the full image table of every Γ-homomorphism until `f` returns false.
fn for_each_gamma_hom<F: FnMut(&[usize]) -> bool>(x: &GammaGroup, h: &GammaGroup, mut f: F) {
    assert_eq!(x.gamma, h.gamma, "Γ-groups over different acting groups");
    let nx = x.base.order();
    // Γ-generating set of x: greedy over elements in index order.
    let mut gens = Vec::new();
    let mut sub = vec![0usize];
    for g in 1..nx {
        if sub.binary_search(&g).is_err() {
            gens.push(g);
            sub = x.stable_closure(&gens);
        }
    }
    // Candidate images: same Γ-stabilizer behaviour and order dividing.
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = x.base.elem_order(g);
            (0..h.base.order())
                .filter(|&y| o.is_multiple_of(h.base.elem_order(y)))
                .filter(|&y| (0..x.gamma.order()).all(|c| x.act(c, g) != g || h.act(c, y) == y))
                .collect()
        })
        .collect();
    let ng = x.gamma.order();
    let mut choice = vec![0usize; gens.len()];
    if cands.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut img = vec![usize::MAX; nx];
    let mut queue = Vec::with_capacity(nx);
    loop {
        // try to extend
        img.iter_mut().for_each(|v| *v = usize::MAX);
        img[0] = 0;
        let mut ok = true;
        let mut orbit_gens: Vec<usize> = Vec::new();
        'seed: for (k, &g) in gens.iter().enumerate() {
            let y = cands[k][choice[k]];
            for c in 0..ng {
                let a = x.act(c, g);
                let b = h.act(c, y);
                if img[a] == usize::MAX {
                    img[a] = b;
                    orbit_gens.push(a);
                } else if img[a] != b {
                    ok = false;
                    break 'seed;
                }
            }
        }
        if ok {
            queue.clear();
            queue.push(0usize);
            let mut assigned: Vec<bool> = vec![false; nx];
            assigned[0] = true;
            let mut qi = 0;
            while qi < queue.len() && ok {
                let a = queue[qi];
                qi += 1;
                for &s in &orbit_gens {
                    let b = x.base.mul(a, s);
                    let v = h.base.mul(img[a], img[s]);
                    if !assigned[b] {
                        if img[b] != usize::MAX && img[b] != v {
                            ok = false;
                            break;
                        }
                        img[b] = v;
                        assigned[b] = true;
                        queue.push(b);
                    } else if img[b] != v {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && !f(&img) {
                return;
            }
        }
        // next choice
        let mut t = 0;
        loop {
            if t == choice.len() {
                return;
            }
            choice[t] += 1;
            if choice[t] < cands[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::catalog::{abelian, cyclic};
    use super::*;

    fn swap_c3sq() -> GammaGroup {
        let base = abelian(&[3, 3]);
        // element (a,b) at index a*3+b; γ swaps coordinates
        let swap: Vec<usize> = (0..9).map(|i| (i % 3) * 3 + i / 3).collect();
        GammaGroup::from_generator_images(base, cyclic(2), &[1], &[swap]).unwrap()
    }

    #[test]
    fn invariants_examples() {
        let h = GammaGroup::inversion(cyclic(9)).unwrap();
        assert_eq!(h.invariants(&[0, 1]), vec![0]);
        assert_eq!(h.invariants(&[0]).len(), 9);
        let s = swap_c3sq();
        assert_eq!(s.invariants(&[0, 1]), vec![0, 4, 8]);
    }

    #[test]
    fn y_map_and_admissibility() {
        let h = GammaGroup::inversion(cyclic(9)).unwrap();
        assert_eq!(h.y(1), vec![0, 7]);
        assert_eq!(h.admissible_closure(&[1]).len(), 9);
        assert!(h.is_admissible());
        let t = GammaGroup::trivial_action(cyclic(9), cyclic(2));
        assert_eq!(t.admissible_closure(&[1]), vec![0]);
        assert!(!t.is_admissible());
        let c33 = GammaGroup::inversion(abelian(&[3, 3])).unwrap();
        assert_eq!(c33.admissible_closure(&[3]).len(), 3);
    }

    #[test]
    fn semidirect_of_c3_is_s3() {
        let h = GammaGroup::inversion(cyclic(3)).unwrap();
        let sd = h.semidirect();
        assert_eq!(sd.group.order(), 6);
        assert!(!sd.group.is_abelian());
        let t = GammaGroup::trivial_action(cyclic(3), cyclic(2)).semidirect();
        assert!(t.group.is_abelian());
    }

    #[test]
    fn semidirect_of_c5_squared_census() {
        let sd = GammaGroup::inversion(abelian(&[5, 5])).unwrap().semidirect();
        assert_eq!(sd.group.order(), 50);
        let inv_outside = (25..50).filter(|&g| sd.group.elem_order(g) == 2).count();
        assert_eq!(inv_outside, 25);
    }

    #[test]
    fn semidirect_conjugation_recovers_action() {
        let h = swap_c3sq();
        let sd = h.semidirect();
        for c in 0..2 {
            for x in 0..9 {
                assert_eq!(sd.group.conj(sd.embed_gamma[c], sd.embed_h[x]), sd.embed_h[h.act(c, x)]);
            }
        }
    }

    #[test]
    fn surjection_counts() {
        let h = GammaGroup::inversion(cyclic(3)).unwrap();
        assert_eq!(h.count_sur_free_admissible(1), BigUint::from(2u32));
        assert_eq!(h.count_sur_free_admissible(0), BigUint::zero());
        assert_eq!(h.count_aut_gamma(), 2);
        let lat = h.stable_lattice();
        for n in 0..5 {
            assert_eq!(lat.count_full_direct(n), lat.count_full_mobius(n));
        }
    }

    #[test]
    fn gamma_iso_detection() {
        let a = swap_c3sq();
        let b = GammaGroup::inversion(abelian(&[3, 3])).unwrap();
        assert!(!gamma_isomorphic(&a, &b));
        assert!(gamma_isomorphic(&a, &a));
    }
}
