//! Nielsen tuples, their braid orbits, and lifting invariants.
//!
//! A tuple `(g₁, …, g_{n−1})` has entries in `c`, product `g∞⁻¹`, and
//! generates `G` together with `g∞`. Orbits are taken under the braid moves
//! `σᵢ` and simultaneous conjugation by `g∞`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::grp::FiniteGroup;
use crate::homology::{UContext, UElement};
use crate::{par, Error, Result};

/// Default cap on the number of tuples held in memory.
pub const DEFAULT_TUPLE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NielsenTuple {
    pub entries: Vec<usize>,
    pub g_inf: usize,
}

/// `σᵢ` for `1 ≤ i ≤ n−2`: `(gᵢ, gᵢ₊₁) ↦ (gᵢ gᵢ₊₁ gᵢ⁻¹, gᵢ)`.
pub fn braid_act(g: &FiniteGroup, i: usize, t: &NielsenTuple) -> Result<NielsenTuple> {
    check_index(i, t)?;
    let mut e = t.entries.clone();
    let (a, b) = (e[i - 1], e[i]);
    e[i - 1] = g.conj(a, b);
    e[i] = a;
    Ok(NielsenTuple { entries: e, g_inf: t.g_inf })
}

/// `σᵢ⁻¹`: `(gᵢ, gᵢ₊₁) ↦ (gᵢ₊₁, gᵢ₊₁⁻¹ gᵢ gᵢ₊₁)`.
pub fn braid_inverse(g: &FiniteGroup, i: usize, t: &NielsenTuple) -> Result<NielsenTuple> {
    check_index(i, t)?;
    let mut e = t.entries.clone();
    let (a, b) = (e[i - 1], e[i]);
    e[i - 1] = b;
    e[i] = g.conj(g.inv(b), a);
    Ok(NielsenTuple { entries: e, g_inf: t.g_inf })
}

fn check_index(i: usize, t: &NielsenTuple) -> Result<()> {
    if i == 0 || i + 1 > t.entries.len() {
        return Err(Error::domain(format!("braid index {i} out of range 1..={}", t.entries.len().saturating_sub(1))));
    }
    Ok(())
}

/// Simultaneous conjugation by `h`.
pub fn conjugate(g: &FiniteGroup, h: usize, t: &NielsenTuple) -> NielsenTuple {
    NielsenTuple { entries: t.entries.iter().map(|&x| g.conj(h, x)).collect(), g_inf: t.g_inf }
}

/// The tuples of `ℰ^n(g∞)`, packed into `u64`s with the first entry in the
/// most significant bits, so numeric order is lexicographic order.
#[derive(Clone, Debug)]
pub struct TupleSet {
    pub g_inf: usize,
    pub n: usize,
    bits: u32,
    packed: Vec<u64>,
}

impl TupleSet {
    pub fn len(&self) -> usize {
        self.packed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packed.is_empty()
    }

    fn width(&self) -> usize {
        self.n - 1
    }

    fn unpack_into(&self, x: u64, out: &mut [usize]) {
        let w = self.width();
        let mask = (1u64 << self.bits) - 1;
        for (j, o) in out.iter_mut().enumerate() {
            *o = ((x >> (self.bits as usize * (w - 1 - j))) & mask) as usize;
        }
    }

    fn pack(&self, e: &[usize]) -> u64 {
        e.iter().fold(0u64, |acc, &x| (acc << self.bits) | x as u64)
    }

    pub fn get(&self, i: usize) -> NielsenTuple {
        let mut e = vec![0; self.width()];
        self.unpack_into(self.packed[i], &mut e);
        NielsenTuple { entries: e, g_inf: self.g_inf }
    }

    pub fn index_of(&self, t: &NielsenTuple) -> Option<usize> {
        if t.entries.len() != self.width() || t.g_inf != self.g_inf {
            return None;
        }
        self.packed.binary_search(&self.pack(&t.entries)).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = NielsenTuple> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }
}

/// `#{(g₁..g_{n−1}) ∈ c^{n−1} : ∏ gᵢ = g∞⁻¹}`, an upper bound for `|ℰ|`.
pub fn product_count(g: &FiniteGroup, c: &[usize], g_inf: usize, n: usize) -> u128 {
    let mut dp = vec![0u128; g.order()];
    dp[0] = 1;
    for _ in 0..n - 1 {
        let mut next = vec![0u128; g.order()];
        for (x, &cnt) in dp.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            for &y in c {
                next[g.mul(x, y)] = next[g.mul(x, y)].saturating_add(cnt);
            }
        }
        dp = next;
    }
    dp[g.inv(g_inf)]
}

/// Every tuple of `ℰ^n(g∞)`, in lexicographic order.
pub fn enumerate_tuples(g: &FiniteGroup, c: &[usize], g_inf: usize, n: usize, budget: u64) -> Result<TupleSet> {
    if n < 2 {
        return Err(Error::domain("n must be at least 2"));
    }
    if g_inf == 0 || g_inf >= g.order() {
        return Err(Error::domain("g_inf must be a nontrivial element"));
    }
    let mut c = c.to_vec();
    c.sort_unstable();
    c.dedup();
    let bits = (usize::BITS - (g.order() - 1).leading_zeros()).max(1);
    if bits as usize * (n - 1) > 64 {
        return Err(Error::capacity(format!("{} entries of {bits} bits do not fit the packed tuple format", n - 1)));
    }
    let estimate = product_count(g, &c, g_inf, n);
    if estimate > budget as u128 {
        return Err(Error::capacity(format!("about {estimate} tuples (upper bound) exceed the budget of {budget}")));
    }
    let nc = c.len();
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &x) in c.iter().enumerate() {
        pos[x] = i;
    }
    let target = g.inv(g_inf);
    let width = n - 1;
    let chunks = if width == 1 {
        vec![if pos[target] != usize::MAX && g.generates(&[target, g_inf]) { vec![target as u64] } else { vec![] }]
    } else {
        par::map_range(nc, |first| {
            let mut out = Vec::new();
            let mut cache: HashMap<u128, bool> = HashMap::new();
            let mut entries = vec![0usize; width];
            let mut prods = vec![0usize; width];
            entries[0] = c[first];
            prods[0] = c[first];
            dfs(g, &c, &pos, g_inf, target, bits, 1, &mut entries, &mut prods, &mut cache, &mut out);
            out
        })
    };
    let packed: Vec<u64> = chunks.into_iter().flatten().collect();
    debug_assert!(packed.windows(2).all(|w| w[0] < w[1]));
    Ok(TupleSet { g_inf, n, bits, packed })
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    g: &FiniteGroup,
    c: &[usize],
    pos: &[usize],
    g_inf: usize,
    target: usize,
    bits: u32,
    depth: usize,
    entries: &mut [usize],
    prods: &mut [usize],
    cache: &mut HashMap<u128, bool>,
    out: &mut Vec<u64>,
) {
    let width = entries.len();
    if depth == width - 1 {
        let last = g.mul(g.inv(prods[depth - 1]), target);
        if pos[last] == usize::MAX {
            return;
        }
        entries[depth] = last;
        let generates = if c.len() <= 128 {
            let mask = entries.iter().fold(0u128, |m, &x| m | 1u128 << pos[x]);
            *cache.entry(mask).or_insert_with(|| {
                let mut gens: Vec<usize> = entries.to_vec();
                gens.push(g_inf);
                g.generates(&gens)
            })
        } else {
            let mut gens: Vec<usize> = entries.to_vec();
            gens.push(g_inf);
            g.generates(&gens)
        };
        if generates {
            out.push(entries.iter().fold(0u64, |acc, &x| (acc << bits) | x as u64));
        }
        return;
    }
    for &x in c {
        entries[depth] = x;
        prods[depth] = g.mul(prods[depth - 1], x);
        dfs(g, c, pos, g_inf, target, bits, depth + 1, entries, prods, cache, out);
    }
}

/// Partition of a [`TupleSet`] into braid/`⟨g∞⟩`-orbits.
#[derive(Clone, Debug)]
pub struct Orbits {
    pub tuples: TupleSet,
    /// Orbit id of each tuple; orbit ids follow the order of their lex-min member.
    pub orbit_of: Vec<u32>,
    /// Index (into `tuples`) of the lex-min member of each orbit.
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

/// Orbits under all `σᵢ` and conjugation by `g∞`.
pub fn orbits(g: &FiniteGroup, c: &[usize], g_inf: usize, n: usize, budget: u64) -> Result<Orbits> {
    let tuples = enumerate_tuples(g, c, g_inf, n, budget)?;
    let len = tuples.len();
    if len > u32::MAX as usize {
        return Err(Error::capacity("too many tuples for 32-bit orbit ids"));
    }
    let width = n - 1;
    const CHUNK: usize = 1 << 14;
    let nchunks = len.div_ceil(CHUNK);
    let edge_chunks: Vec<Vec<(u32, u32)>> = par::map_range(nchunks, |ci| {
        let mut out = Vec::new();
        let mut e = vec![0usize; width];
        let mut f = vec![0usize; width];
        for i in ci * CHUNK..((ci + 1) * CHUNK).min(len) {
            tuples.unpack_into(tuples.packed[i], &mut e);
            for k in 0..width.saturating_sub(1) {
                f.copy_from_slice(&e);
                f[k] = g.conj(e[k], e[k + 1]);
                f[k + 1] = e[k];
                let j = tuples.packed.binary_search(&tuples.pack(&f)).expect("braid move leaves the tuple set");
                if j != i {
                    out.push((i as u32, j as u32));
                }
            }
            for k in 0..width {
                f[k] = g.conj(g_inf, e[k]);
            }
            let j = tuples.packed.binary_search(&tuples.pack(&f)).expect("conjugation leaves the tuple set");
            if j != i {
                out.push((i as u32, j as u32));
            }
        }
        out
    });
    let mut parent: Vec<u32> = (0..len as u32).collect();
    for (a, b) in edge_chunks.into_iter().flatten() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            // keep the smaller index as root, so roots are lex-min members
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi as usize] = lo;
        }
    }
    let mut orbit_of = vec![0u32; len];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut id_of_root: HashMap<u32, u32> = HashMap::new();
    for i in 0..len {
        let r = find(&mut parent, i as u32);
        let id = *id_of_root.entry(r).or_insert_with(|| {
            reps.push(r as usize);
            sizes.push(0);
            (reps.len() - 1) as u32
        });
        orbit_of[i] = id;
        sizes[id as usize] += 1;
    }
    Ok(Orbits { tuples, orbit_of, reps, sizes })
}

/// The component label: `z_full = [g₁]⋯[g_{n−1}][g∞] ∈ K(G,c)` as `(h, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftingInvariant {
    pub h: Vec<i64>,
    pub v: Vec<BigInt>,
    pub g_inf: usize,
}

impl LiftingInvariant {
    pub fn degree(&self) -> BigInt {
        self.v.iter().sum()
    }

    pub fn min_multiplicity(&self) -> Option<BigInt> {
        self.v.iter().min().cloned()
    }
}

/// `[g₁]⋯[g_{n−1}]` as an element of `U(G,c)`.
pub fn bracket_product(ctx: &UContext, entries: &[usize]) -> Result<UElement> {
    let mut acc = ctx.identity();
    for &x in entries {
        acc = ctx.mul(&acc, &ctx.bracket(x)?);
    }
    Ok(acc)
}

pub fn lifting_invariant(ctx: &UContext, t: &NielsenTuple) -> Result<LiftingInvariant> {
    if !ctx.in_c(t.g_inf) {
        return Err(Error::domain("g_inf is not in c"));
    }
    let z = ctx.mul(&bracket_product(ctx, &t.entries)?, &ctx.bracket(t.g_inf)?);
    let (h, v) = ctx.k_decompose(&z).map_err(|e| Error::internal(format!("lifting invariant outside K(G,c): {e}")))?;
    Ok(LiftingInvariant { h, v, g_inf: t.g_inf })
}

/// The power-map permutations of `c/G` for every unit mod `exp(G)`.
pub fn power_permutations(ctx: &UContext) -> Vec<Vec<usize>> {
    let e = ctx.g.exponent();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for k in 1..=e.max(1) {
        if crate::linalg::gcd_u64(k, e) != 1 {
            continue;
        }
        let pm = ctx.classes.power_map(&ctx.g, k as i64).expect("unit exponent");
        let perm: Vec<usize> = ctx
            .class_reps
            .iter()
            .map(|&r| ctx.class_index[pm[ctx.classes.class_of[r]]].expect("c closed under powers"))
            .collect();
        if !perms.contains(&perm) {
            perms.push(perm);
        }
    }
    perms
}

/// Lex-minimal image of a degree vector under the power-map permutations.
pub fn shape_of(perms: &[Vec<usize>], v: &[BigInt]) -> Vec<BigInt> {
    let mut best: Option<Vec<BigInt>> = None;
    for p in perms {
        let mut w = vec![BigInt::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            w[p[i]] = x.clone();
        }
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    best.unwrap_or_else(|| v.to_vec())
}

pub fn shape_invariant(ctx: &UContext, t: &NielsenTuple) -> Result<Vec<BigInt>> {
    let inv = lifting_invariant(ctx, t)?;
    Ok(shape_of(&power_permutations(ctx), &inv.v))
}

#[derive(Clone, Debug)]
pub struct BraidOrbit {
    pub rep: NielsenTuple,
    pub size: usize,
    pub invariant: LiftingInvariant,
    pub shape: Vec<BigInt>,
}

/// Orbits with invariants, plus whether the invariant was constant on each orbit.
#[derive(Clone, Debug)]
pub struct Classification {
    pub g_inf: usize,
    pub n: usize,
    pub tuple_count: usize,
    pub orbits: Vec<BraidOrbit>,
    pub invariant_constant: bool,
}

pub fn classify(ctx: &UContext, g_inf: usize, n: usize, budget: u64) -> Result<Classification> {
    if !ctx.in_c(g_inf) {
        return Err(Error::domain("g_inf is not in c"));
    }
    let orb = orbits(&ctx.g, &ctx.c, g_inf, n, budget)?;
    let perms = power_permutations(ctx);
    let lift_inf = ctx.lift(g_inf);
    let s_of = |entries: &[usize]| -> usize {
        let sc = &ctx.sc.total;
        let s = entries.iter().fold(0usize, |acc, &x| sc.mul(acc, ctx.lift(x)));
        sc.mul(s, lift_inf)
    };
    let rep_s: Vec<usize> = orb.reps.iter().map(|&r| s_of(&orb.tuples.get(r).entries)).collect();
    let len = orb.tuples.len();
    const CHUNK: usize = 1 << 14;
    let ok = par::map_range(len.div_ceil(CHUNK), |ci| {
        let mut e = vec![0usize; n - 1];
        (ci * CHUNK..((ci + 1) * CHUNK).min(len)).all(|i| {
            orb.tuples.unpack_into(orb.tuples.packed[i], &mut e);
            s_of(&e) == rep_s[orb.orbit_of[i] as usize]
        })
    });
    let invariant_constant = ok.into_iter().all(|b| b);
    let mut orbits = Vec::with_capacity(orb.reps.len());
    for (id, &r) in orb.reps.iter().enumerate() {
        let rep = orb.tuples.get(r);
        let invariant = lifting_invariant(ctx, &rep)?;
        let shape = shape_of(&perms, &invariant.v);
        orbits.push(BraidOrbit { rep, size: orb.sizes[id], invariant, shape });
    }
    Ok(Classification { g_inf, n, tuple_count: len, orbits, invariant_constant })
}

/// `K(G,c)_{n,≥M}`: all `(h, v)` with `Σv = n`, every `vᵢ ≥ M`, `v ↦ 0` in `G^ab`.
pub fn k_elements(ctx: &UContext, n: usize, m: usize) -> Vec<(Vec<i64>, Vec<BigInt>)> {
    let r = ctx.num_classes();
    let mut vs = Vec::new();
    compositions(n, r, m, &mut Vec::new(), &mut vs);
    let hs = ctx.h2c.elements();
    let mut out = Vec::new();
    for v in vs {
        let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
        if ctx.v_to_gab(&v).iter().any(|&x| x != 0) {
            continue;
        }
        for h in &hs {
            out.push((h.clone(), v.clone()));
        }
    }
    out
}

fn compositions(n: usize, parts: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if n == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if n < min * parts {
        return;
    }
    let max = n - min * (parts - 1);
    for x in min..=max {
        cur.push(x);
        compositions(n - x, parts - 1, min, cur, out);
        cur.pop();
    }
}

/// Outcome of comparing orbits against `K(G,c)_{n,≥M}` for one `g∞`.
#[derive(Clone, Debug)]
pub struct StableReport {
    pub g_inf: usize,
    pub n: usize,
    pub m: usize,
    /// Orbits whose invariant has every multiplicity `≥ M`.
    pub orbit_count: usize,
    pub k_count: usize,
    pub injective: bool,
    pub surjective: bool,
    /// Invariants shared by several orbits, with their representatives.
    pub collisions: Vec<(LiftingInvariant, Vec<NielsenTuple>)>,
    /// Elements of `K_{n,≥M}` not reached by any orbit.
    pub missing: Vec<(Vec<i64>, Vec<BigInt>)>,
}

impl StableReport {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }

    pub fn both_nonempty(&self) -> bool {
        self.orbit_count > 0 && self.k_count > 0
    }
}

/// One report per generator `g∞` of the cyclic group `g_inf_group`.
pub fn stable_bijection_report(ctx: &UContext, g_inf_group: &[usize], n: usize, m: usize, budget: u64) -> Result<Vec<StableReport>> {
    let g = &ctx.g;
    let gens: Vec<usize> = g_inf_group
        .iter()
        .copied()
        .filter(|&x| x != 0 && g.generate(&[x]).len() == g_inf_group.len())
        .collect();
    if gens.is_empty() {
        return Err(Error::domain("G_inf is not a nontrivial cyclic group"));
    }
    let kset = k_elements(ctx, n, m);
    let mut reports = Vec::new();
    for g_inf in gens {
        let cl = classify(ctx, g_inf, n, budget)?;
        if !cl.invariant_constant {
            return Err(Error::internal("lifting invariant is not constant on a braid orbit"));
        }
        let mut by_inv: BTreeMap<LiftingInvariant, Vec<NielsenTuple>> = BTreeMap::new();
        for o in &cl.orbits {
            if o.invariant.v.iter().all(|x| x.to_usize().is_some_and(|x| x >= m)) {
                by_inv.entry(o.invariant.clone()).or_default().push(o.rep.clone());
            }
        }
        let orbit_count = by_inv.values().map(Vec::len).sum();
        let collisions: Vec<_> = by_inv.iter().filter(|(_, r)| r.len() > 1).map(|(i, r)| (i.clone(), r.clone())).collect();
        let hit: std::collections::HashSet<(Vec<i64>, Vec<BigInt>)> = by_inv.keys().map(|i| (i.h.clone(), i.v.clone())).collect();
        let missing: Vec<_> = kset.iter().filter(|k| !hit.contains(*k)).cloned().collect();
        reports.push(StableReport {
            g_inf,
            n,
            m,
            orbit_count,
            k_count: kset.len(),
            injective: collisions.is_empty(),
            surjective: missing.is_empty(),
            collisions,
            missing,
        });
    }
    Ok(reports)
}
