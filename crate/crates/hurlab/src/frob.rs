//! The Frobenius action `q⁻¹ ⋆` on lifting invariants, fixed counts,
//! point-count main terms, and moment predictions.
//!
//! For `x ∈ c` put `δ(x) = [x^{q⁻¹}]^q [x]⁻¹`, an element of the central
//! subgroup `K(G,c)`. Then `[x^{q⁻¹}]^q = δ(x)[x]`, so for `z = [g₁]⋯[g_{n−1}][g∞]`
//! with degree vector `m`,
//!
//! `q⁻¹ ⋆ z = (D·z)^{q⁻¹}`, `D = ∏_γ δ(x_γ)^{m_γ}`.
//!
//! The free part of `D·z` is `q·π_*(m)`, where `π` sends a class to the class
//! of its `q⁻¹`-th powers, so the `q⁻¹`-th root is an exact division there
//! and an inverse power on the torsion part.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::grp::{FiniteGroup, GammaGroup};
use crate::homology::{h2, UContext, UElement};
use crate::hurwitz::LiftingInvariant;
use crate::linalg::{factorize, gcd_u64, mod_inv};
use crate::{par, Error, Result};

/// A validated `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusParams {
    pub q: BigUint,
    /// Whether `q` is a prime power. Formulas only use congruences, so this is advisory.
    pub prime_power: bool,
}

impl FrobeniusParams {
    /// Requires `q ≥ 2` and `gcd(q, |G|) = 1`.
    pub fn new(q: impl Into<BigUint>, group_order: usize) -> Result<Self> {
        let q: BigUint = q.into();
        if q < BigUint::from(2u32) {
            return Err(Error::validation("q must be at least 2"));
        }
        let r = (&q % group_order as u64).to_u64().unwrap();
        if gcd_u64(r, group_order as u64) != 1 {
            return Err(Error::validation(format!("gcd(q, |G|) = 1 fails: q = {q}, |G| = {group_order}")));
        }
        let prime_power = q.to_u64().is_none_or(|v| factorize(v).len() == 1);
        Ok(FrobeniusParams { q, prime_power })
    }

    pub fn rem(&self, m: u64) -> u64 {
        (&self.q % m).to_u64().unwrap()
    }

    /// `q⁻¹ mod m` (`m ≥ 1`).
    pub fn inv_mod(&self, m: u64) -> u64 {
        if m == 1 {
            0
        } else {
            mod_inv(self.rem(m), m).expect("q is a unit modulo every divisor of |G|")
        }
    }

    /// Checks `q ≡ 1 mod m`.
    pub fn require_one_mod(&self, m: u64, what: &str) -> Result<()> {
        if m > 1 && self.rem(m) != 1 {
            return Err(Error::validation(format!("q ≡ 1 mod {what} = {m} fails for q = {}", self.q)));
        }
        Ok(())
    }
}

/// `u^q` in `U(G,c)` for a possibly large `q`.
fn upow_big(ctx: &UContext, u: &UElement, q: &FrobeniusParams) -> UElement {
    let s = &ctx.sc.total;
    let e = q.rem(s.elem_order(u.s) as u64) as i64;
    let qb = BigInt::from(q.q.clone());
    UElement { s: s.pow(u.s, e), v: u.v.iter().map(|x| x * &qb).collect() }
}

/// `δ(x) = [x^{q⁻¹}]^q [x]⁻¹ ∈ K(G,c)` as `(h, v)`.
pub fn delta_correction(ctx: &UContext, x: usize, q: &FrobeniusParams) -> Result<(Vec<i64>, Vec<BigInt>)> {
    if !ctx.in_c(x) {
        return Err(Error::domain(format!("element {x} is not in c")));
    }
    let ord = ctx.g.elem_order(x) as u64;
    if gcd_u64(q.rem(ord), ord) != 1 {
        return Err(Error::domain(format!("q is not invertible modulo ord(x) = {ord}")));
    }
    let y = ctx.g.pow(x, q.inv_mod(ord) as i64);
    let d = ctx.mul(&upow_big(ctx, &ctx.bracket(y)?, q), &ctx.inv(&ctx.bracket(x)?));
    ctx.k_decompose(&d).map_err(|e| Error::internal(format!("δ({x}) is outside K(G,c): {e}")))
}

/// Per-`q` data reused across many invariants.
#[derive(Clone, Debug)]
pub struct FrobeniusData {
    pub params: FrobeniusParams,
    /// `δ` of each class representative of `c/G`.
    pub deltas: Vec<(Vec<i64>, Vec<BigInt>)>,
    /// `π`: class index ↦ class index of `q⁻¹`-th powers.
    pub pi: Vec<usize>,
    /// `q⁻¹ mod exp(H₂(G,c))`.
    pub q_inv_h2: u64,
}

impl FrobeniusData {
    pub fn new(ctx: &UContext, params: FrobeniusParams) -> Result<Self> {
        let deltas = ctx.class_reps.iter().map(|&x| delta_correction(ctx, x, &params)).collect::<Result<Vec<_>>>()?;
        let pi = ctx
            .class_reps
            .iter()
            .map(|&x| {
                let ord = ctx.g.elem_order(x) as u64;
                ctx.class_of(ctx.g.pow(x, params.inv_mod(ord) as i64)).expect("c is closed under invertible powers")
            })
            .collect();
        let q_inv_h2 = params.inv_mod(ctx.h2c.exponent());
        Ok(FrobeniusData { params, deltas, pi, q_inv_h2 })
    }

    /// `h_D(m) = Σ m_γ h(δ_γ)`.
    pub fn h_d(&self, ctx: &UContext, m: &[BigInt]) -> Vec<i64> {
        let mut acc = ctx.h2c.zero();
        for (mg, (h, _)) in m.iter().zip(&self.deltas) {
            for ((a, &hi), &d) in acc.iter_mut().zip(h).zip(ctx.h2c.factors()) {
                *a += (mg * hi).mod_floor(&BigInt::from(d)).to_i64().unwrap();
            }
        }
        ctx.h2c.reduce(&mut acc);
        acc
    }

    /// `q⁻¹ ⋆ (h, v)` on `K(G,c)`.
    pub fn apply(&self, ctx: &UContext, h: &[i64], v: &[BigInt]) -> Result<(Vec<i64>, Vec<BigInt>)> {
        let qb = BigInt::from(self.params.q.clone());
        // free part of D·z
        let mut free: Vec<BigInt> = v.to_vec();
        for (mg, (_, dv)) in v.iter().zip(&self.deltas) {
            for (f, d) in free.iter_mut().zip(dv) {
                *f += mg * d;
            }
        }
        let mut new_v = Vec::with_capacity(free.len());
        for f in &free {
            let (quo, rem) = f.div_rem(&qb);
            if !rem.is_zero() {
                return Err(Error::internal("free part of D·z is not divisible by q"));
            }
            new_v.push(quo);
        }
        let sum = ctx.h2c.add(&self.h_d(ctx, v), h);
        let new_h = ctx.h2c.scale(&sum, self.q_inv_h2 as i64);
        Ok((new_h, new_v))
    }
}

/// `q⁻¹ ⋆` on a lifting invariant. Requires `q ≡ 1 mod ord(g∞)`.
pub fn frobenius_map(ctx: &UContext, inv: &LiftingInvariant, q: &FrobeniusParams) -> Result<LiftingInvariant> {
    q.require_one_mod(ctx.g.elem_order(inv.g_inf) as u64, "ord(g_inf)")?;
    let data = FrobeniusData::new(ctx, q.clone())?;
    let (h, v) = data.apply(ctx, &inv.h, &inv.v)?;
    Ok(LiftingInvariant { h, v, g_inf: inv.g_inf })
}

/// `ord_k(q)`: the order of `q` modulo `lcm(exp(H₂(G,c)), exp(G))`.
pub fn frobenius_period(ctx: &UContext, q: &FrobeniusParams) -> u64 {
    let m = crate::linalg::lcm_u64(ctx.h2c.exponent(), ctx.g.exponent());
    if m == 1 {
        1
    } else {
        crate::linalg::mult_order(q.rem(m), m).expect("q is a unit")
    }
}

/// Number of orbits of `q`-th powering on the classes in `c`.
pub fn powering_orbits(ctx: &UContext, q: &FrobeniusParams) -> Result<usize> {
    Ok(cycles(&FrobeniusData::new(ctx, q.clone())?.pi).len())
}

fn cycles(pi: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; pi.len()];
    let mut out = Vec::new();
    for s in 0..pi.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut x = pi[s];
        while x != s {
            seen[x] = true;
            c.push(x);
            x = pi[x];
        }
        out.push(c);
    }
    out
}

/// The fixed-point count `b` and the powering orbit count `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedCount {
    pub n: usize,
    pub b: BigUint,
    pub d: usize,
    /// `b` split by the `H₂(G,c)`-component of the fixed invariants.
    pub refinement: BTreeMap<Vec<i64>, BigUint>,
}

/// Fixed points of `q⁻¹ ⋆` on `K(G,c)_{n,≥M}`, counted in closed form and
/// by brute force. The two must agree exactly.
pub fn fixed_counts_min(ctx: &UContext, q: &FrobeniusParams, n: usize, min: usize) -> Result<FixedCount> {
    let data = FrobeniusData::new(ctx, q.clone())?;
    let d = cycles(&data.pi).len();
    let closed = closed_form(ctx, &data, n, min);
    let brute = brute_force(ctx, &data, n, min)?;
    if closed != brute {
        return Err(Error::internal(format!("fixed count mismatch at n = {n}: closed form {closed:?}, brute force {brute:?}")));
    }
    let b = closed.values().sum();
    Ok(FixedCount { n, b, d, refinement: closed })
}

/// [`fixed_counts_min`] with `M = 0`, after checking `q ≡ 1 mod |G∞|`.
pub fn fixed_counts(ctx: &UContext, g_inf_group: &[usize], q: &FrobeniusParams, n: usize) -> Result<FixedCount> {
    q.require_one_mod(g_inf_group.len() as u64, "|G_inf|")?;
    fixed_counts_min(ctx, q, n, 0)
}

/// Closed form: `v` constant on `π`-cycles, `v ↦ 0` in `G^ab`, and `h` with `(q−1)h = h_D(v)`.
fn closed_form(ctx: &UContext, data: &FrobeniusData, n: usize, min: usize) -> BTreeMap<Vec<i64>, BigUint> {
    let cyc = cycles(&data.pi);
    let lens: Vec<usize> = cyc.iter().map(Vec::len).collect();
    let mut out: BTreeMap<Vec<i64>, BigUint> = BTreeMap::new();
    let qm1 = data.params.q.clone() - 1u32;
    let mut per_cycle = Vec::new();
    weighted_compositions(n, &lens, min, &mut Vec::new(), &mut per_cycle);
    for w in per_cycle {
        let mut v = vec![BigInt::zero(); ctx.num_classes()];
        for (c, &x) in cyc.iter().zip(&w) {
            for &i in c {
                v[i] = BigInt::from(x);
            }
        }
        if ctx.v_to_gab(&v).iter().any(|&x| x != 0) {
            continue;
        }
        let target = data.h_d(ctx, &v);
        for h in torsion_solutions(ctx.h2c.factors(), &qm1, &target) {
            *out.entry(h).or_default() += 1u32;
        }
    }
    out
}

/// Nonnegative `w` with `Σ w_i·len_i = n` and every `w_i ≥ min`.
fn weighted_compositions(n: usize, lens: &[usize], min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let i = cur.len();
    if i == lens.len() {
        if n == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let rest_min: usize = lens[i + 1..].iter().map(|l| l * min).sum();
    let mut x = min;
    while x * lens[i] + rest_min <= n {
        cur.push(x);
        weighted_compositions(n - x * lens[i], lens, min, cur, out);
        cur.pop();
        x += 1;
    }
}

/// All `h` in `⊕ ℤ/d_i` with `k·h = t`.
fn torsion_solutions(factors: &[u64], k: &BigUint, t: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (&d, &ti) in factors.iter().zip(t) {
        let km = (k % d).to_u64().unwrap();
        let sols: Vec<i64> = (0..d).filter(|&h| (km as u128 * h as u128 % d as u128) as i64 == ti.rem_euclid(d as i64)).map(|h| h as i64).collect();
        out = out.into_iter().flat_map(|p| sols.iter().map(move |&s| [p.clone(), vec![s]].concat())).collect();
    }
    out
}

fn brute_force(ctx: &UContext, data: &FrobeniusData, n: usize, min: usize) -> Result<BTreeMap<Vec<i64>, BigUint>> {
    let ks = crate::hurwitz::k_elements(ctx, n, min);
    let fixed = par::map(&ks, |(h, v)| data.apply(ctx, h, v).map(|(h2, v2)| (&h2 == h && &v2 == v).then(|| h.clone())));
    let mut out: BTreeMap<Vec<i64>, BigUint> = BTreeMap::new();
    for f in fixed {
        if let Some(h) = f? {
            *out.entry(h).or_default() += 1u32;
        }
    }
    Ok(out)
}

/// Main term `b·#{generators of G∞}·q^{n−1}` with error `O(q^{(2n−3)/2})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurPrediction {
    pub b: BigUint,
    pub generators: usize,
    /// `π = b·#{generators of G∞}`.
    pub pi: BigUint,
    pub main_term: BigUint,
    /// The error exponent `(2n−3)/2` as `(numerator, 2)`; its constant is unknown.
    pub error_exponent: (i64, i64),
}

pub fn predicted_hur_count(ctx: &UContext, g_inf_group: &[usize], q: &FrobeniusParams, n: usize) -> Result<HurPrediction> {
    let fc = fixed_counts(ctx, g_inf_group, q, n)?;
    let generators = g_inf_group.iter().filter(|&&x| ctx.g.elem_order(x) == g_inf_group.len()).count();
    let pi = &fc.b * generators;
    let main_term = &pi * q.q.pow(n as u32 - 1);
    Ok(HurPrediction { b: fc.b, generators, pi, main_term, error_exponent: (2 * n as i64 - 3, 2) })
}

/// Validates that `sub` is a cyclic subgroup of `g`.
fn cyclic_subgroup(g: &FiniteGroup, sub: &[usize], what: &str) -> Result<Vec<usize>> {
    let mut s = sub.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.iter().any(|&x| x >= g.order()) || g.generate(&s) != s {
        return Err(Error::validation(format!("{what} is not a subgroup")));
    }
    if !s.iter().any(|&x| g.elem_order(x) == s.len()) {
        return Err(Error::validation(format!("{what} is not cyclic")));
    }
    Ok(s)
}

/// `[H^{Γ∞} : H^Γ]`.
pub fn invariant_index(h: &GammaGroup, gamma_inf: &[usize]) -> usize {
    h.invariants(gamma_inf).len() / h.gamma_invariants_all().len()
}

/// The conjectural `H`-moment `#H₂(H⋊Γ,ℤ)_{(|Γ|)'}[q−1] / [H^{Γ∞}:H^Γ]`,
/// or its `q → ∞` value `1/[H^{Γ∞}:H^Γ]` when `q` is `None`.
pub fn moment_prediction(h: &GammaGroup, gamma_inf: &[usize], q: Option<&BigUint>) -> Result<BigRational> {
    let gamma_inf = cyclic_subgroup(&h.gamma, gamma_inf, "Γ_inf")?;
    if !h.is_admissible() {
        return Err(Error::validation("H is not an admissible Γ-group"));
    }
    let index = BigInt::from(invariant_index(h, &gamma_inf));
    let Some(q) = q else {
        return Ok(BigRational::new(BigInt::one(), index));
    };
    let hg = (h.base.order() * h.gamma.order()) as u64;
    if gcd_u64((q % hg).to_u64().unwrap(), hg) != 1 {
        return Err(Error::validation(format!("gcd(q, |H||Γ|) = 1 fails for q = {q}")));
    }
    let gi = gamma_inf.len() as u64;
    if (q % gi).to_u64().unwrap() != 1 % gi {
        return Err(Error::domain(format!(
            "q ≢ 1 mod |Γ_inf| = {gi}: no imaginary (Γ, Γ_inf)-extensions of F_q(t) exist, so the moment is over an empty set"
        )));
    }
    let sd = h.semidirect();
    let mult = h2(&sd.group)?.prime_to(h.gamma.order() as u64);
    let qm1 = q - 1u32;
    // |A[q−1]| = ∏ gcd(q−1, d_i)
    let tors: u64 = mult.factors().iter().map(|&d| gcd_u64((&qm1 % d).to_u64().unwrap(), d)).product();
    Ok(BigRational::new(BigInt::from(tors), index))
}

/// The exact factor relating `#Hur^n_{G,G∞,c_G}(F_q)` and `Σ_K #Sur_Γ(G^#_∅(K), H)`.
#[derive(Clone, Debug)]
pub struct Bridge {
    /// `G = H ⋊ Γ`, element `(h, γ)` at `γ·|H| + h`.
    pub g: FiniteGroup,
    pub g_inf: Vec<usize>,
    pub gamma_inf: Vec<usize>,
    /// Nontrivial elements of `G` with the same order as their image in Γ.
    pub c_g: Vec<usize>,
    /// `[H^{Γ∞}:H^Γ] / |G∞|`.
    pub factor: BigRational,
}

impl Bridge {
    /// `#Hur = factor · ΣSur`.
    pub fn hur_from_sur(&self, sum_sur: &BigRational) -> BigRational {
        sum_sur * &self.factor
    }

    pub fn sur_from_hur(&self, hur: &BigRational) -> BigRational {
        hur / &self.factor
    }
}

/// Bridge data with `G∞` the image of `Γ∞` under the standard splitting.
pub fn sur_hur_bridge(h: &GammaGroup, gamma_inf: &[usize]) -> Result<Bridge> {
    let sd = h.semidirect();
    let g_inf: Vec<usize> = gamma_inf.iter().map(|&g| sd.embed_gamma[g]).collect();
    sur_hur_bridge_with(h, &g_inf)
}

/// Bridge data for an arbitrary cyclic `G∞ ≤ H ⋊ Γ` meeting `H` trivially.
pub fn sur_hur_bridge_with(h: &GammaGroup, g_inf: &[usize]) -> Result<Bridge> {
    let sd = h.semidirect();
    let g = sd.group;
    let g_inf = cyclic_subgroup(&g, g_inf, "G_inf")?;
    let nh = h.base.order();
    if g_inf.iter().any(|&x| x != 0 && x < nh) {
        return Err(Error::domain("G_inf has nontrivial intersection with H"));
    }
    let mut gamma_inf: Vec<usize> = g_inf.iter().map(|&x| sd.proj[x]).collect();
    gamma_inf.sort_unstable();
    let c_g: Vec<usize> = (1..g.order()).filter(|&x| g.elem_order(x) == h.gamma.elem_order(sd.proj[x])).collect();
    let factor = BigRational::new(BigInt::from(invariant_index(h, &gamma_inf)), BigInt::from(g_inf.len()));
    Ok(Bridge { g, g_inf, gamma_inf, c_g, factor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::catalog::{abelian, cyclic, dihedral, symmetric};
    use crate::hurwitz::k_elements;

    fn params(q: u64, n: usize) -> FrobeniusParams {
        FrobeniusParams::new(q, n).unwrap()
    }

    #[test]
    fn c2_delta_and_counts() {
        let g = cyclic(2);
        let ctx = UContext::new(&g, &[1]).unwrap();
        for q in [3u64, 5, 7] {
            let p = params(q, 2);
            let (h, v) = delta_correction(&ctx, 1, &p).unwrap();
            assert!(h.is_empty());
            assert_eq!(v, vec![BigInt::from(q - 1)]);
            for n in 1..8 {
                let fc = fixed_counts(&ctx, &[0, 1], &p, n).unwrap();
                assert_eq!(fc.b, BigUint::from((n % 2 == 0) as u32));
            }
        }
        let pred = predicted_hur_count(&ctx, &[0, 1], &params(5, 2), 4).unwrap();
        assert_eq!(pred.main_term, BigUint::from(125u32));
        assert_eq!(pred.error_exponent, (5, 2));
    }

    #[test]
    fn d5_powering_orbits() {
        let g = dihedral(5);
        let c: Vec<usize> = (1..10).collect();
        let ctx = UContext::new(&g, &c).unwrap();
        assert_eq!(powering_orbits(&ctx, &params(7, 10)).unwrap(), 2);
        assert_eq!(powering_orbits(&ctx, &params(11, 10)).unwrap(), 3);
        for &x in &c {
            delta_correction(&ctx, x, &params(3, 10)).unwrap();
        }
    }

    #[test]
    fn frobenius_has_period_dividing_ord() {
        let (g, _) = symmetric(3);
        let c: Vec<usize> = (1..6).collect();
        let ctx = UContext::new(&g, &c).unwrap();
        let p = params(5, 6);
        let data = FrobeniusData::new(&ctx, p.clone()).unwrap();
        let k = frobenius_period(&ctx, &p);
        for (h, v) in k_elements(&ctx, 6, 0) {
            let mut cur = (h.clone(), v.clone());
            for _ in 0..k {
                cur = data.apply(&ctx, &cur.0, &cur.1).unwrap();
            }
            assert_eq!(cur, (h, v));
        }
    }

    #[test]
    fn gcd_and_congruence_checks() {
        assert!(FrobeniusParams::new(3u64, 6).is_err());
        assert!(FrobeniusParams::new(1u64, 5).is_err());
        let g = cyclic(4);
        let ctx = UContext::new(&g, &[1, 3]).unwrap();
        assert!(fixed_counts(&ctx, &[0, 1, 2, 3], &params(3, 4), 4).is_err());
        assert!(fixed_counts(&ctx, &[0, 1, 2, 3], &params(5, 4), 4).is_ok());
    }

    #[test]
    fn moment_predictions() {
        for l in [3usize, 5] {
            let h = GammaGroup::inversion(cyclic(l)).unwrap();
            assert_eq!(moment_prediction(&h, &[0, 1], Some(&BigUint::from(7u32))).unwrap(), BigRational::one());
            let r = moment_prediction(&h, &[0], None).unwrap();
            assert_eq!(r, BigRational::new(BigInt::one(), BigInt::from(l)));
        }
        let h = GammaGroup::inversion(abelian(&[3, 3])).unwrap();
        assert_eq!(moment_prediction(&h, &[0, 1], Some(&BigUint::from(7u32))).unwrap(), BigRational::from_integer(BigInt::from(3)));
        assert_eq!(moment_prediction(&h, &[0, 1], Some(&BigUint::from(5u32))).unwrap(), BigRational::one());
        assert!(matches!(moment_prediction(&h, &[0, 1], Some(&BigUint::from(4u32))), Err(Error::Validation(_))));
    }

    #[test]
    fn bridge_for_s3() {
        let h = GammaGroup::inversion(cyclic(3)).unwrap();
        let b = sur_hur_bridge(&h, &[0, 1]).unwrap();
        assert_eq!(b.c_g, vec![3, 4, 5]);
        assert_eq!(b.factor, BigRational::new(BigInt::one(), BigInt::from(2)));
        let real = sur_hur_bridge(&h, &[0]).unwrap();
        assert_eq!(real.factor, BigRational::from_integer(BigInt::from(3)));
        let triv = GammaGroup::trivial_action(cyclic(1), cyclic(2));
        assert_eq!(sur_hur_bridge(&triv, &[0, 1]).unwrap().factor, BigRational::new(BigInt::one(), BigInt::from(2)));
        assert!(sur_hur_bridge_with(&h, &[0, 1, 2]).is_err());
    }
}
