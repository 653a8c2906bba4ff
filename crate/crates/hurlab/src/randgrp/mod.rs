//! The random Γ-group `X^n_{Γ,Γ∞}` at a finite level `𝒞`.
//!
//! `X = ℱ_n^𝒞 / [Y(x₁), …, Y(x_{n+1})]`, where `x₁..xₙ` are uniform on the
//! free admissible object `ℱ_n^𝒞`, `x_{n+1}` is uniform on its `Γ∞`-fixed
//! points, and the bracket is the Γ-stable normal closure.
//!
//! Two representations are supported. A general variety is given by finitely
//! many generating Γ-groups, and `ℱ_n^𝒞` is built as a concrete finite group
//! (see [`free_admissible`]). The variety of abelian groups of exponent
//! dividing `ℓ^k` with `Γ = ℤ/2` acting by inversion has `ℱ_n^𝒞 = (ℤ/ℓ^k)^n`,
//! and `X` is the cokernel of a uniform random matrix; that case skips the
//! group tables entirely.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::grp::catalog::cyclic;
use crate::grp::{AbelianStructure, FiniteGroup, GammaGroup};
use crate::linalg::{gcd_u64, is_prime};
use crate::{Error, Result};

pub mod modules;
pub mod sample;

pub use modules::{characters, m_ad, m_ad_general, Character, Multiplicity};
pub use sample::{exhaustive_outcomes, monte_carlo, sample_x, Exhaustive, McReport, Model, Outcome, SampleOutcome, TargetStats, Witnesses};

/// Default cap on `|ℱ_n^𝒞|` for the general construction.
pub const DEFAULT_FREE_ORDER_CAP: usize = 6561;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyKind {
    /// Abelian groups of exponent dividing `ℓ^k`, `Γ = ℤ/2` acting by inversion.
    AbelianInversion { ell: u64, k: u32 },
    General,
}

/// A finite set `𝒞` of Γ-groups; the variety is its closure under products,
/// Γ-subgroups and Γ-quotients.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub generators: Vec<GammaGroup>,
    pub kind: VarietyKind,
}

impl VarietySpec {
    /// All generators must share Γ and have order prime to `2|Γ|`.
    pub fn new(generators: Vec<GammaGroup>) -> Result<Self> {
        let first = generators.first().ok_or_else(|| Error::validation("a variety needs at least one generator"))?;
        let gamma = first.gamma.clone();
        for t in &generators {
            if t.gamma != gamma {
                return Err(Error::validation("variety generators use different acting groups"));
            }
            let o = t.base.order() as u64;
            if gcd_u64(o, 2 * gamma.order() as u64) != 1 {
                return Err(Error::validation(format!("generator of order {o} is not prime to 2|Γ| = {}", 2 * gamma.order())));
            }
        }
        Ok(VarietySpec { generators, kind: VarietyKind::General })
    }

    /// Exponent-`ℓ^k` abelian groups with inversion, `ℓ` an odd prime.
    pub fn abelian_inversion(ell: u64, k: u32) -> Result<Self> {
        if ell == 2 || !is_prime(ell) || k == 0 {
            return Err(Error::validation(format!("need an odd prime ℓ and k ≥ 1, got ℓ = {ell}, k = {k}")));
        }
        let t = GammaGroup::inversion(cyclic(ell.pow(k) as usize))?;
        Ok(VarietySpec { generators: vec![t], kind: VarietyKind::AbelianInversion { ell, k } })
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.generators[0].gamma
    }

    /// For the abelian-inversion kind, `H` as an abelian group if it lies in the variety.
    pub fn abelian_member(&self, h: &GammaGroup) -> Option<AbelianStructure> {
        let VarietyKind::AbelianInversion { ell, k } = self.kind else {
            return None;
        };
        let ok = h.gamma.order() == 2
            && h.base.is_abelian()
            && ell.pow(k) % h.base.exponent() == 0
            && (0..h.base.order()).all(|x| h.act(1, x) == h.base.inv(x));
        ok.then(|| h.base.abelianization().0)
    }
}

/// `ℱ_n^𝒞` with the Y-coordinates of its `n` marked generators.
#[derive(Clone, Debug)]
pub struct FreeAdmissible {
    pub n: usize,
    pub group: GammaGroup,
    /// `y[i][γ]` is the element `x_i⁻¹γ(x_i)` of `ℱ_n^𝒞`.
    pub y: Vec<Vec<usize>>,
}

impl FreeAdmissible {
    /// The Γ-map `ℱ_n^𝒞 → H` induced by `x_i ↦ t_i`, if it is well defined.
    pub fn hom_from_tuple(&self, h: &GammaGroup, t: &[usize]) -> Option<Vec<usize>> {
        let mut gens = Vec::new();
        let mut imgs = Vec::new();
        for (i, yi) in self.y.iter().enumerate() {
            let ti = t[i];
            for (c, &g) in yi.iter().enumerate() {
                gens.push(g);
                imgs.push(h.base.mul(h.base.inv(ti), h.act(c, ti)));
            }
        }
        self.group.base.extend_hom(&gens, &imgs, &h.base)
    }
}

/// Builds `ℱ_n^𝒞` inside `∏ T` over all generators `T` of `𝒞` and all
/// `t ∈ Tⁿ`, as the subgroup generated by the Y-coordinates of the diagonal
/// elements `X_i = (t_i)_{(T,t)}`. Every Γ-map from the free admissible group to
/// a member of the variety factors through one of these coordinates, so this
/// subgroup is the free object.
pub fn free_admissible(n: usize, spec: &VarietySpec, cap: usize) -> Result<FreeAdmissible> {
    let gamma = spec.gamma().clone();
    let ng = gamma.order();
    // coordinates: (generator index, tuple)
    let mut coords: Vec<(usize, Vec<usize>)> = Vec::new();
    for (j, t) in spec.generators.iter().enumerate() {
        let m = t.base.order();
        let total = m.checked_pow(n as u32).filter(|&x| x <= 1 << 20).ok_or_else(|| Error::capacity("too many coordinate maps"))?;
        for idx in 0..total {
            let mut tuple = Vec::with_capacity(n);
            let mut r = idx;
            for _ in 0..n {
                tuple.push(r % m);
                r /= m;
            }
            coords.push((j, tuple));
        }
    }
    let width = coords.len();
    let mul = |a: &Vec<u32>, b: &Vec<u32>| -> Vec<u32> {
        (0..width).map(|c| spec.generators[coords[c].0].base.mul(a[c] as usize, b[c] as usize) as u32).collect()
    };
    let ycoord = |i: usize, g: usize| -> Vec<u32> {
        coords
            .iter()
            .map(|(j, t)| {
                let tg = &spec.generators[*j];
                tg.base.mul(tg.base.inv(t[i]), tg.act(g, t[i])) as u32
            })
            .collect()
    };
    let mut gens: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        for g in 1..ng {
            gens.push(ycoord(i, g));
        }
    }
    let identity = vec![0u32; width];
    let (group, elems) = FiniteGroup::from_closure(&gens, identity, mul, cap)?;
    let index: HashMap<&Vec<u32>, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let act: Vec<Vec<usize>> = (0..ng)
        .map(|g| {
            elems
                .iter()
                .map(|e| {
                    let img: Vec<u32> = e
                        .iter()
                        .enumerate()
                        .map(|(c, &x)| spec.generators[coords[c].0].act(g, x as usize) as u32)
                        .collect();
                    index[&img]
                })
                .collect()
        })
        .collect();
    let group = GammaGroup::new(group, gamma, act)?;
    let y = (0..n).map(|i| (0..ng).map(|g| index[&ycoord(i, g)]).collect()).collect();
    Ok(FreeAdmissible { n, group, y })
}

/// `|Sur_Γ(ℱ_n, H)|`.
pub fn sur_count(h: &GammaGroup, n: usize) -> BigUint {
    h.count_sur_free_admissible(n)
}

fn ratio(a: impl Into<BigInt>, b: impl Into<BigInt>) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// `1/[H^{Γ∞} : H^Γ]`.
pub fn moment_mu(h: &GammaGroup, gamma_inf: &[usize]) -> BigRational {
    ratio(h.gamma_invariants_all().len(), h.invariants(gamma_inf).len())
}

/// `|Sur_Γ(ℱ_n,H)|·(|H^Γ|/|H|)^n·(|H^Γ|/|H^{Γ∞}|)`, the `H`-moment of `X^n`.
pub fn moment_n(h: &GammaGroup, gamma_inf: &[usize], n: usize) -> BigRational {
    let fixed = h.gamma_invariants_all().len();
    let sur = BigInt::from(sur_count(h, n));
    let per = ratio(fixed, h.base.order());
    let last = ratio(fixed, h.invariants(gamma_inf).len());
    BigRational::from_integer(sur) * pow_rat(&per, n) * last
}

fn pow_rat(r: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= r;
    }
    acc
}

/// Size data of an irreducible module `A` over `F_ℓ[H⋊Γ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSizes {
    pub size: BigUint,
    pub fixed_gamma: BigUint,
    pub fixed_gamma_inf: BigUint,
    /// `|Hom_{H⋊Γ}(A, A)|`.
    pub end_size: BigUint,
}

/// `∏_{i<m} (1 − |End A|^i |A^Γ|^{n+1} / (|A|^n |A^{Γ∞}|))`, or 0 once a factor is `≤ 0`.
pub fn prob_module_formula(a: &ModuleSizes, m: usize, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    let num_base = BigInt::from(a.fixed_gamma.pow(n as u32 + 1));
    let den = BigInt::from(a.size.pow(n as u32) * &a.fixed_gamma_inf);
    for i in 0..m {
        let num = num_base.clone() * BigInt::from(a.end_size.pow(i as u32));
        let f = BigRational::one() - BigRational::new(num, den.clone());
        if f <= BigRational::zero() {
            return BigRational::zero();
        }
        acc *= f;
    }
    acc
}

/// `μ^n(V_{𝒞,H})`, the probability that `X^n` is Γ-isomorphic to `H`.
pub fn mu_n(h: &GammaGroup, spec: &VarietySpec, gamma_inf: &[usize], n: usize) -> Result<BigRational> {
    if h.gamma != *spec.gamma() {
        return Err(Error::validation("H and the variety use different acting groups"));
    }
    let sur = sur_count(h, n);
    if sur.is_zero() {
        return Ok(BigRational::zero());
    }
    let fixed = BigUint::from(h.gamma_invariants_all().len());
    let fixed_inf = BigUint::from(h.invariants(gamma_inf).len());
    let order = BigUint::from(h.base.order());
    let aut = BigUint::from(h.count_aut_gamma());
    let num = sur * fixed.pow(n as u32 + 1);
    let den = aut * order.pow(n as u32) * fixed_inf;
    let mut p = BigRational::new(num.into(), den.into());
    for mult in m_ad(n, h, spec)? {
        if mult.m > 0 {
            p *= prob_module_formula(&mult.character.sizes(gamma_inf), mult.m, n);
        }
    }
    Ok(p)
}

/// Result of [`mu_limit`].
#[derive(Clone, Debug)]
pub struct MuLimit {
    /// `(n, μ^n)` for every computed `n`.
    pub sequence: Vec<(usize, BigRational)>,
    /// The last value, if successive values came within the tolerance.
    pub value: Option<BigRational>,
}

/// Iterates `μ^n` until two consecutive values differ by less than `tol`.
pub fn mu_limit(h: &GammaGroup, spec: &VarietySpec, gamma_inf: &[usize], tol: &BigRational, n_max: usize) -> Result<MuLimit> {
    let mut sequence: Vec<(usize, BigRational)> = Vec::new();
    for n in 1..=n_max {
        let v = mu_n(h, spec, gamma_inf, n)?;
        let done = sequence.last().is_some_and(|(_, prev)| {
            let d = &v - prev;
            !prev.is_zero() && (if d < BigRational::zero() { -d } else { d }) < *tol
        });
        sequence.push((n, v.clone()));
        if done {
            return Ok(MuLimit { sequence, value: Some(v) });
        }
    }
    Ok(MuLimit { sequence, value: None })
}

/// Isomorphism-invariant summary of a Γ-group.
pub fn fingerprint(h: &GammaGroup) -> String {
    let g = &h.base;
    let mut sizes = g.conjugacy_classes().sizes();
    sizes.sort_unstable();
    let fixed: Vec<usize> = (0..h.gamma.order()).map(|c| h.invariants(&h.gamma.generate(&[c])).len()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    format!(
        "order={};exp={};ab={};fixed={:?};classes={:?}",
        g.order(),
        g.exponent(),
        g.abelianization().0,
        fixed,
        sizes
    )
}

/// Every Γ-quotient of `f` up to Γ-isomorphism.
pub fn quotient_census(f: &GammaGroup) -> Result<Vec<GammaGroup>> {
    let lat = f.stable_lattice();
    let mut reps: Vec<(String, GammaGroup)> = Vec::new();
    for sub in &lat.subgroups {
        if !f.base.is_normal(sub) {
            continue;
        }
        let (q, _) = f.quotient(sub)?;
        let fp = fingerprint(&q);
        if !reps.iter().any(|(k, r)| *k == fp && crate::grp::gamma_isomorphic(&q, r)) {
            reps.push((fp, q));
        }
    }
    Ok(reps.into_iter().map(|(_, q)| q).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::catalog::abelian;

    fn inv(orders: &[usize]) -> GammaGroup {
        GammaGroup::inversion(abelian(orders)).unwrap()
    }

    #[test]
    fn free_object_for_exponent_three() {
        let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
        for n in 0..=3 {
            let f = free_admissible(n, &spec, DEFAULT_FREE_ORDER_CAP).unwrap();
            assert_eq!(f.group.base.order(), 3usize.pow(n as u32));
            assert!(f.group.base.is_abelian());
            assert_eq!(f.group.base.exponent(), if n == 0 { 1 } else { 3 });
            assert!((0..f.group.base.order()).all(|x| f.group.act(1, x) == f.group.base.inv(x)));
        }
        let spec9 = VarietySpec::abelian_inversion(3, 2).unwrap();
        let f = free_admissible(1, &spec9, DEFAULT_FREE_ORDER_CAP).unwrap();
        assert_eq!(f.group.base.order(), 9);
        assert_eq!(f.group.base.exponent(), 9);
    }

    #[test]
    fn universal_property_on_small_targets() {
        let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
        let f = free_admissible(2, &spec, DEFAULT_FREE_ORDER_CAP).unwrap();
        for h in [inv(&[3]), inv(&[3, 3])] {
            let direct = crate::grp::count_gamma_homs(&f.group, &h, true);
            assert_eq!(BigUint::from(direct), sur_count(&h, 2));
            // every tuple induces a well-defined map
            let m = h.base.order();
            for a in 0..m {
                for b in 0..m {
                    assert!(f.hom_from_tuple(&h, &[a, b]).is_some());
                }
            }
        }
    }

    #[test]
    fn prob_module_examples() {
        let a = |fix_inf: u32| ModuleSizes {
            size: BigUint::from(5u32),
            fixed_gamma: BigUint::one(),
            fixed_gamma_inf: BigUint::from(fix_inf),
            end_size: BigUint::from(5u32),
        };
        assert_eq!(prob_module_formula(&a(1), 0, 3), BigRational::one());
        assert_eq!(prob_module_formula(&a(1), 1, 3), BigRational::one() - ratio(1, 125));
        assert_eq!(prob_module_formula(&a(5), 1, 3), BigRational::one() - ratio(1, 625));
    }

    #[test]
    fn mu_and_moments_for_z3() {
        let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
        let h = inv(&[3]);
        assert_eq!(mu_n(&h, &spec, &[0, 1], 1).unwrap(), ratio(1, 3));
        assert_eq!(moment_n(&h, &[0, 1], 1), ratio(2, 3));
        assert_eq!(moment_mu(&h, &[0, 1]), BigRational::one());
        assert_eq!(moment_mu(&h, &[0]), ratio(1, 3));
        let mut prev = BigRational::zero();
        for n in 1..8 {
            let m = moment_n(&h, &[0, 1], n);
            assert!(m >= prev && m <= BigRational::one());
            prev = m;
        }
    }

    #[test]
    fn mu_limit_converges_for_trivial_group() {
        let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
        let triv = GammaGroup::inversion(abelian(&[])).unwrap();
        let r = mu_limit(&triv, &spec, &[0, 1], &ratio(1, 1_000_000), 30).unwrap();
        let v = r.value.expect("converges");
        // ∏_{j ≥ 1} (1 − 3^{-j}) ≈ 0.5601
        let f: f64 = num_traits::ToPrimitive::to_f64(&v).unwrap();
        assert!((f - 0.560_126_077_927_948_9).abs() < 1e-5, "{f}");
    }

    #[test]
    fn census_of_f2() {
        let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
        let f = free_admissible(2, &spec, DEFAULT_FREE_ORDER_CAP).unwrap();
        let census = quotient_census(&f.group).unwrap();
        assert_eq!(census.len(), 3);
        for gi in [vec![0, 1], vec![0]] {
            let total: BigRational = census.iter().map(|h| mu_n(h, &spec, &gi, 2).unwrap()).sum();
            assert_eq!(total, BigRational::one());
        }
    }
}
