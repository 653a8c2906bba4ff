//! Multiplicities `m_ad(n, H)` of irreducible `F_ℓ[H⋊Γ]`-modules in the
//! ℓ-Frattini quotient `R/[R,R]R^ℓ` of `R = ker(ℱ_n^𝒞 → H)`.
//!
//! Only modules on which `H` acts trivially and Γ acts through a character
//! `Γ → F_ℓ^×` are handled. That needs Γ abelian with exponent dividing
//! `ℓ − 1`, and `ℱ` acting trivially on `R/[R,R]R^ℓ`; otherwise the
//! computation reports a domain error rather than guessing.

use num_bigint::BigUint;

use super::{free_admissible, FreeAdmissible, ModuleSizes, VarietyKind, VarietySpec, DEFAULT_FREE_ORDER_CAP};
use crate::grp::catalog::cyclic;
use crate::grp::{FiniteGroup, GammaGroup};
use crate::linalg::{factorize, mod_pow};
use crate::{Error, Result};

/// A character `χ: Γ → F_ℓ^×`, stored as `values[γ] ∈ [1, ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    pub ell: u64,
    pub values: Vec<u64>,
}

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }

    pub fn is_trivial_on(&self, sub: &[usize]) -> bool {
        sub.iter().all(|&g| self.values[g] == 1)
    }

    /// Sizes of the one-dimensional module `F_ℓ(χ)`.
    pub fn sizes(&self, gamma_inf: &[usize]) -> ModuleSizes {
        let ell = BigUint::from(self.ell);
        let one = BigUint::from(1u32);
        ModuleSizes {
            size: ell.clone(),
            fixed_gamma: if self.is_trivial() { ell.clone() } else { one.clone() },
            fixed_gamma_inf: if self.is_trivial_on(gamma_inf) { ell.clone() } else { one },
            end_size: ell,
        }
    }
}

/// Every character of Γ with values in `F_ℓ^×`, trivial first.
pub fn characters(gamma: &FiniteGroup, ell: u64) -> Result<Vec<Character>> {
    if !gamma.is_abelian() || !(ell - 1).is_multiple_of(gamma.exponent()) {
        return Err(Error::domain(format!(
            "unsupported: irreducible F_{ell}[Γ]-modules are characters only when Γ is abelian of exponent dividing {}",
            ell - 1
        )));
    }
    let root = primitive_root(ell);
    let target = cyclic((ell - 1) as usize);
    let gens = gamma.generating_set();
    let mut out = Vec::new();
    let total = (ell - 1).pow(gens.len() as u32);
    for idx in 0..total {
        let mut r = idx;
        let images: Vec<usize> = gens
            .iter()
            .map(|_| {
                let d = (r % (ell - 1)) as usize;
                r /= ell - 1;
                d
            })
            .collect();
        if let Some(phi) = gamma.extend_hom(&gens, &images, &target) {
            let values = phi.iter().map(|&e| mod_pow(root, e as u64, ell)).collect();
            out.push(Character { ell, values });
        }
    }
    out.sort_by_key(|c| !c.is_trivial());
    Ok(out)
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let qs: Vec<u64> = factorize(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p).find(|&g| qs.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1)).expect("primes have primitive roots")
}

/// `m_ad(n, H)` at one character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicity {
    pub character: Character,
    pub m: usize,
}

/// Multiplicities of all character modules for every prime `ℓ` dividing
/// `|ker(ℱ_n^𝒞 → H)|`. Characters with `m = 0` are listed too.
pub fn m_ad(n: usize, h: &GammaGroup, spec: &VarietySpec) -> Result<Vec<Multiplicity>> {
    if let VarietyKind::AbelianInversion { ell, k } = spec.kind {
        let ab = spec.abelian_member(h).ok_or_else(|| Error::domain("H does not lie in the variety"))?;
        if ab.rank() > n {
            return Err(Error::domain(format!("H needs {} generators but n = {n}", ab.rank())));
        }
        let full = ab.factors().iter().filter(|&&f| f == ell.pow(k)).count();
        let m = n - full;
        if m == 0 {
            // H is the whole free object, so R is trivial
            return Ok(Vec::new());
        }
        let chars = characters(&h.gamma, ell)?;
        return Ok(chars.into_iter().map(|c| Multiplicity { m: if c.is_trivial() { 0 } else { m }, character: c }).collect());
    }
    let f = free_admissible(n, spec, DEFAULT_FREE_ORDER_CAP)?;
    m_ad_general(&f, h)
}

/// The general computation from the concrete free object. Two different
/// surjections are used when they exist, and must agree.
pub fn m_ad_general(f: &FreeAdmissible, h: &GammaGroup) -> Result<Vec<Multiplicity>> {
    let surs = surjections(f, h, 2)?;
    let first = multiplicities_for(f, &surs[0])?;
    if let Some(second) = surs.get(1) {
        let again = multiplicities_for(f, second)?;
        if again != first {
            return Err(Error::internal("m_ad depends on the chosen surjection"));
        }
    }
    Ok(first)
}

/// Up to `want` Γ-surjections `ℱ → H`, as image tables.
fn surjections(f: &FreeAdmissible, h: &GammaGroup, want: usize) -> Result<Vec<Vec<usize>>> {
    let m = h.base.order();
    let total = m.checked_pow(f.n as u32).filter(|&t| t <= 10_000_000).ok_or_else(|| Error::capacity("too many tuples to search for a surjection"))?;
    let mut out = Vec::new();
    let mut t = vec![0usize; f.n];
    for idx in 0..total {
        let mut r = idx;
        for x in t.iter_mut() {
            *x = r % m;
            r /= m;
        }
        if let Some(phi) = f.hom_from_tuple(h, &t) {
            let mut hit = vec![false; m];
            phi.iter().for_each(|&y| hit[y] = true);
            if hit.iter().all(|&b| b) && !out.contains(&phi) {
                out.push(phi);
                if out.len() == want {
                    break;
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::domain("H is not a Γ-quotient of the free object"));
    }
    Ok(out)
}

fn multiplicities_for(f: &FreeAdmissible, phi: &[usize]) -> Result<Vec<Multiplicity>> {
    let g = &f.group.base;
    let kernel: Vec<usize> = (0..g.order()).filter(|&x| phi[x] == 0).collect();
    let mut out = Vec::new();
    for (ell, _) in factorize(kernel.len() as u64) {
        let (rg, emb) = g.subgroup(&kernel);
        let mut gens: Vec<usize> = rg.derived_subgroup();
        gens.extend((0..rg.order()).map(|r| rg.pow(r, ell as i64)));
        gens.sort_unstable();
        gens.dedup();
        let d_local = rg.generate(&gens);
        let mut in_d = vec![false; g.order()];
        for &x in &d_local {
            in_d[emb[x]] = true;
        }
        let dim = log_exact(kernel.len() / d_local.len(), ell)?;
        for s in g.generating_set() {
            if kernel.iter().any(|&r| !in_d[g.commutator(s, r)]) {
                return Err(Error::domain("unsupported: ℱ acts nontrivially on the ℓ-Frattini quotient of the kernel"));
            }
        }
        let chars = super::modules::characters(&f.group.gamma, ell)?;
        let mut sum = 0;
        for c in chars {
            let count = kernel
                .iter()
                .filter(|&&r| {
                    (0..f.group.gamma.order()).all(|gm| {
                        let rc = g.pow(r, c.values[gm] as i64);
                        in_d[g.mul(g.inv(rc), f.group.act(gm, r))]
                    })
                })
                .count();
            let m = log_exact(count / d_local.len(), ell)?;
            sum += m;
            out.push(Multiplicity { character: c, m });
        }
        if sum != dim {
            return Err(Error::internal(format!("character multiplicities sum to {sum}, expected {dim}")));
        }
    }
    Ok(out)
}

fn log_exact(mut x: usize, p: u64) -> Result<usize> {
    let mut l = 0;
    while x > 1 {
        if !x.is_multiple_of(p as usize) {
            return Err(Error::internal("index is not a prime power"));
        }
        x /= p as usize;
        l += 1;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::catalog::abelian;

    #[test]
    fn characters_of_small_groups() {
        let c2 = cyclic(2);
        let ch = characters(&c2, 3).unwrap();
        assert_eq!(ch.len(), 2);
        assert!(ch[0].is_trivial());
        assert_eq!(ch[1].values, vec![1, 2]);
        assert_eq!(characters(&cyclic(3), 7).unwrap().len(), 3);
        assert!(characters(&cyclic(3), 5).is_err());
    }

    #[test]
    fn m_ad_examples() {
        let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
        let h = GammaGroup::inversion(abelian(&[3])).unwrap();
        assert!(m_ad(1, &h, &spec).unwrap().iter().all(|m| m.m == 0));
        let two = m_ad(2, &h, &spec).unwrap();
        assert_eq!(two.iter().map(|m| m.m).collect::<Vec<_>>(), vec![0, 1]);
        let triv = GammaGroup::inversion(abelian(&[])).unwrap();
        assert_eq!(m_ad(3, &triv, &spec).unwrap()[1].m, 3);
    }

    #[test]
    fn fast_and_general_agree() {
        let spec = VarietySpec::abelian_inversion(3, 2).unwrap();
        for n in 1..=2 {
            let f = free_admissible(n, &spec, DEFAULT_FREE_ORDER_CAP).unwrap();
            for orders in [vec![], vec![3], vec![9], vec![3, 3], vec![9, 3]] {
                let h = GammaGroup::inversion(abelian(&orders)).unwrap();
                if orders.len() > n {
                    continue;
                }
                let fast: Vec<usize> = m_ad(n, &h, &spec).unwrap().iter().map(|m| m.m).collect();
                let general: Vec<usize> = m_ad_general(&f, &h).unwrap().iter().map(|m| m.m).collect();
                assert_eq!(fast, general, "n = {n}, H = {orders:?}");
            }
        }
    }
}
