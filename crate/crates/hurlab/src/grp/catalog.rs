//! Named groups: cyclic, abelian, dihedral, symmetric, alternating,
//! metacyclic, and the full list of groups of order at most 16.

use super::{FiniteGroup, GammaGroup, DEFAULT_ORDER_CAP};
use crate::{Error, Result};

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let mul = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
    FiniteGroup::from_raw(n, mul)
}

/// `ℤ/n₁ × … × ℤ/n_k`, element `(a₁..a_k)` at the mixed-radix index with `a_k` fastest.
pub fn abelian(orders: &[usize]) -> FiniteGroup {
    orders.iter().fold(FiniteGroup::trivial(), |acc, &n| acc.direct_product(&cyclic(n)))
}

/// Coordinates of an element of [`abelian`].
pub fn abelian_coords(orders: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; orders.len()];
    for (o, &n) in out.iter_mut().zip(orders).rev() {
        *o = idx % n;
        idx /= n;
    }
    out
}

pub fn abelian_index(orders: &[usize], coords: &[usize]) -> usize {
    coords.iter().zip(orders).fold(0, |acc, (&c, &n)| acc * n + c % n)
}

/// `⟨a, b | a^m = 1, b^k = a^t, b a b⁻¹ = a^r⟩`, element `a^i b^j` at index `j·m + i`.
pub fn metacyclic(m: usize, k: usize, r: usize, t: usize) -> Result<FiniteGroup> {
    let mut rk = 1usize;
    for _ in 0..k {
        rk = rk * r % m;
    }
    if rk != 1 % m || (r * t) % m != t % m {
        return Err(Error::validation(format!("metacyclic parameters ({m},{k},{r},{t}) are inconsistent")));
    }
    let n = m * k;
    let rpow: Vec<usize> = (0..k).scan(1usize, |acc, _| {
        let v = *acc;
        *acc = *acc * r % m;
        Some(v)
    }).collect();
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        let (j1, i1) = (x / m, x % m);
        for y in 0..n {
            let (j2, i2) = (y / m, y % m);
            let mut i = (i1 + rpow[j1] * i2) % m;
            let mut j = j1 + j2;
            if j >= k {
                j -= k;
                i = (i + t) % m;
            }
            mul[x * n + y] = (j * m + i) as u32;
        }
    }
    let g = FiniteGroup::from_raw(n, mul);
    debug_assert!(FiniteGroup::from_mult_table(&g.table()).is_ok());
    Ok(g)
}

/// Dihedral group of order `2n`: rotations `0..n`, reflections `n..2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    if n == 1 {
        return cyclic(2);
    }
    metacyclic(n, 2, n - 1, 0).expect("dihedral parameters")
}

pub fn quaternion8() -> FiniteGroup {
    metacyclic(4, 2, 3, 2).unwrap()
}

/// Returns the group and the permutation images of each element.
pub fn symmetric(k: usize) -> (FiniteGroup, Vec<Vec<u32>>) {
    if k <= 1 {
        return FiniteGroup::from_permutations(&[], k, DEFAULT_ORDER_CAP).unwrap();
    }
    let swap: Vec<usize> = (0..k).map(|i| if i == 0 { 1 } else if i == 1 { 0 } else { i }).collect();
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    FiniteGroup::from_permutations(&[swap, cycle], k, DEFAULT_ORDER_CAP).unwrap()
}

pub fn alternating(k: usize) -> (FiniteGroup, Vec<Vec<u32>>) {
    let gens: Vec<Vec<usize>> = (0..k.saturating_sub(2))
        .map(|i| (0..k).map(|x| if x == i { i + 1 } else if x == i + 1 { i + 2 } else if x == i + 2 { i } else { x }).collect())
        .collect();
    FiniteGroup::from_permutations(&gens, k, DEFAULT_ORDER_CAP).unwrap()
}

/// `(ℤ/4 × ℤ/2) ⋊ ℤ/2` with `a ↦ ab`, `b ↦ b`.
pub fn sg16_3() -> FiniteGroup {
    let orders = [4, 2];
    let base = abelian(&orders);
    let img: Vec<usize> = (0..8)
        .map(|idx| {
            let c = abelian_coords(&orders, idx);
            // a^i b^j -> (ab)^i b^j = a^i b^{i+j}
            abelian_index(&orders, &[c[0], (c[0] + c[1]) % 2])
        })
        .collect();
    GammaGroup::from_generator_images(base, cyclic(2), &[1], &[img]).unwrap().semidirect().group
}

/// The central product `C4 ∘ D4` (Pauli group), as 2×2 matrices over F₅
/// generated by `X`, `Z` and the scalar `2`.
pub fn pauli() -> FiniteGroup {
    type M = [u8; 4];
    let mul = |a: &M, b: &M| -> M {
        [
            ((a[0] as u32 * b[0] as u32 + a[1] as u32 * b[2] as u32) % 5) as u8,
            ((a[0] as u32 * b[1] as u32 + a[1] as u32 * b[3] as u32) % 5) as u8,
            ((a[2] as u32 * b[0] as u32 + a[3] as u32 * b[2] as u32) % 5) as u8,
            ((a[2] as u32 * b[1] as u32 + a[3] as u32 * b[3] as u32) % 5) as u8,
        ]
    };
    // The identity [1,0,0,1] is not lexicographically least, so relabel.
    let gens: Vec<M> = vec![[0, 1, 1, 0], [1, 0, 0, 4], [2, 0, 0, 2]];
    let key = |m: &M| -> (bool, M) { (*m != [1, 0, 0, 1], *m) };
    let (g, _) = FiniteGroup::from_closure(
        &gens.iter().map(key).collect::<Vec<_>>(),
        key(&[1, 0, 0, 1]),
        |a, b| key(&mul(&a.1, &b.1)),
        64,
    )
    .unwrap();
    g
}

/// Every group of order at most 16 up to isomorphism, with a short name.
pub fn small_groups() -> Vec<(String, FiniteGroup)> {
    let mut v: Vec<(String, FiniteGroup)> = Vec::new();
    let mut add = |name: &str, g: FiniteGroup| v.push((name.to_string(), g));
    for n in 1..=16 {
        add(&format!("C{n}"), cyclic(n));
    }
    add("C2xC2", abelian(&[2, 2]));
    add("S3", dihedral(3));
    add("C4xC2", abelian(&[4, 2]));
    add("C2^3", abelian(&[2, 2, 2]));
    add("D4", dihedral(4));
    add("Q8", quaternion8());
    add("C3xC3", abelian(&[3, 3]));
    add("D5", dihedral(5));
    add("C6xC2", abelian(&[6, 2]));
    add("D6", dihedral(6));
    add("A4", alternating(4).0);
    add("Dic3", metacyclic(6, 2, 5, 3).unwrap());
    add("D7", dihedral(7));
    add("C4xC4", abelian(&[4, 4]));
    add("SG16_3", sg16_3());
    add("C4:C4", metacyclic(4, 4, 3, 0).unwrap());
    add("C8xC2", abelian(&[8, 2]));
    add("M16", metacyclic(8, 2, 5, 0).unwrap());
    add("D8", dihedral(8));
    add("SD16", metacyclic(8, 2, 3, 0).unwrap());
    add("Q16", metacyclic(8, 2, 7, 4).unwrap());
    add("C4xC2^2", abelian(&[4, 2, 2]));
    add("C2xD4", cyclic(2).direct_product(&dihedral(4)));
    add("C2xQ8", cyclic(2).direct_product(&quaternion8()));
    add("Pauli", pauli());
    add("C2^4", abelian(&[2, 2, 2, 2]));
    v
}

/// Looks up a group by name: `C<n>`, `D<n>` (order 2n), `S<k>`, `A<k>`,
/// `Z<a>x<b>x…` (abelian), or a name from [`small_groups`].
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let parse = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    if let Some(rest) = name.strip_prefix('Z') {
        let parts: Option<Vec<usize>> = rest.split('x').map(parse).collect();
        if let Some(p) = parts {
            return Ok(abelian(&p));
        }
    }
    if let Some(n) = name.strip_prefix('C').and_then(parse) {
        return Ok(cyclic(n));
    }
    if let Some(n) = name.strip_prefix('D').and_then(parse) {
        return Ok(dihedral(n));
    }
    if let Some(k) = name.strip_prefix('S').and_then(parse) {
        if k <= 7 {
            return Ok(symmetric(k).0);
        }
    }
    if let Some(k) = name.strip_prefix('A').and_then(parse) {
        if k <= 7 {
            return Ok(alternating(k).0);
        }
    }
    small_groups()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, g)| g)
        .ok_or_else(|| Error::validation(format!("unknown group name '{name}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders_and_validity() {
        let groups = small_groups();
        assert_eq!(groups.len(), 42);
        for (name, g) in &groups {
            assert!(FiniteGroup::from_mult_table(&g.table()).is_ok(), "{name}");
        }
        assert_eq!(groups.iter().filter(|(_, g)| g.order() == 16).count(), 14);
        assert_eq!(groups.iter().filter(|(_, g)| g.order() == 8).count(), 5);
        assert_eq!(groups.iter().filter(|(_, g)| g.order() == 12).count(), 5);
    }

    #[test]
    fn order_sixteen_groups_are_distinct() {
        // (order census, |center|, |derived|, abelianization) separates all 14
        let mut seen = std::collections::HashSet::new();
        for (name, g) in small_groups().iter().filter(|(_, g)| g.order() == 16) {
            let key = (g.order_census(), g.center().len(), g.derived_subgroup().len(), g.abelianization().0);
            assert!(seen.insert(key), "duplicate invariants for {name}");
        }
    }

    #[test]
    fn named_lookup() {
        assert_eq!(by_name("S3").unwrap().order(), 6);
        assert_eq!(by_name("D5").unwrap().order(), 10);
        assert_eq!(by_name("Z3x3").unwrap().order(), 9);
        assert_eq!(by_name("Q16").unwrap().order(), 16);
        assert!(by_name("nope").is_err());
    }
}
