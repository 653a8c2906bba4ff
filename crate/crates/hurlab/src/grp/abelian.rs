//! Finite abelian groups in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::linalg::{factorize, gcd_u64, smith};

/// `ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `d₁ | d₂ | … | d_k` and every `dᵢ > 1`.
/// Elements are vectors with the i-th entry taken mod `dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianStructure {
    factors: Vec<u64>,
}

impl AbelianStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Normalises any list of cyclic orders (zeros are rejected) into a divisor chain.
    pub fn from_cyclic(orders: &[u64]) -> Self {
        assert!(orders.iter().all(|&d| d > 0), "cyclic factor of order 0");
        let k = orders.len();
        let rows: Vec<Vec<BigInt>> = (0..k)
            .map(|i| (0..k).map(|j| BigInt::from(if i == j { orders[i] } else { 0 })).collect())
            .collect();
        let s = smith(&rows, k);
        let factors = s
            .diag
            .iter()
            .map(|d| d.to_u64().expect("factor fits u64"))
            .filter(|&d| d > 1)
            .collect();
        AbelianStructure { factors }
    }

    /// Builds from factors that are already a divisor chain with entries `> 1`.
    pub fn from_chain(factors: Vec<u64>) -> Self {
        assert!(factors.iter().all(|&d| d > 1));
        assert!(factors.windows(2).all(|w| w[1] % w[0] == 0), "not a divisor chain: {factors:?}");
        AbelianStructure { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// `|A[m]| = ∏ gcd(dᵢ, m)`.
    pub fn torsion_count(&self, m: u64) -> u64 {
        self.factors.iter().map(|&d| gcd_u64(d, m)).product()
    }

    /// The `p`-primary part as a list of prime powers, smallest first.
    pub fn p_part(&self, p: u64) -> AbelianStructure {
        let orders: Vec<u64> = self
            .factors
            .iter()
            .map(|&d| {
                let mut q = 1;
                let mut x = d;
                while x % p == 0 {
                    x /= p;
                    q *= p;
                }
                q
            })
            .filter(|&q| q > 1)
            .collect();
        AbelianStructure { factors: orders }
    }

    /// The part of order prime to `m`.
    pub fn prime_to(&self, m: u64) -> AbelianStructure {
        let orders: Vec<u64> = self
            .factors
            .iter()
            .map(|&d| {
                let mut x = d;
                loop {
                    let g = gcd_u64(x, m);
                    if g == 1 {
                        break x;
                    }
                    x /= g;
                }
            })
            .collect();
        AbelianStructure::from_cyclic(&orders)
    }

    /// Reduces a coordinate vector into canonical range.
    pub fn reduce(&self, x: &mut [i64]) {
        for (xi, &d) in x.iter_mut().zip(self.factors.iter()) {
            *xi = xi.rem_euclid(d as i64);
        }
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&mut out);
        out
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = a.iter().map(|x| -x).collect();
        self.reduce(&mut out);
        out
    }

    pub fn scale(&self, a: &[i64], k: i64) -> Vec<i64> {
        let mut out: Vec<i64> = a
            .iter()
            .zip(self.factors.iter())
            .map(|(x, &d)| ((*x as i128 * k as i128).rem_euclid(d as i128)) as i64)
            .collect();
        self.reduce(&mut out);
        out
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.factors.len()]
    }

    /// All elements, in lexicographic order of coordinates.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for v in &out {
                for x in 0..d as i64 {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// `#Hom(self, other) = ∏ gcd(aᵢ, bⱼ)`.
    pub fn hom_count(&self, other: &AbelianStructure) -> u64 {
        let mut n = 1u64;
        for &a in &self.factors {
            for &b in &other.factors {
                n *= gcd_u64(a, b);
            }
        }
        n
    }

    /// `#Sur(self, other)`, by Möbius inversion over the subgroups of `other`
    /// that contain its Frattini subgroup, one prime at a time.
    pub fn sur_count(&self, other: &AbelianStructure) -> u64 {
        let mut total = 1u64;
        for (p, _) in factorize(other.order()) {
            let hp = other.p_part(p);
            let ap = self.p_part(p);
            total *= sur_count_p(&ap, &hp, p);
            if total == 0 {
                return 0;
            }
        }
        total
    }
}

/// `#Sur(A, H)` for abelian `p`-groups.
///
/// `Σ_{pH ≤ K ≤ H} μ(K,H)·#Hom(A,K)`, where `μ = (-1)^r p^{r(r-1)/2}` for
/// `H/K` of rank `r`; `#Hom(A,K) = ∏ |K[aᵢ]|` is evaluated by listing `K`.
fn sur_count_p(a: &AbelianStructure, h: &AbelianStructure, p: u64) -> u64 {
    if h.is_trivial() {
        return 1;
    }
    if a.rank() < h.rank() {
        return 0;
    }
    let r = h.rank();
    let h_elems = h.elements();
    let mut total: i128 = 0;
    for basis in subspaces(r, p) {
        // K = preimage of span(basis) under H → H/pH = F_p^r.
        let codim = r - basis.len();
        let members: Vec<&Vec<i64>> = h_elems
            .iter()
            .filter(|x| {
                let red: Vec<u64> = x.iter().map(|&c| (c as u64) % p).collect();
                in_span(&basis, &red, p)
            })
            .collect();
        let mut hom: i128 = 1;
        for &ai in a.factors() {
            let killed = members
                .iter()
                .filter(|x| x.iter().zip(h.factors()).all(|(&c, &d)| (c as i128 * ai as i128) % d as i128 == 0))
                .count();
            hom *= killed as i128;
        }
        let sign: i128 = if codim.is_multiple_of(2) { 1 } else { -1 };
        let mu = sign * (p as i128).pow((codim * codim.saturating_sub(1) / 2) as u32);
        total += mu * hom;
    }
    assert!(total >= 0);
    total as u64
}

/// Every subspace of `F_p^r`, each given by a reduced row-echelon basis.
pub(crate) fn subspaces(r: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for k in 0..=r {
        // choose pivot columns
        for pivots in combinations(r, k) {
            // free entries: row i, column j > pivots[i] and j not a pivot
            let mut free = Vec::new();
            for (i, &pc) in pivots.iter().enumerate() {
                for j in pc + 1..r {
                    if !pivots.contains(&j) {
                        free.push((i, j));
                    }
                }
            }
            let count = (p as usize).pow(free.len() as u32);
            for mut code in 0..count {
                let mut rows = vec![vec![0u64; r]; k];
                for (i, &pc) in pivots.iter().enumerate() {
                    rows[i][pc] = 1;
                }
                for &(i, j) in &free {
                    rows[i][j] = (code % p as usize) as u64;
                    code /= p as usize;
                }
                out.push(rows);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Membership in the row space of an echelon basis over `F_p`.
fn in_span(basis: &[Vec<u64>], x: &[u64], p: u64) -> bool {
    let mut v = x.to_vec();
    for row in basis {
        let pc = row.iter().position(|&c| c != 0).expect("zero row");
        let c = v[pc];
        if c != 0 {
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi = (*vi + p * p - c * ri % p) % p;
            }
        }
    }
    v.iter().all(|&c| c == 0)
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalises_to_divisor_chain() {
        let a = AbelianStructure::from_cyclic(&[4, 6, 1]);
        assert_eq!(a.factors(), &[2, 12]);
        assert_eq!(a.order(), 24);
        assert_eq!(a.to_string(), "Z/2 x Z/12");
        assert_eq!(a.p_part(2).factors(), &[2, 4]);
        assert_eq!(a.prime_to(2).factors(), &[3]);
        assert_eq!(a.torsion_count(2), 4);
    }

    #[test]
    fn sur_counts_match_brute_force() {
        // #Sur((Z/3)^2, Z/3) = 8, #Sur(Z/9, Z/3) = 2, #Sur(Z/3, (Z/3)^2) = 0
        let c3 = AbelianStructure::from_cyclic(&[3]);
        let c33 = AbelianStructure::from_cyclic(&[3, 3]);
        let c9 = AbelianStructure::from_cyclic(&[9]);
        assert_eq!(c33.sur_count(&c3), 8);
        assert_eq!(c9.sur_count(&c3), 2);
        assert_eq!(c3.sur_count(&c33), 0);
        assert_eq!(c33.sur_count(&c33), 48);
        let c2 = AbelianStructure::from_cyclic(&[2]);
        assert_eq!(AbelianStructure::from_cyclic(&[4, 3]).sur_count(&c2), 1);
        assert_eq!(AbelianStructure::trivial().sur_count(&AbelianStructure::trivial()), 1);
    }

    #[test]
    fn subspace_count_of_f3_squared() {
        // 1 + 4 + 1
        assert_eq!(subspaces(2, 3).len(), 6);
        assert_eq!(subspaces(3, 2).len(), 16);
    }
}
