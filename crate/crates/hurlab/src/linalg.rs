//! Smith normal forms that keep the column transform, over ℤ and over the
//! local rings ℤ/p^k, plus the small number-theory helpers used everywhere.
//!
//! Row vectors are the convention throughout: a matrix `A` with `r` rows and
//! `c` columns presents the cokernel `ℤ^c / rowspace(A)`. After `U·A·V = D`
//! the coordinates `y = x·V` split that cokernel into cyclic factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / a.gcd(&b) * b
    }
}

/// `a^e mod m`.
pub fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r: u128 = 1;
    let mm = m as u128;
    let mut b = (a % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % mm;
        }
        b = b * b % mm;
        e >>= 1;
    }
    a = r as u64;
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Exponent of `p` in `x` (with `x > 0`).
pub fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x > 0 && x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Prime factorisation by trial division, as `(p, e)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd_u64(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * (a % m) as u128) % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// Output of [`smith`]: `U·A·V = diag(d)`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// One entry per column; entries at positions `>= rank` are zero.
    pub diag: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
    pub rank: usize,
}

fn identity_big(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Smith normal form of an integer matrix with `cols` columns.
pub fn smith(rows: &[Vec<BigInt>], cols: usize) -> Smith {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            r.clone()
        })
        .collect();
    let nr = a.len();
    let mut v = identity_big(cols);
    let mut vi = identity_big(cols);
    let mut t = 0;

    let swap_cols = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, vi: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };

    while t < nr.min(cols) {
        // Smallest nonzero entry of the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..cols {
                if !a[i][j].is_zero() {
                    match best {
                        Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, &mut vi, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                let pivot_row = &head[t];
                for (x, y) in tail[0].iter_mut().zip(pivot_row.iter()).skip(t) {
                    *x -= &q * y;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                for row in v.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                let (rt, rj) = (vi[t].clone(), &vi[j]);
                vi[t] = rt.iter().zip(rj.iter()).map(|(x, y)| x + &q * y).collect();
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest entry of row t / column t onto the diagonal.
                let mut bi = t;
                let mut bj = t;
                for i in t..nr {
                    if !a[i][t].is_zero() && (a[bi][bj].is_zero() || a[i][t].abs() < a[bi][bj].abs()) {
                        bi = i;
                        bj = t;
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && (a[bi][bj].is_zero() || a[t][j].abs() < a[bi][bj].abs()) {
                        bi = t;
                        bj = j;
                    }
                }
                a.swap(t, bi);
                swap_cols(&mut a, &mut v, &mut vi, t, bj);
                continue;
            }
            let mut fix = None;
            'outer: for i in t + 1..nr {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let add = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(add.iter()) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diag = (0..cols)
        .map(|i| if i < t { a[i][i].clone() } else { BigInt::zero() })
        .collect();
    Smith { diag, v, v_inv: vi, rank: t }
}

/// Convenience wrapper for small integer matrices.
pub fn smith_i64(rows: &[Vec<i64>], cols: usize) -> Smith {
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    smith(&big, cols)
}

/// Output of [`local_smith`]: over `ℤ/p^k`, `U·A·V = diag(p^{vals})`.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub p: u64,
    pub k: u32,
    /// Valuation of each diagonal entry; `k` stands for a zero entry.
    pub vals: Vec<u32>,
    pub v: Vec<Vec<u64>>,
    pub v_inv: Vec<Vec<u64>>,
    pub rank: usize,
}

fn val_mod(x: u64, p: u64, k: u32) -> u32 {
    if x == 0 {
        k
    } else {
        valuation(x, p).min(k)
    }
}

/// Smith normal form over the chain ring `ℤ/p^k`. Entries are reduced mod `p^k`.
pub fn local_smith(rows: &[Vec<u64>], cols: usize, p: u64, k: u32) -> LocalSmith {
    let m = p.pow(k);
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % m as u128) as u64;
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % m).collect()).collect();
    let nr = a.len();
    let ident = |n: usize| -> Vec<Vec<u64>> { (0..n).map(|i| (0..n).map(|j| u64::from(i == j) % m.max(2)).collect()).collect() };
    let mut v = ident(cols);
    let mut vi = ident(cols);
    let mut vals = vec![k; cols];
    let mut t = 0;
    while t < nr.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in t..nr {
            for j in t..cols {
                let w = val_mod(a[i][j], p, k);
                if w < k && best.is_none_or(|b| w < b.2) {
                    best = Some((i, j, w));
                }
            }
        }
        let Some((pi, pj, w)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            vi.swap(t, pj);
        }
        let pw = p.pow(w);
        let unit = a[t][t] / pw;
        let uinv = mod_inv(unit % m, m).expect("unit part must be invertible");
        for x in a[t].iter_mut() {
            *x = mulm(*x, uinv);
        }
        for i in t + 1..nr {
            if a[i][t] == 0 {
                continue;
            }
            let c = a[i][t] / pw;
            let (head, tail) = a.split_at_mut(i);
            for (x, y) in tail[0].iter_mut().zip(head[t].iter()) {
                *x = (*x + m - mulm(c, *y)) % m;
            }
        }
        for j in t + 1..cols {
            if a[t][j] == 0 {
                continue;
            }
            let c = a[t][j] / pw;
            for row in a.iter_mut() {
                row[j] = (row[j] + m - mulm(c, row[t])) % m;
            }
            for row in v.iter_mut() {
                row[j] = (row[j] + m - mulm(c, row[t])) % m;
            }
            let rj = vi[j].clone();
            for (x, y) in vi[t].iter_mut().zip(rj.iter()) {
                *x = (*x + mulm(c, *y)) % m;
            }
        }
        vals[t] = w;
        t += 1;
    }
    LocalSmith { p, k, vals, v, v_inv: vi, rank: t }
}

/// `x·M` for a row vector over `ℤ/m`.
pub fn vec_mat_mod(x: &[u64], mat: &[Vec<u64>], m: u64) -> Vec<u64> {
    let cols = mat.first().map_or(0, |r| r.len());
    let mut out = vec![0u128; cols];
    for (xi, row) in x.iter().zip(mat.iter()) {
        if *xi == 0 {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row.iter()) {
            *o = (*o + *xi as u128 * *r as u128) % m as u128;
        }
    }
    out.into_iter().map(|v| v as u64).collect()
}

/// `x·M` over ℤ.
pub fn vec_mat_big(x: &[BigInt], mat: &[Vec<BigInt>]) -> Vec<BigInt> {
    let cols = mat.first().map_or(0, |r| r.len());
    let mut out = vec![BigInt::zero(); cols];
    for (xi, row) in x.iter().zip(mat.iter()) {
        if xi.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row.iter()) {
            *o += xi * r;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        a.iter().map(|row| vec_mat_big(row, b)).collect()
    }

    #[test]
    fn smith_of_small_matrix() {
        // coker of [[2,4,4],[-6,6,12],[10,-4,-16]] is Z/2 + Z/6 + Z/12
        let s = smith_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        let d: Vec<i64> = s.diag.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
        let prod = mat_mul(&s.v, &s.v_inv);
        assert_eq!(prod, identity_big(3));
    }

    #[test]
    fn smith_tracks_free_part() {
        let s = smith_i64(&[vec![2, 0, 0], vec![0, 0, 0]], 3);
        assert_eq!(s.rank, 1);
        assert_eq!(s.diag[1], BigInt::zero());
    }

    #[test]
    fn local_smith_valuations() {
        // over Z/9: rows (3,0),(0,1) -> valuations {0,1}
        let s = local_smith(&[vec![3, 0], vec![0, 1]], 2, 3, 2);
        let mut vals = s.vals.clone();
        vals.sort();
        assert_eq!(vals, vec![0, 1]);
        // V * V^{-1} = I mod 9
        for (i, row) in s.v.iter().enumerate() {
            let r = vec_mat_mod(row, &s.v_inv, 9);
            for (j, x) in r.iter().enumerate() {
                assert_eq!(*x, u64::from(i == j));
            }
        }
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(3, 9), None);
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mult_order(2, 7), Some(3));
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_prime(13) && !is_prime(15));
    }
}
