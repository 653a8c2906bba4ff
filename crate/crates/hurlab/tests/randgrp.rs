use std::collections::BTreeMap;

use hurlab::grp::catalog::abelian;
use hurlab::grp::{AbelianStructure, GammaGroup};
use hurlab::linalg::smith_i64;
use hurlab::randgrp::sample::{monte_carlo, Model};
use hurlab::randgrp::{moment_mu, moment_n, mu_limit, mu_n, VarietySpec, DEFAULT_FREE_ORDER_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

/// Invariant factors of the cokernel of `rows` over `(ℤ/m)^cols`.
fn cokernel(rows: &[Vec<i64>], cols: usize, m: i64) -> Vec<u64> {
    let mut all = rows.to_vec();
    for i in 0..cols {
        let mut e = vec![0; cols];
        e[i] = m;
        all.push(e);
    }
    let s = smith_i64(&all, cols);
    let f: Vec<u64> = s.diag.iter().map(|d| d.to_u64().unwrap()).collect();
    AbelianStructure::from_cyclic(&f).factors().to_vec()
}

/// Exact law of the cokernel of `extra + n` uniform rows in `(ℤ/m)^n`,
/// where `extra` is 0 (`Γ∞ = Γ`) or 1 (`Γ∞ = 1`).
fn brute_law(m: i64, n: usize, extra: usize) -> BTreeMap<Vec<u64>, u64> {
    let entries = (n + extra) * n;
    let total = (m as u64).pow(entries as u32);
    let mut law = BTreeMap::new();
    for code in 0..total {
        let mut c = code;
        let rows: Vec<Vec<i64>> = (0..n + extra)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let x = (c % m as u64) as i64;
                        c /= m as u64;
                        x
                    })
                    .collect()
            })
            .collect();
        *law.entry(cokernel(&rows, n, m)).or_insert(0) += 1;
    }
    law
}

fn targets(ell: usize, k: u32, n: usize) -> Vec<Vec<usize>> {
    let top = ell.pow(k);
    let mut out = vec![vec![]];
    // chains d_1 ≥ d_2 ≥ … of powers of ℓ up to ℓ^k, at most n long
    for _ in 0..n {
        let mut next = Vec::new();
        for c in &out {
            let mut d = ell;
            while d <= top && c.last().is_none_or(|&l| d <= l) {
                let mut e = c.clone();
                e.push(d);
                next.push(e);
                d *= ell;
            }
        }
        out.extend(next);
        out.sort();
        out.dedup();
    }
    out
}

fn check_exact(ell: u64, k: u32, n: usize, gamma_inf: &[usize]) {
    let spec = VarietySpec::abelian_inversion(ell, k).unwrap();
    let m = ell.pow(k) as i64;
    let extra = usize::from(gamma_inf.len() == 1);
    let law = brute_law(m, n, extra);
    let total: u64 = law.values().sum();
    let mut seen = BigRational::zero();
    for orders in targets(ell as usize, k, n) {
        let h = GammaGroup::inversion(abelian(&orders)).unwrap();
        let key = AbelianStructure::from_cyclic(&orders.iter().map(|&o| o as u64).collect::<Vec<_>>()).factors().to_vec();
        let exact = BigRational::new(BigInt::from(*law.get(&key).unwrap_or(&0)), BigInt::from(total));
        let mu = mu_n(&h, &spec, gamma_inf, n).unwrap();
        assert_eq!(mu, exact, "ℓ^k = {m}, n = {n}, H = {orders:?}, Γ∞ = {gamma_inf:?}");
        seen += mu;
    }
    assert_eq!(seen, BigRational::one(), "ℓ^k = {m}, n = {n}");
}

#[test]
fn mu_n_is_exact_for_cokernels_mod_3() {
    for n in 1..=3 {
        check_exact(3, 1, n, &[0, 1]);
    }
    for n in 1..=2 {
        check_exact(3, 1, n, &[0]);
    }
}

#[test]
fn mu_n_is_exact_for_cokernels_mod_9() {
    for n in 1..=2 {
        check_exact(3, 2, n, &[0, 1]);
    }
    check_exact(3, 2, 1, &[0]);
}

#[test]
fn marginals_pass_a_chi_square_test() {
    let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
    let n = 3;
    let trials = 20_000u64;
    let model = Model::new(&spec, n, &[0, 1], DEFAULT_FREE_ORDER_CAP).unwrap();
    let report = monte_carlo(&model, trials, 7, &[], &spec).unwrap();
    let observed: BTreeMap<String, u64> = report.distribution.into_iter().collect();
    let mut chi2 = 0.0;
    for orders in targets(3, 1, n) {
        let h = GammaGroup::inversion(abelian(&orders)).unwrap();
        let label = AbelianStructure::from_cyclic(&orders.iter().map(|&o| o as u64).collect::<Vec<_>>()).to_string();
        let p = mu_n(&h, &spec, &[0, 1], n).unwrap().to_f64().unwrap();
        let expected = p * trials as f64;
        let o = *observed.get(&label).unwrap_or(&0) as f64;
        chi2 += (o - expected).powi(2) / expected;
    }
    // 3 degrees of freedom, upper 0.1% point
    assert!(chi2 < 16.27, "chi-square {chi2}");
}

fn pool() -> Vec<(GammaGroup, VarietySpec)> {
    let mut v = Vec::new();
    for (ell, k, orders) in [(3u64, 1u32, vec![3]), (3, 1, vec![3, 3]), (3, 2, vec![9]), (3, 2, vec![9, 3]), (5, 1, vec![5]), (5, 1, vec![5, 5]), (7, 1, vec![7])] {
        v.push((GammaGroup::inversion(abelian(&orders)).unwrap(), VarietySpec::abelian_inversion(ell, k).unwrap()));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mu_n_is_a_probability(which in 0usize..7, n in 1usize..10, real in any::<bool>()) {
        let (h, spec) = &pool()[which];
        let gi: &[usize] = if real { &[0] } else { &[0, 1] };
        let mu = mu_n(h, spec, gi, n).unwrap();
        prop_assert!(mu >= BigRational::zero() && mu <= BigRational::one());
    }

    #[test]
    fn moments_increase_to_the_inverse_index(which in 0usize..7, n in 1usize..12, real in any::<bool>()) {
        let (h, _) = &pool()[which];
        let gi: &[usize] = if real { &[0] } else { &[0, 1] };
        let a = moment_n(h, gi, n);
        let b = moment_n(h, gi, n + 1);
        prop_assert!(a <= b);
        prop_assert!(b <= moment_mu(h, gi));
    }
}

#[test]
fn mu_sequences_are_cauchy() {
    let tol = BigRational::new(1.into(), BigInt::from(1_000_000));
    for (h, spec) in pool() {
        for gi in [&[0usize][..], &[0, 1]] {
            let lim = mu_limit(&h, &spec, gi, &tol, 40).unwrap();
            assert!(lim.value.is_some(), "no limit for {:?}", h.base.order());
            let seq: Vec<&BigRational> = lim.sequence.iter().map(|(_, v)| v).collect();
            // tail differences shrink
            let diffs: Vec<BigRational> = seq.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            for w in diffs.windows(2).skip(2) {
                assert!(w[1] <= w[0]);
            }
        }
    }
}
