//! The acceptance checks, shared by the `acceptance` test target and
//! `hurlab verify`.
//!
//! Every criterion runs to completion or stops at its first violated
//! condition, and is timed against its budget. Tolerances are the constants
//! below; nothing else in a check is approximate.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{
    divclass_add, divclass_mul, empirical_moment, enumerate_classes, enumerate_imaginary, jacobian_order, l_polynomial, FqPoly,
    HyperellipticModel, MomentOptions, Weights,
};
use crate::frob::{self, frobenius_period, sur_hur_bridge, FrobeniusData, FrobeniusParams};
use crate::grp::catalog::{abelian, cyclic, dihedral, small_groups, symmetric};
use crate::grp::{AbelianStructure, FiniteGroup, GammaGroup};
use crate::homology::{h2, h2_reduced, oracle, UContext};
use crate::hurwitz::{classify, k_elements, stable_bijection_report, DEFAULT_TUPLE_BUDGET};
use crate::randgrp::{
    exhaustive_outcomes, free_admissible, moment_mu, moment_n, monte_carlo, mu_n, quotient_census, Model, VarietySpec,
    DEFAULT_FREE_ORDER_CAP,
};
use crate::{par, Error, Result};

/// Monte Carlo estimates must lie within this many standard errors.
pub const MC_SIGMAS: f64 = 4.0;
pub const MC_TRIALS: u64 = 100_000;
pub const MC_N: usize = 8;
pub const MC_SEED: u64 = 20_240_501;
/// `|moment_n(ℤ/3) − 1|` at `n = MOMENT_LIMIT_N` must be below this.
pub const MOMENT_LIMIT_TOL: f64 = 1e-3;
pub const MOMENT_LIMIT_N: usize = 12;
/// Band for the empirical `ℤ/5`-moment over `F_3(t)`.
pub const FF_BAND: (f64, f64) = (0.5, 1.5);
pub const CANTOR_TRIPLES: usize = 10_000;
pub const BRIDGE_FIXTURES: usize = 20;

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {} ({:.1}s of {}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget: Duration,
    run: fn(bool) -> Result<String>,
}

const fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

pub const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, name: "stable-bijection", budget: minutes(10), run: orbit_exactness },
    Criterion { id: 2, name: "homology", budget: minutes(5), run: homology_oracle },
    Criterion { id: 3, name: "frobenius", budget: minutes(10), run: frobenius_counts },
    Criterion { id: 4, name: "randgrp-exact", budget: minutes(5), run: randgrp_exact },
    Criterion { id: 5, name: "monte-carlo", budget: minutes(10), run: monte_carlo_check },
    Criterion { id: 6, name: "predictions", budget: minutes(5), run: prediction_consistency },
    Criterion { id: 7, name: "arith", budget: minutes(10), run: arithmetic_ground_truth },
    Criterion { id: 8, name: "ff-moment", budget: minutes(60), run: ff_moment },
    Criterion { id: 9, name: "bridge", budget: minutes(1), run: bridge_formula },
];

/// Suite names accepted by [`run`], besides `all`.
pub fn suite_names() -> Vec<&'static str> {
    CRITERIA.iter().map(|c| c.name).collect()
}

/// Runs one criterion. `quick` trims the ranges so the whole suite takes seconds.
pub fn run_criterion(c: &Criterion, quick: bool) -> Check {
    let start = Instant::now();
    let outcome = (c.run)(quick);
    let elapsed = start.elapsed();
    let (passed, detail) = match outcome {
        Ok(d) if elapsed <= c.budget => (true, d),
        Ok(d) => (false, format!("{d}; over the time budget")),
        Err(e) => (false, e.to_string()),
    };
    Check { id: c.id, name: c.name, passed, detail, elapsed, budget: c.budget }
}

/// Runs the named suite (`all`, a name from [`suite_names`], or a criterion number).
pub fn run(suite: &str, quick: bool) -> Result<Vec<Check>> {
    let selected: Vec<&Criterion> = match suite {
        "all" => CRITERIA.iter().collect(),
        s => {
            let c = CRITERIA
                .iter()
                .find(|c| c.name == s || s.parse::<u8>().is_ok_and(|i| i == c.id))
                .ok_or_else(|| Error::validation(format!("unknown suite '{s}'; expected all or one of {}", suite_names().join(", "))))?;
            vec![c]
        }
    };
    Ok(selected.into_iter().map(|c| run_criterion(c, quick)).collect())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::internal(msg()))
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub struct HurwitzFixture {
    pub name: &'static str,
    pub g: FiniteGroup,
    pub c: Vec<usize>,
    pub g_inf: usize,
}

/// The four `(G, c, g∞)` triples of criteria 1 and 3.
pub fn hurwitz_fixtures() -> Result<Vec<HurwitzFixture>> {
    let (s3, perms) = symmetric(3);
    let involutions: Vec<usize> = (0..6).filter(|&x| s3.elem_order(x) == 2).collect();
    let t12 = perms.iter().position(|p| p[..] == [1, 0, 2]).expect("S3 contains (0 1)");
    let d5 = dihedral(5);
    let reflection = (0..10).find(|&x| d5.elem_order(x) == 2).expect("D5 has reflections");
    let bridge = sur_hur_bridge(&GammaGroup::inversion(cyclic(3))?, &[0, 1])?;
    let g_inf = bridge.g_inf.iter().copied().find(|&x| x != 0).expect("G_inf is nontrivial");
    Ok(vec![
        HurwitzFixture { name: "S3/transpositions", g: s3.clone(), c: involutions, g_inf: t12 },
        HurwitzFixture { name: "S3/nontrivial", g: s3, c: (1..6).collect(), g_inf: t12 },
        HurwitzFixture { name: "D5/nontrivial", g: d5, c: (1..10).collect(), g_inf: reflection },
        HurwitzFixture { name: "Z3:Z2/c_G", g: bridge.g, c: bridge.c_g, g_inf },
    ])
}

fn orbit_exactness(quick: bool) -> Result<String> {
    let n_max = if quick { 6 } else { 9 };
    let (mut classified, mut bijections) = (0, 0);
    for fx in hurwitz_fixtures()? {
        let ctx = UContext::new(&fx.g, &fx.c)?;
        let r = ctx.num_classes();
        let cyc = fx.g.generate(&[fx.g_inf]);
        for n in 2..=n_max {
            let cl = classify(&ctx, fx.g_inf, n, DEFAULT_TUPLE_BUDGET)?;
            ensure(cl.invariant_constant, || format!("{}: invariant not constant on an orbit at n = {n}", fx.name))?;
            let total: usize = cl.orbits.iter().map(|o| o.size).sum();
            ensure(total == cl.tuple_count, || format!("{}: orbit sizes sum to {total}, |E| = {} at n = {n}", fx.name, cl.tuple_count))?;
            classified += 1;
            for m in (1..=3).filter(|m| n >= 2 * r * m + 2) {
                for rep in stable_bijection_report(&ctx, &cyc, n, m, DEFAULT_TUPLE_BUDGET)? {
                    if rep.both_nonempty() {
                        ensure(rep.bijective(), || {
                            format!(
                                "{}: not bijective at n = {n}, M = {m} ({} orbits, {} invariants, {} collisions, {} missing)",
                                fx.name,
                                rep.orbit_count,
                                rep.k_count,
                                rep.collisions.len(),
                                rep.missing.len()
                            )
                        })?;
                        bijections += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{classified} (fixture, n) classifications exact, {bijections} stable bijections"))
}

/// Groups for criterion 2: all groups of order ≤ 16 and `(ℤ/5)² ⋊ ℤ/2`.
pub fn homology_groups() -> Result<Vec<(String, FiniteGroup)>> {
    let mut v = small_groups();
    v.push(("C5^2:C2".into(), GammaGroup::inversion(abelian(&[5, 5]))?.semidirect().group));
    Ok(v)
}

fn homology_oracle(_quick: bool) -> Result<String> {
    let (mut groups, mut reduced) = (0, 0);
    for (name, g) in homology_groups()? {
        let a = h2(&g)?;
        let b = oracle::h2_oracle(&g)?;
        ensure(a == b, || format!("{name}: H2 is {a} by the Hopf formula, {b} by cocycles"))?;
        groups += 1;
        let n = g.order();
        let mut cs: Vec<Vec<usize>> = vec![(1..n).collect()];
        let mut orders: Vec<usize> = (1..n).map(|x| g.elem_order(x)).collect();
        orders.sort_unstable();
        orders.dedup();
        for k in orders {
            let c: Vec<usize> = (1..n).filter(|&x| g.elem_order(x) == k).collect();
            if g.generates(&c) && c.len() != n - 1 {
                cs.push(c);
            }
        }
        for c in cs {
            let a = h2_reduced(&g, &c)?;
            let b = oracle::h2_reduced_oracle(&g, &c)?;
            ensure(a == b, || format!("{name}: H2(G, c) is {a} from the reduced cover, {b} by cocycles, |c| = {}", c.len()))?;
            reduced += 1;
        }
    }
    Ok(format!("{groups} multipliers and {reduced} reduced multipliers agree"))
}

fn frobenius_counts(quick: bool) -> Result<String> {
    let n_max = if quick { 6 } else { 9 };
    let (mut counts, mut orbits) = (0, 0);
    for fx in hurwitz_fixtures()? {
        let ctx = UContext::new(&fx.g, &fx.c)?;
        let cyc = fx.g.generate(&[fx.g_inf]);
        for q in [3u64, 5, 7, 11, 13] {
            let Ok(params) = FrobeniusParams::new(q, fx.g.order()) else { continue };
            if q % cyc.len() as u64 != 1 {
                continue;
            }
            let data = FrobeniusData::new(&ctx, params.clone())?;
            let period = frobenius_period(&ctx, &params);
            for n in 1..=n_max {
                // disagreement between the closed form and brute force is an error here
                frob::fixed_counts(&ctx, &cyc, &params, n)?;
                counts += 1;
                for (h, v) in k_elements(&ctx, n, 0) {
                    let (mut h2, mut v2) = (h.clone(), v.clone());
                    for _ in 0..period {
                        (h2, v2) = data.apply(&ctx, &h2, &v2)?;
                    }
                    ensure(h2 == h && v2 == v, || format!("{}: Frobenius^{period} moves ({h:?}, {v:?}) at q = {q}", fx.name))?;
                    orbits += 1;
                }
            }
        }
    }
    Ok(format!("{counts} fixed counts agree, {orbits} invariants return after ord(q) steps"))
}

fn inv_abelian(orders: &[usize]) -> Result<GammaGroup> {
    GammaGroup::inversion(abelian(orders))
}

fn randgrp_exact(_quick: bool) -> Result<String> {
    let spec = VarietySpec::abelian_inversion(3, 1)?;
    let targets = [vec![], vec![3], vec![3, 3]];
    let mut checks = 0;
    for n in 1..=3 {
        let f = free_admissible(n, &spec, DEFAULT_FREE_ORDER_CAP)?;
        let census = quotient_census(&f.group)?;
        for gi in [vec![0, 1], vec![0]] {
            let ex = exhaustive_outcomes(&f, &gi)?;
            for orders in &targets {
                let h = inv_abelian(orders)?;
                let (e, m) = (ex.expected_sur(&h), moment_n(&h, &gi, n));
                ensure(e == m, || format!("n = {n}, Γ∞ = {gi:?}, H = {orders:?}: enumeration gives E = {e}, formula {m}"))?;
                checks += 1;
            }
            let mut total = BigRational::zero();
            for h in &census {
                let p = mu_n(h, &spec, &gi, n)?;
                let e = ex.probability(h);
                ensure(e == p, || format!("n = {n}, Γ∞ = {gi:?}: P(X ≅ {}) is {e} by enumeration, {p} by formula", crate::randgrp::fingerprint(h)))?;
                total += p;
            }
            ensure(total.is_one(), || format!("n = {n}, Γ∞ = {gi:?}: census mass is {total}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} exact identities for n ≤ 3"))
}

fn monte_carlo_check(quick: bool) -> Result<String> {
    let spec = VarietySpec::abelian_inversion(3, 1)?;
    let gi = [0, 1];
    let trivial = inv_abelian(&[])?;
    let z3 = inv_abelian(&[3])?;
    let trials = if quick { MC_TRIALS / 10 } else { MC_TRIALS };
    let model = Model::new(&spec, MC_N, &gi, DEFAULT_FREE_ORDER_CAP)?;
    let targets = vec![("1".to_string(), trivial.clone()), ("Z3".to_string(), z3.clone())];
    let report = monte_carlo(&model, trials, MC_SEED, &targets, &spec)?;
    let exact = [
        ("P(X = 1)", report.targets[0].prob, report.targets[0].prob_se, mu_n(&trivial, &spec, &gi, MC_N)?),
        ("P(X = Z3)", report.targets[1].prob, report.targets[1].prob_se, mu_n(&z3, &spec, &gi, MC_N)?),
        ("E#Sur(X, Z3)", report.targets[1].sur_mean, report.targets[1].sur_se, moment_n(&z3, &gi, MC_N)),
    ];
    let mut parts = Vec::new();
    for (what, est, se, val) in exact {
        let v = to_f64(&val);
        let z = (est - v).abs() / se;
        ensure(se > 0.0 && z <= MC_SIGMAS, || format!("{what}: estimate {est:.5} vs exact {v:.5}, se {se:.2e}"))?;
        parts.push(format!("{what} z = {z:.2}"));
    }
    let m = to_f64(&moment_n(&z3, &gi, MOMENT_LIMIT_N));
    ensure((m - 1.0).abs() < MOMENT_LIMIT_TOL, || format!("moment_{MOMENT_LIMIT_N}(Z3) = {m}"))?;
    let mu = moment_mu(&z3, &gi);
    ensure(mu.is_one(), || format!("limit moment of Z3 is {mu}"))?;
    Ok(format!("{}; moment_{MOMENT_LIMIT_N}(Z3) = {m:.6}", parts.join(", ")))
}

const SMALL_PRIMES: [u64; 14] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 61];

fn prediction_consistency(_quick: bool) -> Result<String> {
    let mut checks = 0;
    for ell in [3usize, 5] {
        for rank in [1usize, 2] {
            let h = inv_abelian(&vec![ell; rank])?;
            for gi in [vec![0, 1], vec![0]] {
                let fixed_inf = (0..h.base.order()).filter(|&x| gi.iter().all(|&g| h.act(g, x) == x)).count();
                let fixed = (0..h.base.order()).filter(|&x| h.act(1, x) == x).count();
                let index = (fixed_inf / fixed) as i64;
                let a = frob::moment_prediction(&h, &gi, None)?;
                let b = moment_mu(&h, &gi);
                ensure(a == b && a == ratio(1, index), || format!("ℓ = {ell}, rank {rank}, Γ∞ = {gi:?}: frob gives {a}, randgrp {b}"))?;
                checks += 1;
                let mult = h2(&h.semidirect().group)?.prime_to(2);
                for q in SMALL_PRIMES.into_iter().filter(|&q| !(q as usize).is_multiple_of(ell)) {
                    let p = frob::moment_prediction(&h, &gi, Some(&BigUint::from(q)))?;
                    let factor = p * BigRational::from_integer(index.into());
                    let tors: u64 = mult.factors().iter().map(|&d| crate::linalg::gcd_u64(q - 1, d)).product();
                    let rule = if rank == 2 && (q - 1) % ell as u64 == 0 { ell as u64 } else { 1 };
                    ensure(factor == BigRational::from_integer(tors.into()) && tors == rule, || {
                        format!("ℓ = {ell}, rank {rank}, q = {q}: factor {factor}, |H2[q-1]| = {tors}, expected {rule}")
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} predictions agree"))
}

/// `#{(x, y) ∈ F_q² : y² = f(x)} + 1`, by direct search.
fn affine_points_plus_one(f: &FqPoly) -> u64 {
    let q = f.q();
    let squares: Vec<u64> = (0..q).map(|y| (0..q).filter(|&z| z * z % q == y).count() as u64).collect();
    (0..q).map(|x| squares[f.eval(x) as usize]).sum::<u64>() + 1
}

fn arithmetic_ground_truth(quick: bool) -> Result<String> {
    const BUDGET: u64 = 1 << 20;
    let e = HyperellipticModel::new(FqPoly::new(3, vec![1, 2, 0, 1])?)?;
    let n = jacobian_order(&e)?;
    let classes = enumerate_classes(&e, BUDGET)?.len() as u64;
    ensure(n == 7 && classes == 7, || format!("t^3 - t + 1 over F_3: L(1) = {n}, {classes} Mumford classes"))?;
    let mut genus_one = 0;
    for q in [3u64, 5] {
        for m in enumerate_imaginary(q, 3)? {
            let l = l_polynomial(&m)?.at_one() as u64;
            let c = enumerate_classes(&m, BUDGET)?.len() as u64;
            let p = affine_points_plus_one(&m.f);
            ensure(l == c && l == p, || format!("{m}: L(1) = {l}, {c} classes, {p} points"))?;
            genus_one += 1;
        }
    }
    let mut hasse = 0;
    for (q, d_max) in [(3u64, if quick { 5 } else { 7 }), (5, 5), (7, 3)] {
        for d in (1..=d_max).step_by(2) {
            for m in enumerate_imaginary(q, d)? {
                let l = l_polynomial(&m)?;
                ensure(l.within_hasse_weil() && l.satisfies_functional_equation(), || format!("{m}: L = {:?}", l.coeffs))?;
                hasse += 1;
            }
        }
    }
    let triples = if quick { CANTOR_TRIPLES / 10 } else { CANTOR_TRIPLES };
    let fixtures = [e, first_model(5, 5)?, first_model(3, 7)?];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in &fixtures {
        let n = jacobian_order(m)?;
        let all = enumerate_classes(m, BUDGET)?;
        let mut pick = || all[rng.gen_range(0..all.len())].clone();
        for _ in 0..triples {
            let (a, b, c) = (pick(), pick(), pick());
            let left = divclass_add(m, &divclass_add(m, &a, &b)?, &c)?;
            let right = divclass_add(m, &a, &divclass_add(m, &b, &c)?)?;
            ensure(left == right, || format!("{m}: (a+b)+c ≠ a+(b+c) for a = {a:?}, b = {b:?}, c = {c:?}"))?;
            ensure(divclass_mul(m, &a, n).is_identity(), || format!("{m}: {n}·{a:?} is not the identity"))?;
        }
    }
    Ok(format!("{genus_one} genus-1 curves match enumeration, {hasse} L-polynomials within Hasse–Weil, {triples} triples on each of 3 curves"))
}

fn first_model(q: u64, d: u32) -> Result<HyperellipticModel> {
    enumerate_imaginary(q, d)?.next().ok_or_else(|| Error::internal(format!("no models over F_{q} of degree {d}")))
}

fn ff_moment(quick: bool) -> Result<String> {
    let h = AbelianStructure::from_cyclic(&[5]);
    let d_max = if quick { 5 } else { 7 };
    let opts = MomentOptions { min_degree: 3, ..MomentOptions::default() };
    let a = empirical_moment(3, d_max, &h, Weights::None, &opts)?;
    let b = par::with_workers(Some(1), || empirical_moment(3, d_max, &h, Weights::None, &opts))?;
    ensure(a.to_csv() == b.to_csv(), || "report differs between worker counts".into())?;
    let avg = a.final_average().unwrap_or(f64::NAN);
    ensure(a.prediction.is_one(), || format!("prediction is {}", a.prediction))?;
    ensure(a.verdict(FF_BAND.0, FF_BAND.1) == Some(true), || {
        format!("average {avg:.4} over {} fields is outside [{}, {}]", a.total_fields(), FF_BAND.0, FF_BAND.1)
    })?;
    let se = a.rows.last().map_or(f64::NAN, |r| r.std_error);
    Ok(format!("average {avg:.4} ± {se:.4} over {} fields, prediction 1", a.total_fields()))
}

/// Admissible Γ-groups with Γ cyclic, acting on `ℤ/p` through a unit of order `|Γ|`.
fn bridge_pool() -> Result<Vec<GammaGroup>> {
    let mut pool = Vec::new();
    for orders in [vec![3], vec![5], vec![7], vec![3, 3], vec![9], vec![15], vec![5, 5]] {
        pool.push(inv_abelian(&orders)?);
    }
    for (p, k, unit) in [(5usize, 4usize, 2usize), (7, 3, 2), (7, 6, 3), (13, 4, 5), (11, 5, 3)] {
        let image: Vec<usize> = (0..p).map(|x| x * unit % p).collect();
        pool.push(GammaGroup::from_generator_images(cyclic(p), cyclic(k), &[1], &[image])?);
    }
    Ok(pool)
}

fn bridge_formula(_quick: bool) -> Result<String> {
    let pool = bridge_pool()?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..BRIDGE_FIXTURES {
        let h = &pool[rng.gen_range(0..pool.len())];
        let gamma_inf = h.gamma.generate(&[rng.gen_range(0..h.gamma.order())]);
        let b = sur_hur_bridge(h, &gamma_inf)?;
        let fixed = |d: &[usize]| (0..h.base.order()).filter(|&x| d.iter().all(|&g| h.act(g, x) == x)).count() as i64;
        let all: Vec<usize> = (0..h.gamma.order()).collect();
        let expected = ratio(fixed(&gamma_inf) / fixed(&all), gamma_inf.len() as i64);
        ensure(b.factor == expected, || format!("fixture {i}: factor {} but [H^Γ∞ : H^Γ]/|G∞| = {expected}", b.factor))?;
        let x = ratio(rng.gen_range(0..10_000), rng.gen_range(1..100));
        ensure(b.hur_from_sur(&b.sur_from_hur(&x)) == x && b.sur_from_hur(&b.hur_from_sur(&x)) == x, || format!("fixture {i}: round trip fails at {x}"))?;
    }
    let b = sur_hur_bridge(&inv_abelian(&[3])?, &[0, 1])?;
    let involutions: Vec<usize> = (1..b.g.order()).filter(|&x| b.g.elem_order(x) == 2).collect();
    ensure(b.g.order() == 6 && !b.g.is_abelian() && b.c_g == involutions && involutions.len() == 3, || format!("c_G for Z/3 ⋊ Z/2 is {:?}", b.c_g))?;
    Ok(format!("{BRIDGE_FIXTURES} random fixtures round-trip; c_G on Z/3 ⋊ Z/2 is the 3 involutions"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_a_validation_error() {
        assert!(matches!(run("unknown", true), Err(Error::Validation(_))));
    }

    #[test]
    fn suites_resolve_by_name_and_number() {
        assert_eq!(run("bridge", true).unwrap()[0].id, 9);
        assert_eq!(run("9", true).unwrap()[0].name, "bridge");
    }

    #[test]
    fn affine_count_of_the_order_seven_curve() {
        assert_eq!(affine_points_plus_one(&FqPoly::new(3, vec![1, 2, 0, 1]).unwrap()), 7);
    }
}
