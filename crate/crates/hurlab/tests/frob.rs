use hurlab::frob::{fixed_counts, fixed_counts_min, frobenius_map, moment_prediction, FrobeniusParams};
use hurlab::grp::catalog::abelian;
use hurlab::grp::GammaGroup;
use hurlab::homology::UContext;
use hurlab::hurwitz::{classify, stable_bijection_report, DEFAULT_TUPLE_BUDGET};
use hurlab::verify::hurwitz_fixtures;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

/// Orbits over every generator of `G∞` whose invariant is Frobenius-fixed
/// with all multiplicities at least `m`.
fn fixed_orbits(ctx: &UContext, g_inf_group: &[usize], q: &FrobeniusParams, n: usize, m: usize) -> usize {
    let g = &ctx.g;
    let gens = g_inf_group.iter().filter(|&&x| g.elem_order(x) == g_inf_group.len());
    let mut count = 0;
    for &gi in gens {
        let cl = classify(ctx, gi, n, DEFAULT_TUPLE_BUDGET).unwrap();
        for o in &cl.orbits {
            let big_enough = o.invariant.v.iter().all(|x| *x >= BigInt::from(m));
            if big_enough && frobenius_map(ctx, &o.invariant, q).unwrap() == o.invariant {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn fixed_orbits_match_b_times_generators() {
    let (mut compared, mut nonzero) = (0, 0);
    for fx in hurwitz_fixtures().unwrap().into_iter().filter(|f| f.name.starts_with("S3") || f.name.starts_with("Z3")) {
        let ctx = UContext::new(&fx.g, &fx.c).unwrap();
        let cyc = fx.g.generate(&[fx.g_inf]);
        let gens = cyc.iter().filter(|&&x| fx.g.elem_order(x) == cyc.len()).count();
        let r = ctx.num_classes();
        for n in [2 * r + 2, 2 * r + 4] {
            let stable = stable_bijection_report(&ctx, &cyc, n, 1, DEFAULT_TUPLE_BUDGET).unwrap();
            assert!(stable.iter().all(|s| s.bijective()), "{} n = {n}", fx.name);
            for q in [5u64, 7, 11, 13] {
                let p = FrobeniusParams::new(q, fx.g.order()).unwrap();
                let b = fixed_counts_min(&ctx, &p, n, 1).unwrap().b;
                nonzero += usize::from(!b.is_zero());
                assert_eq!(BigUint::from(fixed_orbits(&ctx, &cyc, &p, n, 1)), b * gens, "{} n = {n} q = {q}", fx.name);
                compared += 1;
            }
        }
    }
    assert!(compared >= 16 && nonzero >= compared / 2, "{nonzero} of {compared} counts nonzero");
}

fn c3sq_involutions() -> (UContext, Vec<usize>) {
    let h = GammaGroup::inversion(abelian(&[3, 3])).unwrap();
    let sd = h.semidirect();
    let g = sd.group;
    let c: Vec<usize> = (1..g.order()).filter(|&x| g.elem_order(x) == 2).collect();
    let g_inf = g.generate(&[c[0]]);
    (UContext::new(&g, &c).unwrap(), g_inf)
}

#[test]
fn b_is_a_multiple_of_the_torsion_of_h2c() {
    let (ctx, g_inf) = c3sq_involutions();
    assert_eq!(ctx.h2c.order(), 3);
    for q in [5u64, 7, 11, 13, 19] {
        let p = FrobeniusParams::new(q, ctx.g.order()).unwrap();
        let t = ctx.h2c.torsion_count(q - 1);
        for n in (2..=8).step_by(2) {
            let b = fixed_counts(&ctx, &g_inf, &p, n).unwrap().b;
            assert!((&b % t).is_zero(), "q = {q} n = {n}: b = {b}, |H2(G,c)[q-1]| = {t}");
        }
    }
}

#[test]
fn trivial_gamma_inf_gives_inverse_order() {
    for l in [3usize, 5, 7] {
        let h = GammaGroup::inversion(abelian(&[l])).unwrap();
        let expect = BigRational::new(1.into(), BigInt::from(l));
        assert_eq!(moment_prediction(&h, &[0], None).unwrap(), expect);
        for q in [11u64, 13, 29] {
            if !(q as usize).is_multiple_of(l) {
                assert_eq!(moment_prediction(&h, &[0], Some(&BigUint::from(q))).unwrap(), expect);
            }
        }
    }
    let h = GammaGroup::inversion(abelian(&[3, 3])).unwrap();
    assert_eq!(moment_prediction(&h, &[0], None).unwrap(), BigRational::new(1.into(), 9.into()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_agrees_with_brute_force(which in 0usize..4, qi in 0usize..6, n in 1usize..8, m in 0usize..2) {
        let fx = &hurwitz_fixtures().unwrap()[which];
        let ctx = UContext::new(&fx.g, &fx.c).unwrap();
        let q = [7u64, 11, 13, 17, 19, 23][qi];
        let p = FrobeniusParams::new(q, fx.g.order()).unwrap();
        // returns an error if the two counts differ
        let fc = fixed_counts_min(&ctx, &p, n, m).unwrap();
        let total: BigUint = fc.refinement.values().sum();
        prop_assert_eq!(total, fc.b);
    }
}
