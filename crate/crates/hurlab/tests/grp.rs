use hurlab::grp::catalog::{abelian, abelian_coords, abelian_index, cyclic, symmetric};
use hurlab::grp::GammaGroup;
use num_bigint::BigUint;
use proptest::prelude::*;

fn affine(p: usize, k: usize, unit: usize) -> GammaGroup {
    let image: Vec<usize> = (0..p).map(|x| x * unit % p).collect();
    GammaGroup::from_generator_images(cyclic(p), cyclic(k), &[1], &[image]).unwrap()
}

/// `(ℤ/3)²` with a generator of Γ acting by `f` on coordinates.
fn on_plane(k: usize, f: fn(usize, usize) -> (usize, usize)) -> GammaGroup {
    let o = [3, 3];
    let image: Vec<usize> = (0..9)
        .map(|i| {
            let c = abelian_coords(&o, i);
            let (a, b) = f(c[0], c[1]);
            abelian_index(&o, &[a % 3, b % 3])
        })
        .collect();
    GammaGroup::from_generator_images(abelian(&o), cyclic(k), &[1], &[image]).unwrap()
}

fn pool() -> Vec<GammaGroup> {
    vec![
        GammaGroup::inversion(abelian(&[3])).unwrap(),
        GammaGroup::inversion(abelian(&[3, 3])).unwrap(),
        GammaGroup::inversion(abelian(&[9])).unwrap(),
        GammaGroup::inversion(abelian(&[5])).unwrap(),
        affine(7, 3, 2),
        affine(5, 4, 2),
        on_plane(4, |a, b| (2 * b, a)),
        on_plane(2, |a, b| (b, a)),
        GammaGroup::trivial_action(symmetric(3).0, cyclic(2)),
    ]
}

/// Tuples in `H^n` whose admissible closure is all of `H`, by direct census.
fn census(h: &GammaGroup, n: u32) -> u64 {
    let m = h.base.order();
    let mut count = 0;
    for code in 0..m.pow(n) {
        let t: Vec<usize> = (0..n).map(|i| code / m.pow(i) % m).collect();
        if h.admissible_closure(&t).len() == m {
            count += 1;
        }
    }
    count
}

#[test]
fn sur_count_matches_tuple_census() {
    for h in pool() {
        let fixed = h.gamma_invariants_all().len() as u64;
        for n in 1..=2u32 {
            let direct = census(&h, n);
            let formula = h.count_sur_free_admissible(n as usize) * BigUint::from(fixed.pow(n));
            assert_eq!(formula, BigUint::from(direct), "|H| = {}, n = {n}", h.base.order());
        }
    }
}

#[test]
fn semidirect_recovers_action_by_conjugation() {
    for h in pool() {
        let sd = h.semidirect();
        let g = &sd.group;
        assert_eq!(g.order(), h.base.order() * h.gamma.order());
        for c in 0..h.gamma.order() {
            let e = sd.embed_gamma[c];
            assert_eq!(sd.proj[e], c);
            for x in 0..h.base.order() {
                assert_eq!(g.conj(e, sd.embed_h[x]), sd.embed_h[h.act(c, x)]);
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(sd.proj[g.mul(a, b)], h.gamma.mul(sd.proj[a], sd.proj[b]));
            }
        }
    }
}

proptest! {
    #[test]
    fn admissible_closure_properties(which in 0usize..9, picks in prop::collection::vec(0usize..81, 0..4)) {
        let pool = pool();
        let h = &pool[which];
        let set: Vec<usize> = picks.iter().map(|p| p % h.base.order()).collect();
        let cl = h.admissible_closure(&set);
        prop_assert!(h.is_stable(&cl));
        for &s in &set {
            for y in h.y(s) {
                prop_assert!(cl.contains(&y));
            }
        }
        prop_assert_eq!(h.stable_closure(&cl), cl.clone());
        let again = h.admissible_closure(&cl);
        prop_assert!(again.iter().all(|x| cl.contains(x)));
        if h.coprime() {
            // [[H, Γ], Γ] = [H, Γ] for coprime actions
            prop_assert_eq!(again, cl);
        }
    }

    #[test]
    fn invariants_shrink_with_the_acting_group(which in 0usize..9, gen in 0usize..6) {
        let pool = pool();
        let h = &pool[which];
        let sub = h.gamma.generate(&[gen % h.gamma.order()]);
        let small = h.invariants(&sub);
        let all = h.gamma_invariants_all();
        prop_assert!(all.iter().all(|x| small.contains(x)));
        prop_assert!(h.base.generate(&small) == small);
    }
}
