use std::sync::OnceLock;

use hurlab::grp::FiniteGroup;
use hurlab::homology::UContext;
use hurlab::hurwitz::{
    braid_act, braid_inverse, conjugate, enumerate_tuples, lifting_invariant, orbits, product_count, NielsenTuple, TupleSet,
    DEFAULT_TUPLE_BUDGET,
};
use hurlab::par;
use hurlab::verify::hurwitz_fixtures;
use proptest::prelude::*;

// even, so that products of transpositions can be trivial
const N: usize = 6;

struct Fixture {
    ctx: UContext,
    tuples: TupleSet,
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        hurwitz_fixtures()
            .unwrap()
            .into_iter()
            .map(|fx| Fixture {
                ctx: UContext::new(&fx.g, &fx.c).unwrap(),
                tuples: enumerate_tuples(&fx.g, &fx.c, fx.g_inf, N, DEFAULT_TUPLE_BUDGET).unwrap(),
            })
            .collect()
    })
}

fn product(g: &FiniteGroup, t: &NielsenTuple) -> usize {
    t.entries.iter().fold(0, |acc, &x| g.mul(acc, x))
}

fn class_multiset(ctx: &UContext, t: &NielsenTuple) -> Vec<usize> {
    let mut v: Vec<usize> = t.entries.iter().map(|&x| ctx.classes.class_of[x]).collect();
    v.sort_unstable();
    v
}

fn arbitrary_tuple(g: &FiniteGroup, picks: &[usize]) -> NielsenTuple {
    NielsenTuple { entries: picks.iter().map(|p| p % g.order()).collect(), g_inf: 0 }
}

#[test]
fn orbit_sizes_partition_the_tuples() {
    for f in fixtures() {
        let o = orbits(&f.ctx.g, &f.ctx.c, f.tuples.get(0).g_inf, N, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(o.sizes.iter().sum::<usize>(), o.tuples.len());
        assert_eq!(o.reps.len(), o.sizes.len());
        assert!(o.tuples.len() as u128 <= product_count(&f.ctx.g, &f.ctx.c, o.tuples.get(0).g_inf, N));
    }
}

#[test]
fn orbits_do_not_depend_on_worker_count() {
    for f in fixtures() {
        let g_inf = f.tuples.get(0).g_inf;
        let run = |w| par::with_workers(Some(w), || orbits(&f.ctx.g, &f.ctx.c, g_inf, N + 2, DEFAULT_TUPLE_BUDGET).unwrap());
        let (a, b) = (run(1), run(4));
        assert_eq!(a.orbit_of, b.orbit_of);
        assert_eq!(a.reps, b.reps);
        assert_eq!(a.sizes, b.sizes);
    }
}

#[test]
fn braid_index_is_checked() {
    let f = &fixtures()[0];
    let t = f.tuples.get(0);
    assert!(braid_act(&f.ctx.g, 0, &t).is_err());
    assert!(braid_act(&f.ctx.g, t.entries.len(), &t).is_err());
    assert!(braid_act(&f.ctx.g, t.entries.len() - 1, &t).is_ok());
}

proptest! {
    #[test]
    fn braid_relations_hold(which in 0usize..4, picks in prop::collection::vec(0usize..64, 4..7), i in 1usize..6, j in 1usize..6) {
        let g = &fixtures()[which].ctx.g;
        let t = arbitrary_tuple(g, &picks);
        let top = t.entries.len() - 1;
        let i = 1 + (i - 1) % top;
        let j = 1 + (j - 1) % top;
        let s = |k: usize, x: &NielsenTuple| braid_act(g, k, x).unwrap();
        prop_assert_eq!(braid_inverse(g, i, &s(i, &t)).unwrap(), t.clone());
        prop_assert_eq!(s(i, &braid_inverse(g, i, &t).unwrap()), t.clone());
        if i < top {
            prop_assert_eq!(s(i, &s(i + 1, &s(i, &t))), s(i + 1, &s(i, &s(i + 1, &t))));
        }
        if i.abs_diff(j) >= 2 {
            prop_assert_eq!(s(i, &s(j, &t)), s(j, &s(i, &t)));
        }
    }

    #[test]
    fn braid_moves_preserve_invariants(which in 0usize..4, idx in 0usize..1_000_000, moves in prop::collection::vec((1usize..N - 1, any::<bool>()), 1..12)) {
        let f = &fixtures()[which];
        let g = &f.ctx.g;
        let t = f.tuples.get(idx % f.tuples.len());
        let inv = lifting_invariant(&f.ctx, &t).unwrap();
        let mut u = t.clone();
        for &(i, forward) in &moves {
            u = if forward { braid_act(g, i, &u).unwrap() } else { braid_inverse(g, i, &u).unwrap() };
        }
        prop_assert_eq!(product(g, &u), product(g, &t));
        prop_assert_eq!(g.generate(&u.entries), g.generate(&t.entries));
        prop_assert_eq!(class_multiset(&f.ctx, &u), class_multiset(&f.ctx, &t));
        prop_assert!(f.tuples.index_of(&u).is_some());
        prop_assert_eq!(lifting_invariant(&f.ctx, &u).unwrap(), inv.clone());
        let w = conjugate(g, t.g_inf, &t);
        prop_assert!(f.tuples.index_of(&w).is_some());
        prop_assert_eq!(lifting_invariant(&f.ctx, &w).unwrap(), inv);
    }
}
