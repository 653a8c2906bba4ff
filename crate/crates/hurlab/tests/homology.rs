use hurlab::grp::catalog::{alternating, dihedral, small_groups, symmetric};
use hurlab::grp::FiniteGroup;
use hurlab::homology::UContext;
use hurlab::homology::{h2, h2_reduced, schur_cover};
use num_bigint::BigInt;
use proptest::prelude::*;

fn nontrivial(g: &FiniteGroup) -> Vec<usize> {
    (1..g.order()).collect()
}

/// Elements of the given orders, a union of classes closed under unit powers.
fn of_orders(g: &FiniteGroup, orders: &[usize]) -> Vec<usize> {
    (1..g.order()).filter(|&x| orders.contains(&g.elem_order(x))).collect()
}

fn contexts() -> Vec<UContext> {
    let mut v = Vec::new();
    for (_, g) in small_groups().into_iter().filter(|(_, g)| g.order() > 1 && g.order() <= 12) {
        v.push(UContext::new(&g, &nontrivial(&g)).unwrap());
    }
    let s3 = symmetric(3).0;
    v.push(UContext::new(&s3, &of_orders(&s3, &[2])).unwrap());
    let d4 = dihedral(4);
    // the involutions of D4 generate it; the centre is one of the classes
    v.push(UContext::new(&d4, &of_orders(&d4, &[2])).unwrap());
    v
}

#[test]
fn schur_covers_are_stem_of_the_right_order() {
    for (name, g) in small_groups() {
        let s = schur_cover(&g).unwrap();
        let m = h2(&g).unwrap();
        assert_eq!(s.total.order(), g.order() * m.order() as usize, "{name}");
        let center = s.total.center();
        let derived = s.total.derived_subgroup();
        for k in &s.kernel {
            assert!(center.contains(k) && derived.contains(k), "{name}: kernel element {k}");
        }
        for a in 0..s.total.order() {
            for b in 0..s.total.order() {
                assert_eq!(s.proj[s.total.mul(a, b)], g.mul(s.proj[a], s.proj[b]), "{name}");
            }
        }
    }
}

#[test]
fn reduced_multiplier_divides_the_full_one() {
    for (name, g) in small_groups().into_iter().filter(|(_, g)| g.order() > 1) {
        let full = h2(&g).unwrap().order();
        let red = h2_reduced(&g, &nontrivial(&g)).unwrap().order();
        assert_eq!(full % red, 0, "{name}: {red} does not divide {full}");
    }
}

#[test]
fn known_multipliers() {
    let order = |g: &FiniteGroup| h2(g).unwrap().order();
    assert_eq!(order(&dihedral(4)), 2);
    assert_eq!(order(&dihedral(5)), 1);
    assert_eq!(order(&symmetric(4).0), 2);
    // every noncyclic abelian subgroup of D4 is made of involutions
    let d4 = dihedral(4);
    assert_eq!(h2_reduced(&d4, &of_orders(&d4, &[2])).unwrap().order(), 1);
    // 3-cycles commute only with their own powers
    let a4 = alternating(4).0;
    assert_eq!(h2_reduced(&a4, &of_orders(&a4, &[3])).unwrap().order(), 2);
    assert_eq!(h2_reduced(&a4, &nontrivial(&a4)).unwrap().order(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bracket_braid_relation(which in 0usize..64, i in 0usize..64, j in 0usize..64) {
        let ctxs = contexts();
        let ctx = &ctxs[which % ctxs.len()];
        let x = ctx.c[i % ctx.c.len()];
        let y = ctx.c[j % ctx.c.len()];
        let g = &ctx.g;
        let lhs = ctx.mul(&ctx.bracket(x).unwrap(), &ctx.bracket(y).unwrap());
        let rhs = ctx.mul(&ctx.bracket(g.conj(x, y)).unwrap(), &ctx.bracket(x).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn k_is_central(which in 0usize..64, h_seed in 0usize..64, v in prop::collection::vec(-3i64..4, 1..8), word in prop::collection::vec(0usize..64, 1..4)) {
        let ctxs = contexts();
        let ctx = &ctxs[which % ctxs.len()];
        let r = ctx.num_classes();
        // multiply v by exp(G) so it maps to zero in G^ab
        let e = ctx.g.exponent() as i64;
        let vv: Vec<BigInt> = (0..r).map(|k| BigInt::from(v[k % v.len()] * e)).collect();
        let h = ctx.sc.kernel_coords(h_seed % ctx.sc.kernel_order());
        let z = ctx.k_compose(&h, &vv);
        prop_assert!(ctx.in_k(&z));
        prop_assert!(ctx.is_valid(&z));
        let mut u = ctx.identity();
        for w in &word {
            u = ctx.mul(&u, &ctx.bracket(ctx.c[w % ctx.c.len()]).unwrap());
        }
        prop_assert_eq!(ctx.mul(&z, &u), ctx.mul(&u, &z));
        prop_assert_eq!(ctx.k_decompose(&z).unwrap(), (h, vv));
    }
}
