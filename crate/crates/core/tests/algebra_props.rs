//! Property tests: field axioms, scalar canonicalization, conjugation invariants.

use endorank::field::Field;
use endorank::groups::{build, GroupDescriptor};
use endorank::mat::Mat;
use endorank::matgroup::{conjugate_key_by, GroupCtx, SubgroupKey};
use proptest::prelude::*;

const ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 64];

fn field_and_elems() -> impl Strategy<Value = (u64, u16, u16, u16)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|q| {
        let r = 0..q as u16;
        (Just(q), r.clone(), r.clone(), r)
    })
}

fn elem(f: &Field, i: u16) -> endorank::field::FieldElem {
    f.elements().nth(i as usize).unwrap()
}

fn word(ctx: &GroupCtx, w: &[usize]) -> Mat {
    let gens = ctx.generators();
    w.iter().fold(ctx.identity(), |acc, &i| ctx.mul(&acc, &gens[i % gens.len()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((q, i, j, k) in field_and_elems()) {
        let f = Field::of_order(q).unwrap();
        let (a, b, c) = (elem(&f, i), elem(&f, j), elem(&f, k));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.pow(a, q as i64 - 1), f.one());
        }
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, f.k()), a);
    }

    #[test]
    fn canonicalization_is_a_class_function(w in prop::collection::vec(0usize..8, 0..12), s in 1u16..16) {
        let ctx = build(&GroupDescriptor::named("PGL", 3, 4).unwrap()).unwrap();
        let f = ctx.field();
        let g = word(&ctx, &w);
        let lambda = f.exp(s as i64);
        let scaled = Mat::scalar(3, lambda).mul(&g, f);
        prop_assert_eq!(ctx.canon(scaled), g);
        prop_assert_eq!(ctx.canon(g), g);
    }

    #[test]
    fn conjugation_preserves_order_and_inverts(
        w in prop::collection::vec(0usize..8, 0..10),
        h in prop::collection::vec(0usize..8, 1..10),
    ) {
        let ctx = build(&GroupDescriptor::named("SU", 3, 3).unwrap()).unwrap();
        let g = word(&ctx, &w);
        let c = word(&ctx, &h);
        let conj = ctx.conj(&g, &c);
        prop_assert_eq!(ctx.element_order(&conj), ctx.element_order(&g));
        prop_assert_eq!(ctx.conj(&conj, &ctx.inv(&c)), g);
        let g2 = word(&ctx, &h[..h.len() / 2]);
        prop_assert_eq!(ctx.conj(&ctx.mul(&g, &g2), &c), ctx.mul(&conj, &ctx.conj(&g2, &c)));
    }

    #[test]
    fn conjugate_subgroups_round_trip(
        w in prop::collection::vec(0usize..8, 1..8),
        h in prop::collection::vec(0usize..8, 1..8),
    ) {
        let ctx = build(&GroupDescriptor::named("PSL", 2, 7).unwrap()).unwrap();
        let g = word(&ctx, &w);
        let c = word(&ctx, &h);
        let sub = ctx.closure(&[g], 1 << 10).unwrap();
        let key = SubgroupKey::from_elements(2, sub.clone());
        let moved = conjugate_key_by(&ctx, &key, &c);
        prop_assert_eq!(moved.len(), key.len());
        prop_assert_eq!(conjugate_key_by(&ctx, &moved, &ctx.inv(&c)), key);
        prop_assert!(moved.contains(&ctx.conj(&g, &c)));
    }
}
