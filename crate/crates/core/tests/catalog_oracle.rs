//! The elementary abelian catalog against a closure-based oracle on small Sylow subgroups.

use std::collections::{BTreeMap, BTreeSet};

use endorank::groups::{build, GroupDescriptor};
use endorank::mat::Mat;
use endorank::matgroup::{GroupCtx, SubgroupKey, DEFAULT_ENUMERATION_BOUND};
use endorank::posetrank::catalog_elem_ab;
use endorank::sylow::sylow_subgroup;

fn is_elementary_abelian(ctx: &GroupCtx, elems: &[Mat], ell: u64) -> bool {
    elems.iter().all(|a| ctx.is_identity(&ctx.pow(a, ell)))
        && elems.iter().all(|a| elems.iter().all(|b| ctx.commute(a, b)))
}

/// Noncyclic elementary abelian subgroups, grown from pairs by adjoining one
/// element at a time and closing in the ambient group.
fn oracle(ctx: &GroupCtx, sylow: &[Mat], ell: u64) -> BTreeMap<SubgroupKey, u32> {
    let n = ctx.degree();
    let order_ell: Vec<Mat> = sylow.iter().copied().filter(|m| ctx.element_order(m) == ell).collect();
    let mut found: BTreeMap<SubgroupKey, u32> = BTreeMap::new();
    let mut layer: BTreeSet<Vec<Mat>> = BTreeSet::new();
    for (i, a) in order_ell.iter().enumerate() {
        for b in &order_ell[i + 1..] {
            let span = ctx.closure(&[*a, *b], 1 << 16).unwrap();
            if span.len() as u64 == ell * ell && is_elementary_abelian(ctx, &span, ell) {
                layer.insert(span);
            }
        }
    }
    let mut rank = 2;
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for span in &layer {
            found.insert(SubgroupKey::from_elements(n, span.clone()), rank);
            for c in &order_ell {
                if span.binary_search(c).is_ok() {
                    continue;
                }
                let mut gens = span.clone();
                gens.push(*c);
                let bigger = ctx.closure(&gens, 1 << 16).unwrap();
                if bigger.len() as u64 == ell.pow(rank + 1) && is_elementary_abelian(ctx, &bigger, ell) {
                    next.insert(bigger);
                }
            }
        }
        layer = next;
        rank += 1;
    }
    found
}

fn compare(name: &str, n: usize, q: u64, ell: u64) {
    let ctx = build(&GroupDescriptor::named(name, n, q).unwrap()).unwrap();
    let sylow = sylow_subgroup(&ctx, ell, DEFAULT_ENUMERATION_BOUND).unwrap();
    assert!(sylow.order() <= 81, "{name}_{n}({q}) Sylow order {}", sylow.order());
    let cat = catalog_elem_ab(&ctx, &sylow).unwrap();
    let expected = oracle(&ctx, &sylow.elements, ell);
    let got: BTreeMap<SubgroupKey, u32> = cat.keys.iter().cloned().zip(cat.members.iter().map(|m| m.rank)).collect();
    assert_eq!(got.len(), cat.len(), "{name}_{n}({q}): duplicate catalog keys");
    assert_eq!(got, expected, "{name}_{n}({q}) at {ell}");
    let keys: Vec<&SubgroupKey> = expected.keys().collect();
    let mut inclusions = 0;
    for a in &keys {
        for b in &keys {
            if a.len() < b.len() && a.is_subset_of(b) {
                inclusions += 1;
            }
        }
    }
    assert_eq!(cat.inclusions.len(), inclusions, "{name}_{n}({q}) inclusions");
}

#[test]
fn pgl3_4_at_3() {
    compare("PGL", 3, 4, 3);
}

#[test]
fn sl3_4_at_3() {
    compare("SL", 3, 4, 3);
}

#[test]
fn sl3_3_at_3() {
    compare("SL", 3, 3, 3);
}

#[test]
fn psl2_7_at_2() {
    compare("PSL", 2, 7, 2);
}

#[test]
fn sl2_5_at_2_is_empty() {
    compare("SL", 2, 5, 2);
}

#[test]
fn pgl2_9_at_2() {
    compare("PGL", 2, 9, 2);
}

#[test]
fn gl2_7_at_2() {
    compare("GL", 2, 7, 2);
}

#[test]
fn sp4_3_at_3() {
    compare("Sp", 4, 3, 3);
}

#[test]
fn gu3_2_at_3() {
    compare("GU", 3, 2, 3);
}

#[test]
fn su3_3_at_3() {
    compare("SU", 3, 3, 3);
}
