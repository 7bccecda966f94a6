//! Classification against the transcribed defining-characteristic tables and
//! the worked examples of each branch.

use std::collections::BTreeMap;

use endorank::classify::{
    classify, defining_char_table, order_polynomial_divisibility, Associated, Descriptor, Isogeny, LieDescriptor,
    RootSystem::{self, *},
    Status,
};
use serde::Deserialize;

#[derive(Deserialize)]
struct Golden {
    primes: Vec<u64>,
    cells: Vec<GoldenCell>,
}

#[derive(Deserialize)]
struct GoldenCell {
    table: String,
    group: String,
    p: u64,
    rank: u32,
}

fn golden() -> Golden {
    serde_json::from_str(include_str!("golden/defining_char_tables.json")).unwrap()
}

fn rank(d: LieDescriptor, ell: u64) -> Option<u32> {
    classify(&Descriptor::Simple(d), ell).unwrap().tf_rank
}

fn lie(family: RootSystem, twist: u8, isogeny: Isogeny, q: u64) -> LieDescriptor {
    LieDescriptor::new(family, twist, isogeny, q)
}

#[test]
fn defining_char_tables_match_golden() {
    let g = golden();
    for &p in &g.primes {
        let want: BTreeMap<(String, String), u32> =
            g.cells.iter().filter(|c| c.p == p).map(|c| ((c.table.clone(), c.group.clone()), c.rank)).collect();
        let got: BTreeMap<(String, String), u32> =
            defining_char_table(p).unwrap().into_iter().map(|c| ((c.table, c.group), c.rank)).collect();
        assert_eq!(got, want, "p = {p}");
    }
}

#[test]
fn defining_char_generic_rows() {
    assert_eq!(rank(lie(A(2), 1, Isogeny::Sc, 9), 3), Some(1));
    assert_eq!(rank(lie(B(3), 1, Isogeny::Sc, 5), 5), Some(1));
    assert_eq!(rank(lie(A(1), 1, Isogeny::Sc, 25), 5), Some(1));
    assert_eq!(rank(LieDescriptor::sc(F4, 2), 2), Some(1));
}

#[test]
fn worked_examples() {
    assert_eq!(rank(lie(A(2), 1, Isogeny::Ad, 4), 3), Some(3));
    for iso in [Isogeny::Sc, Isogeny::Ad] {
        assert_eq!(rank(lie(D(4), 3, iso, 5), 3), Some(2));
    }
    assert_eq!(rank(lie(A(2), 2, Isogeny::Sc, 5), 5), Some(3));
    assert_eq!(rank(lie(A(1), 1, Isogeny::Sc, 7), 7), Some(0));
    assert_eq!(rank(LieDescriptor::sc(G2, 7), 7), Some(2));
    assert_eq!(rank(LieDescriptor::sc(A(2), 64).with_associated(Associated::Psl), 3), Some(4));
    assert_eq!(rank(lie(A(1), 1, Isogeny::Ad, 9), 2), Some(2));
}

#[test]
fn two_branch() {
    assert_eq!(rank(LieDescriptor::sc(A(1), 5), 2), Some(0));
    assert_eq!(rank(LieDescriptor::sc(A(1), 7).with_associated(Associated::Psl), 2), Some(2));
    assert_eq!(rank(LieDescriptor::sc(A(1), 17).with_associated(Associated::Psl), 2), Some(2));
    assert_eq!(rank(LieDescriptor::sc(A(1), 5).with_associated(Associated::Psl), 2), Some(1));
    assert_eq!(rank(LieDescriptor::sc(A(1), 11).with_associated(Associated::Psl), 2), Some(1));
    assert_eq!(rank(lie(A(1), 1, Isogeny::Ad, 5), 2), Some(2));
    assert_eq!(rank(LieDescriptor::sc(C(3), 5), 2), Some(1));
}

#[test]
fn odd_branch() {
    assert_eq!(rank(lie(A(2), 1, Isogeny::Ad, 7), 3), Some(3));
    assert_eq!(rank(lie(A(2), 2, Isogeny::Ad, 5), 3), Some(3));
    assert_eq!(rank(LieDescriptor::sc(A(2), 19).with_associated(Associated::Psl), 3), Some(4));
    assert_eq!(rank(lie(A(2), 2, Isogeny::Sc, 17).with_associated(Associated::Psl), 3), Some(4));
    assert_eq!(rank(LieDescriptor::sc(A(4), 11).with_associated(Associated::Psl), 5), Some(6));
    assert_eq!(rank(LieDescriptor::sc(A(2), 4), 3), Some(1));
    assert_eq!(rank(LieDescriptor::sc(A(1), 11).with_associated(Associated::Psl), 5), Some(0));
}

#[test]
fn small_q_is_flagged() {
    let r = classify(&lie(A(2), 2, Isogeny::Ad, 2).into(), 3).unwrap();
    assert_eq!(r.tf_rank, None);
    assert_eq!(r.status, Status::UnknownSmallQ);
    assert!(!r.is_clean());
}

#[test]
fn isomorphic_descriptors_agree() {
    for (q, ell) in [(5u64, 2u64), (7, 2), (9, 2), (7, 3), (11, 5), (7, 7), (8, 3), (13, 7)] {
        let sl = classify(&lie(A(1), 1, Isogeny::Sc, q).into(), ell).unwrap();
        let su = classify(&lie(A(1), 2, Isogeny::Sc, q).into(), ell).unwrap();
        assert_eq!(sl.tf_rank, su.tf_rank, "SL_2({q}) vs SU_2({q}) at {ell}");
        let pgl = classify(&lie(A(1), 1, Isogeny::Ad, q).into(), ell).unwrap();
        let pgu = classify(&lie(A(1), 2, Isogeny::Ad, q).into(), ell).unwrap();
        assert_eq!(pgl.tf_rank, pgu.tf_rank, "PGL_2({q}) vs PGU_2({q}) at {ell}");
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        for iso in [Isogeny::Sc, Isogeny::Ad] {
            assert_eq!(rank(lie(B(2), 1, iso, p), p), rank(lie(C(2), 1, iso, p), p), "B2 vs C2 at {p}");
        }
    }
}

#[test]
fn products() {
    let two = Descriptor::Product {
        product: vec![LieDescriptor::sc(A(1), 7).into(), LieDescriptor::sc(A(1), 4).into()],
        central: false,
    };
    assert_eq!(classify(&two, 3).unwrap().tf_rank, Some(1));
    let one = Descriptor::Product {
        product: vec![lie(A(2), 1, Isogeny::Ad, 4).into(), lie(B(2), 2, Isogeny::Sc, 8).into()],
        central: true,
    };
    let r = classify(&one, 3).unwrap();
    assert_eq!(r.tf_rank, Some(3));
    assert!(!r.caveats.is_empty());
}

#[test]
fn divisibility() {
    let sl2 = LieDescriptor::sc(A(1), 2);
    assert_eq!(order_polynomial_divisibility(&sl2.clone().into(), 7).unwrap(), (false, 0));
    assert!(classify(&sl2.into(), 7).is_err());
    let gl34 = LieDescriptor::sc(A(2), 4).with_associated(Associated::Section { h_index: 3, j_order: 1 });
    assert_eq!(order_polynomial_divisibility(&gl34.into(), 3).unwrap(), (true, 4));
}
