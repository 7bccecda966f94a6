//! Witness identities over every admissible (l, q) with q <= 64, and the
//! Borel-torus class counts against the classification.

use endorank::arith::prime_power;
use endorank::classify::{classify, Isogeny, LieDescriptor, RootSystem};
use endorank::witnesses::{
    borel_orbit_count, build_witness_defchar, build_witness_gl, build_witness_sl, cube_coset_count,
    unitary_borel_orbit_count, DefCharVariant,
};

fn admissible(ell: u64) -> Vec<u64> {
    (2..=64).filter(|&q| prime_power(q).is_some() && (q - 1) % ell == 0).collect()
}

#[test]
fn admissible_orders() {
    assert_eq!(admissible(3), vec![4, 7, 13, 16, 19, 25, 31, 37, 43, 49, 61, 64]);
    assert_eq!(admissible(5), vec![11, 16, 31, 41, 61]);
}

#[test]
fn sl_identities_hold() {
    for ell in [3, 5] {
        for q in admissible(ell) {
            let w = build_witness_sl(ell, q).unwrap_or_else(|e| panic!("({ell}, {q}): {e}"));
            assert!(w.checks.all_hold(), "({ell}, {q}): {:?}", w.checks.failures());
        }
    }
}

#[test]
fn gl_identities_hold() {
    for ell in [3, 5] {
        for q in admissible(ell) {
            let w = build_witness_gl(ell, q).unwrap_or_else(|e| panic!("({ell}, {q}): {e}"));
            assert!(w.checks.all_hold(), "({ell}, {q}): {:?}", w.checks.failures());
        }
    }
}

#[test]
fn gl_witnesses_are_pairwise_nonconjugate() {
    for q in [4, 7] {
        assert_eq!(build_witness_gl(3, q).unwrap().pairwise_nonconjugate(2_000_000), Some(true), "q = {q}");
    }
}

#[test]
fn sl_witnesses_for_q_19_are_distinct_and_budgeted() {
    let w = build_witness_sl(3, 19).unwrap();
    assert_eq!(w.subgroups.len(), 3);
    assert!(w.checks.0.iter().any(|c| c.name == "E_i are pairwise distinct" && c.holds));
    assert_eq!(w.pairwise_nonconjugate(10_000), None);
}

#[test]
fn rejects_inadmissible_pairs() {
    assert!(build_witness_gl(3, 5).is_err());
    assert!(build_witness_sl(5, 7).is_err());
}

#[test]
fn defining_char_witnesses() {
    for p in [2, 3, 5, 7] {
        let w = build_witness_defchar(p, DefCharVariant::Linear).unwrap();
        assert!(w.checks.all_hold(), "linear {p}: {:?}", w.checks.failures());
        assert_eq!(w.maximal_in_u, if p == 2 { 2 } else { p as usize + 1 });
    }
    for p in [3, 5, 7] {
        let w = build_witness_defchar(p, DefCharVariant::Unitary).unwrap();
        assert!(w.checks.all_hold(), "unitary {p}: {:?}", w.checks.failures());
        assert_eq!(w.maximal_in_u, p as usize + 1);
    }
}

#[test]
fn borel_counts_match_classification() {
    for p in [3u64, 5, 7, 11, 13] {
        let sc = classify(&LieDescriptor::sc(RootSystem::A(2), p).into(), p).unwrap().tf_rank;
        let ad = classify(&LieDescriptor::new(RootSystem::A(2), 1, Isogeny::Ad, p).into(), p).unwrap().tf_rank;
        assert_eq!(Some(borel_orbit_count(p, 1).unwrap() as u32), sc, "SL_3({p})");
        assert_eq!(Some(borel_orbit_count(p, p - 1).unwrap() as u32), ad, "PGL_3({p})");
        assert_eq!(cube_coset_count(p).unwrap(), if p % 3 == 1 { 3 } else { 1 });
    }
    for p in [3u64, 5, 7, 11] {
        let sc = classify(&LieDescriptor::new(RootSystem::A(2), 2, Isogeny::Sc, p).into(), p).unwrap().tf_rank;
        let ad = classify(&LieDescriptor::new(RootSystem::A(2), 2, Isogeny::Ad, p).into(), p).unwrap().tf_rank;
        assert_eq!(Some(unitary_borel_orbit_count(p, 1).unwrap() as u32), sc, "SU_3({p})");
        assert_eq!(Some(unitary_borel_orbit_count(p, p + 1).unwrap() as u32), ad, "PGU_3({p})");
    }
}
