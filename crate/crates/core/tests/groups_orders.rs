use endorank::groups::{build, exact_order, Family, GroupDescriptor, HermitianChoice};
use endorank::matgroup::{enumerate_elements, CentralSpec, CyclicSubgroup};
use endorank::sylow::sylow_subgroup;
use num_bigint::BigUint;

fn named(name: &str, n: usize, q: u64) -> GroupDescriptor {
    GroupDescriptor::named(name, n, q).unwrap()
}

fn check_enumeration(d: &GroupDescriptor, bound: u64) {
    let ctx = build(d).unwrap();
    let elems = enumerate_elements(&ctx, bound).unwrap();
    assert_eq!(BigUint::from(elems.len()), exact_order(d).unwrap(), "{}", d.display_name());
    let form = ctx.form();
    for g in ctx.generators() {
        if let Some(f) = form {
            assert!(f.preserves(g, ctx.field()));
        }
    }
}

#[test]
fn linear_groups_enumerate_to_their_order() {
    for (name, n, q) in [
        ("SL", 2, 3),
        ("SL", 2, 5),
        ("GL", 2, 4),
        ("PSL", 2, 7),
        ("PSL", 2, 5),
        ("PGL", 2, 5),
        ("PGL", 2, 9),
        ("SL", 3, 2),
        ("SL", 3, 3),
        ("PSL", 3, 4),
        ("PGL", 3, 4),
        ("SL", 3, 4),
        ("GL", 3, 3),
        ("SL", 4, 2),
    ] {
        check_enumeration(&named(name, n, q), 300_000);
    }
}

#[test]
fn unitary_and_symplectic_groups_enumerate_to_their_order() {
    for (name, n, q) in [
        ("SU", 2, 3),
        ("GU", 2, 3),
        ("SU", 3, 2),
        ("GU", 3, 2),
        ("PSU", 3, 3),
        ("SU", 3, 3),
        ("GU", 3, 3),
        ("PGU", 3, 4),
        ("Sp", 2, 5),
        ("Sp", 4, 2),
        ("Sp", 4, 3),
        ("PSp", 4, 3),
    ] {
        check_enumeration(&named(name, n, q), 300_000);
    }
    let mut anti = named("SU", 3, 3);
    anti.hermitian_form = HermitianChoice::Antidiagonal;
    check_enumeration(&anti, 300_000);
}

#[test]
fn associated_groups_between_sl_and_gl() {
    // det subgroup of order 1 modulo the cube roots of unity: PSL_3(4)
    let mut d = GroupDescriptor::new(Family::GL, 3, 4);
    d.det_subgroup = Some(CyclicSubgroup::Order(1));
    d.quotient = CentralSpec::Scalars(CyclicSubgroup::Order(3));
    check_enumeration(&d, 300_000);
    // SL_2(7) <= H <= GL_2(7) with det in {1, -1}, modulo its scalars
    let mut h = GroupDescriptor::new(Family::GL, 2, 7);
    h.det_subgroup = Some(CyclicSubgroup::Order(2));
    h.quotient = CentralSpec::AllScalars;
    check_enumeration(&h, 300_000);
    // scalars outside the group are rejected
    let mut bad = GroupDescriptor::new(Family::SL, 2, 7);
    bad.quotient = CentralSpec::Scalars(CyclicSubgroup::Order(3));
    assert!(build(&bad).is_err());
}

#[test]
fn sylow_orders_match_ell_parts() {
    for (name, n, q, ell, size, provider) in [
        ("PGL", 3, 4, 3, 27, "wreath-linear"),
        ("GL", 3, 4, 3, 81, "wreath-linear"),
        ("SL", 3, 4, 3, 27, "wreath-linear"),
        ("SL", 3, 3, 3, 27, "unitriangular"),
        ("SL", 2, 5, 2, 8, "greedy"),
        ("PSL", 2, 7, 2, 8, "greedy"),
        ("PSU", 3, 8, 3, 81, "wreath-unitary"),
        ("SU", 3, 8, 3, 243, "wreath-unitary"),
        ("SU", 3, 5, 5, 125, "unitriangular"),
        ("PGU", 3, 5, 5, 125, "unitriangular"),
        ("Sp", 4, 5, 5, 625, "unitriangular"),
        ("Sp", 4, 3, 3, 81, "unitriangular"),
        ("PGL", 3, 7, 7, 343, "unitriangular"),
    ] {
        let ctx = build(&named(name, n, q)).unwrap();
        let s = sylow_subgroup(&ctx, ell, 200_000).unwrap();
        assert_eq!(s.order(), size, "{name}_{n}({q})");
        assert_eq!(s.provider, provider);
    }
}

#[test]
fn quaternion_sylow_of_sl2_5() {
    let ctx = build(&named("SL", 2, 5)).unwrap();
    let s = sylow_subgroup(&ctx, 2, 200_000).unwrap();
    let involutions = s.elements.iter().filter(|g| ctx.element_order(g) == 2).count();
    assert_eq!(involutions, 1);
}
