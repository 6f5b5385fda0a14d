mod common;

use common::*;
use coxmodel::oracle::{cached_group, GroupSpec};

#[test]
fn perfect_class_inventories() {
    check_inventories().unwrap();
}

#[test]
fn d4_has_eleven_perfect_classes() {
    assert_eq!(check_inventory(GroupSpec::SymD(4)).unwrap(), 11);
}

#[test]
fn degree_sums_and_square_root_norms() {
    check_fs_degree_identity(&oracle_groups()).unwrap();
}

#[test]
fn fpf_characters_of_d4() {
    check_d4_fpf_characters().unwrap();
}

#[test]
fn triality_characters_of_d4() {
    check_d4_triality_characters().unwrap();
}

#[test]
fn nonfactorizable_triples_are_not_multiplicity_free() {
    let a4 = check_nonfactorizable_not_mf(GroupSpec::SymA(4)).unwrap();
    let a6 = check_nonfactorizable_not_mf(GroupSpec::SymA(6)).unwrap();
    assert!(a4 > 0 && a6 > 0, "no component-swapping triples found ({a4}, {a6})");
    for spec in [GroupSpec::SymB(4), GroupSpec::SymD(4), GroupSpec::SymD(5)] {
        check_nonfactorizable_not_mf(spec).unwrap();
    }
}

#[test]
fn group_orders() {
    for spec in oracle_groups() {
        let g = cached_group(spec).unwrap();
        assert_eq!(g.order() as u64, spec.expected_order(), "{spec}");
    }
}
