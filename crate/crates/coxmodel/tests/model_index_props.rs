mod common;

use common::*;
use coxmodel::char_ring::WeylType;
use coxmodel::model_index::{canonical_form, orbit, EquivalenceRelation, ModelIndex};

#[test]
fn dual_is_an_involution() {
    check_dual_involution(6).unwrap();
}

#[test]
fn bar_twists_by_sign_and_dual_keeps_the_character() {
    check_bar_and_dual_characters(5).unwrap();
}

#[test]
fn projections_commute_with_characters() {
    check_projection_commutation(5).unwrap();
}

#[test]
fn canonical_forms_are_orbit_invariants() {
    for (ty, max) in [(WeylType::A, 6), (WeylType::B, 5), (WeylType::D, 5)] {
        for n in index_ranks(ty, max) {
            for idx in indices(ty, n) {
                for rel in [EquivalenceRelation::Strong, EquivalenceRelation::Full] {
                    let c = canonical_form(&idx, rel).unwrap();
                    let members = orbit(&idx, rel).unwrap();
                    assert!(members.contains(&c), "{idx}: canonical form {c} outside its orbit");
                    for other in &members {
                        assert_eq!(canonical_form(other, rel).unwrap(), c, "{other} and {idx} disagree");
                    }
                }
            }
        }
    }
}

#[test]
fn json_round_trip() {
    for ty in [WeylType::A, WeylType::B, WeylType::D] {
        for idx in indices(ty, 4) {
            let encoded = serde_json::to_string(&idx).unwrap();
            let parsed: ModelIndex = encoded.parse().unwrap();
            assert_eq!(parsed, idx, "{encoded}");
        }
    }
}
