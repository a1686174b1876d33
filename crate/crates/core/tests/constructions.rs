//! Nerves, twisted cyclic nerves, buildings and free categories.

mod common;

use proptest::prelude::*;
use segal_core::constructions::{
    building, building_to_cyclic_nerve, free_category, nerve, random_category, twisted_cyclic_nerve, FiniteCategory,
};
use segal_core::segal_check::{is_1segal, is_2segal, is_unital, Strategy as Triangulations};
use segal_core::sset_core::{find_isomorphism, membrane_count};
use segal_core::IndexCollection;

#[test]
fn nerves_are_segal_and_unital() {
    for (name, c) in common::categories() {
        let x = nerve(&c, common::bounds(4)).unwrap();
        assert!(is_1segal(&x, 4).unwrap().holds, "{name}");
        assert!(is_2segal(&x, 4, Triangulations::AllTriangulations).unwrap().holds, "{name}");
        assert!(is_unital(&x, 4).unwrap().holds, "{name}");
    }
}

#[test]
fn cyclic_nerves_are_2segal_and_1segal_exactly_when_counts_match() {
    let mut failing = 0;
    for (name, c, f) in common::cyclic_inputs() {
        let x = twisted_cyclic_nerve(&c, &f, 4).unwrap();
        assert!(is_2segal(&x, 4, Triangulations::AllTriangulations).unwrap().holds, "{name}");
        let spine = membrane_count(&x, &IndexCollection::intervals(2)).unwrap();
        let one = is_1segal(&x, 4).unwrap();
        if spine != x.level_size(2) as u128 {
            assert!(!one.holds, "{name}");
            assert!(!one.witnesses.is_empty());
            failing += 1;
        }
    }
    assert!(failing >= 1);
}

#[test]
fn buildings_match_cyclic_nerves() {
    for (name, p) in common::z_posets() {
        let b = building(&p, 4).unwrap();
        let (c, f) = p.to_category();
        let x = twisted_cyclic_nerve(&c, &f, 4).unwrap();
        let m = building_to_cyclic_nerve(&p, &b, &x).unwrap();
        assert!(m.is_isomorphism(&b, &x), "{name}");
        assert!(find_isomorphism(&b, &x).is_some(), "{name}");
        assert!(is_2segal(&b, 4, Triangulations::AllTriangulations).unwrap().holds, "{name}");
    }
}

#[test]
fn free_category_of_nerve_is_the_category() {
    for (name, c) in common::categories() {
        let d = free_category(&nerve(&c, 2).unwrap(), 1_000).unwrap();
        assert!(d.find_isomorphism(&c).is_some(), "{name}");
    }
}

#[test]
fn categories_roundtrip_through_json() {
    for (name, c) in common::categories() {
        let v = serde_json::to_string(&c.to_json_value()).unwrap();
        let back = FiniteCategory::from_json_value(&serde_json::from_str(&v).unwrap()).unwrap();
        assert_eq!(back.to_json_value(), c.to_json_value(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_nerves(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = random_category(&mut r, 4, 10);
        let x = nerve(&c, common::bounds(4)).unwrap();
        prop_assert!(x.validate().is_empty());
        prop_assert!(is_1segal(&x, 4).unwrap().holds);
        prop_assert!(is_2segal(&x, 4, Triangulations::BoundaryPairs).unwrap().holds);
        prop_assert!(is_unital(&x, 4).unwrap().holds);
        let f = segal_core::constructions::Endofunctor::identity(&c);
        let y = twisted_cyclic_nerve(&c, &f, 4).unwrap();
        prop_assert!(is_2segal(&y, 4, Triangulations::AllTriangulations).unwrap().holds);
    }
}
