//! Pentagon solutions, their nerves, and the rational cluster map.

mod common;

use num_traits::One;
use proptest::prelude::*;
use segal_core::constructions::{nerve, nerve_semicategory, FiniteCategory, FiniteSemicategory};
use segal_core::group::small_groups;
use segal_core::pentagon::{
    cluster_alpha, cluster_alpha_inverse, derived_operations, enumerate_solutions, extract_solution, group_solution,
    mirrored_pentagon_sides, nerve_of_solution, pentagon_sides, verify_pentagon, PentagonSolution, RationalClusterPoint,
};
use segal_core::segal_check::{is_1segal, is_2segal, path_space_initial, suspension_left, Strategy as Triangulations};
use segal_core::sset_core::find_isomorphism;
use segal_core::Rational;

fn all_solutions() -> Vec<PentagonSolution> {
    (1..=3).flat_map(|n| enumerate_solutions(n, false).unwrap()).collect()
}

#[test]
fn nerves_extract_back() {
    for sol in all_solutions() {
        let x = nerve_of_solution(&sol, 5).unwrap();
        assert!(is_2segal(&x, 5, Triangulations::AllTriangulations).unwrap().holds, "{sol}");
        let back = extract_solution(&x).unwrap();
        assert_eq!(back.table(), sol.table());
        assert!(derived_operations(&sol).all_hold(), "{sol}");
    }
}

#[test]
fn initial_path_space_is_the_dot_nerve() {
    for sol in all_solutions() {
        let x = nerve_of_solution(&sol, 5).unwrap();
        let p = path_space_initial(&x).unwrap();
        assert!(is_1segal(&p, 4).unwrap().holds, "{sol}");
        let ops = derived_operations(&sol);
        let semi = FiniteSemicategory::from_semigroup(sol.carrier().to_vec(), &ops.dot).unwrap();
        let y = nerve_semicategory(&semi, 4).unwrap();
        assert!(find_isomorphism(&p, &y).is_some(), "{sol}");
    }
}

#[test]
fn group_solutions_from_suspended_nerves() {
    for g in small_groups(8) {
        let sol = group_solution(&g);
        assert!(verify_pentagon(g.order(), sol.table()).unwrap().holds, "{}", g.name);
        if g.order() <= 4 {
            let x = suspension_left(&nerve(&FiniteCategory::from_group(&g), 3).unwrap()).unwrap();
            let back = extract_solution(&x).unwrap();
            assert_eq!(back.reordered(sol.carrier()).unwrap().table(), sol.table(), "{}", g.name);
        }
    }
}

#[test]
fn solutions_roundtrip_json() {
    for sol in all_solutions() {
        assert_eq!(PentagonSolution::from_json(&sol.to_json()).unwrap(), sol);
    }
}

fn arb_point() -> impl Strategy<Value = RationalClusterPoint> {
    (1i64..50, 1i64..50, 1i64..50, 1i64..50).prop_map(|(a, b, c, d)| RationalClusterPoint::from_ints(a, b, c, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cluster_map_pentagon(x in arb_point(), y in arb_point(), z in arb_point()) {
        let (l, r) = mirrored_pentagon_sides(|a, b| cluster_alpha(a, b), &x, &y, &z);
        prop_assert_eq!(l, r);
        let (l, r) = pentagon_sides(|a, b| cluster_alpha_inverse(a, b), &x, &y, &z);
        prop_assert_eq!(l, r);
        let (a, b) = cluster_alpha(&x, &y);
        prop_assert_eq!(cluster_alpha_inverse(&a, &b), (x.clone(), y.clone()));
        // μ' = λ·μ as lower-triangular matrices
        prop_assert_eq!(b, x.matrix_product(&y));
    }

    #[test]
    fn relabeled_solutions_still_verify(n in 1usize..=3, pick in 0usize..8, rot in 0usize..3) {
        let sols = enumerate_solutions(n, false).unwrap();
        let sol = &sols[pick % sols.len()];
        let mut order = sol.carrier().to_vec();
        order.rotate_left(rot % n);
        let r = sol.reordered(&order).unwrap();
        prop_assert!(verify_pentagon(n, r.table()).unwrap().holds);
    }
}

#[test]
fn cluster_sample() {
    let one = RationalClusterPoint::from_ints(1, 1, 1, 1).unwrap();
    let (a, b) = cluster_alpha(&one, &one);
    assert_eq!(a, RationalClusterPoint::from_ints(1, 2, 1, 2).unwrap());
    assert_eq!(b, RationalClusterPoint::new(Rational::one(), Rational::from_integer(2.into())).unwrap());
}
