//! Properties of membranes, triangulations and the Segal verdicts over the
//! shared corpus and seeded corruptions.

mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use segal_core::constructions::oriented_graph;
use segal_core::polygeom::{enumerate_subdivisions, enumerate_triangulations, PlaneTree, PolygonalSubdivision};
use segal_core::segal_check::{is_1segal, is_2segal, path_criterion_crosscheck, Strategy as Triangulations};
use segal_core::sset_core::{membrane_count, membrane_set, product, quotient_by_free_action, segal_map, LevelAction};
use segal_core::{IndexCollection, TruncatedSimplicialSet};

fn corpus_with_corruptions(level: usize, salt: u64) -> Vec<(String, TruncatedSimplicialSet)> {
    let mut out = common::corpus(level);
    let mut r = common::rng(salt);
    let extra: Vec<_> = out.iter().filter_map(|(n, x)| common::corrupt(&mut r, x).map(|y| (format!("{n}/corrupt"), y))).collect();
    out.extend(extra);
    out
}

#[test]
fn full_collection_segal_map_is_identity() {
    for (name, x) in common::corpus(3) {
        for n in 0..=3 {
            let m = segal_map(&x, &IndexCollection::full(n)).unwrap();
            assert!(m.is_bijective(), "{name} n={n}");
        }
    }
}

/// `|X_{I∪J}| = Σ_m |fiber_I(m)|·|fiber_J(m)|` over membranes `m` of `I⋒J`.
fn union_is_fiber_product(x: &TruncatedSimplicialSet, i: &IndexCollection, j: &IndexCollection) {
    let both = i.intersections(j).unwrap();
    let key = |ms: &segal_core::sset_core::MembraneSet| -> HashMap<Vec<u32>, u128> {
        let mut h = HashMap::new();
        let bmax = both.maximal();
        for m in &ms.membranes {
            let k: Vec<u32> = bmax.iter().map(|s| m.value_at(x, &ms.maximal, s).unwrap()).collect();
            *h.entry(k).or_insert(0) += 1;
        }
        h
    };
    let (a, b) = (key(&membrane_set(x, i).unwrap()), key(&membrane_set(x, j).unwrap()));
    let expect: u128 = a.iter().map(|(k, n)| n * b.get(k).copied().unwrap_or(0)).sum();
    assert_eq!(membrane_count(x, &i.union(j).unwrap()).unwrap(), expect);
}

fn arb_collection(n: usize) -> impl Strategy<Value = IndexCollection> {
    prop::collection::vec(prop::collection::btree_set(0..=n, 1..=n.min(3)), 1..=3)
        .prop_map(move |ms| IndexCollection::new(n, ms.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn membranes_of_unions(idx in 0usize..40, i in arb_collection(4), j in arb_collection(4)) {
        let corpus: Vec<_> = common::corpus(4).into_iter().filter(|(_, x)| x.total_simplices() < 3_000).collect();
        let (_, x) = &corpus[idx % corpus.len()];
        prop_assume!(i.intersections(&j).is_ok_and(|b| !b.members().is_empty()));
        union_is_fiber_product(x, &i, &j);
    }
}

#[test]
fn products_validate() {
    let small: Vec<_> = common::corpus(3).into_iter().filter(|(_, x)| x.total_simplices() < 200).collect();
    for (a, x) in small.iter().take(8) {
        for (b, y) in small.iter().take(8) {
            if x.kind() != y.kind() {
                continue;
            }
            let p = product(x, y).unwrap();
            assert!(p.validate().is_empty(), "{a} x {b}");
            assert_eq!(p.level_size(2), x.level_size(2) * y.level_size(2));
        }
    }
}

#[test]
fn quotient_of_rotated_cycle_validates() {
    // the oriented n-cycle modulo rotation is a loop
    for n in 2..=4u32 {
        let verts: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, u32, u32)> = (0..n).map(|i| (format!("e{i}"), i, (i + 1) % n)).collect();
        let x = oriented_graph(&verts, &edges, 3).unwrap();
        // rotation on labels: v{i} ↦ v{i+1}, e{i}@k ↦ e{i+1}@k
        let rotate = |l: &str| -> String {
            l.split(',')
                .map(|part| {
                    let (head, rest) = part.split_at(1);
                    let (i, tail) = rest.split_once('@').map_or((rest, String::new()), |(i, k)| (i, format!("@{k}")));
                    format!("{head}{}{tail}", (i.parse::<u32>().unwrap() + 1) % n)
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        let one_step: Vec<Vec<u32>> =
            (0..=3).map(|m| x.labels(m).iter().map(|l| x.index_of(m, &rotate(l)).unwrap()).collect()).collect();
        let mut perms = vec![(0..=3).map(|m| (0..x.level_size(m) as u32).collect::<Vec<u32>>()).collect::<Vec<_>>()];
        for _ in 1..n {
            let prev = perms.last().unwrap().clone();
            perms.push((0..=3).map(|m| prev[m].iter().map(|&s| one_step[m][s as usize]).collect()).collect());
        }
        let q = quotient_by_free_action(&x, &LevelAction { perms, identity: 0 }).unwrap();
        assert!(q.validate().is_empty());
        assert_eq!(q.level_sizes(), vec![1, 2, 3, 4]);
    }
}

#[test]
fn triangulations_are_maximal_and_dual_trees_biject() {
    for n in 2..=7 {
        let ts = enumerate_triangulations(n).unwrap();
        let trees: Vec<PlaneTree> = ts.iter().map(|t| t.dual_tree()).collect();
        let all = PlaneTree::all(n);
        assert_eq!(trees.len(), all.len());
        for t in &all {
            assert_eq!(trees.iter().filter(|u| *u == t).count(), 1, "n={n}");
        }
        let subs = enumerate_subdivisions(n).unwrap();
        let trivial = PolygonalSubdivision::trivial(n);
        for t in &ts {
            let p = PolygonalSubdivision::from(t);
            assert!(p.refines(&trivial));
            // nothing strictly finer
            assert!(subs.iter().all(|s| s == &p || !s.refines(&p)), "n={n}");
        }
    }
}

#[test]
fn strategies_agree_and_one_segal_implies_two() {
    for (name, x) in corpus_with_corruptions(5, 21) {
        let a = is_2segal(&x, 5, Triangulations::AllTriangulations).unwrap();
        let b = is_2segal(&x, 5, Triangulations::BoundaryPairs).unwrap();
        assert_eq!(a.holds, b.holds, "{name}");
        if is_1segal(&x, 5).unwrap().holds {
            assert!(a.holds, "{name}");
        }
    }
}

#[test]
fn path_criterion_on_corpus() {
    let cases = corpus_with_corruptions(5, 33);
    assert!(cases.len() >= 60);
    for (name, x) in &cases {
        let r = path_criterion_crosscheck(x, 4).unwrap();
        assert!(r.agree, "{name}");
    }
}

#[test]
fn changes_of_triangulation_compose() {
    // f_{T''} ∘ f_{T'}^{-1} ∘ f_{T'} ∘ f_T^{-1} = f_{T''} ∘ f_T^{-1} on the pentagon
    for (name, x) in common::corpus(4) {
        if !is_2segal(&x, 4, Triangulations::AllTriangulations).unwrap().holds {
            continue;
        }
        let ts = enumerate_triangulations(4).unwrap();
        assert_eq!(ts.len(), 5);
        let maps: Vec<_> = ts.iter().map(|t| segal_map(&x, &t.to_collection()).unwrap()).collect();
        let inverse: Vec<HashMap<Vec<u32>, usize>> =
            maps.iter().map(|m| m.images.iter().enumerate().map(|(s, img)| (img.values.clone(), s)).collect()).collect();
        let change = |a: usize, b: usize, v: &Vec<u32>| -> Vec<u32> { maps[b].images[inverse[a][v]].values.clone() };
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    for m in &maps[a].images {
                        let via = change(b, c, &change(a, b, &m.values));
                        assert_eq!(via, change(a, c, &m.values), "{name}");
                    }
                }
            }
        }
    }
}
