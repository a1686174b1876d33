//! Shared corpus for the integration tests and the acceptance suite.
#![allow(dead_code)]

pub mod oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segal_core::constructions::{
    building, nerve, oriented_graph, random_category, twisted_cyclic_nerve, Endofunctor, FiniteCategory, ZPlusPoset,
};
use segal_core::group::{small_groups, FiniteGroup};
use segal_core::pentagon::{enumerate_solutions, nerve_of_solution};
use segal_core::segal_check::suspension_left;
use segal_core::sset_core::standard_simplex;
use segal_core::{Bounds, TruncatedSimplicialSet};

pub const SEED: u64 = 0x5e6a_1201;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

pub fn bounds(level: usize) -> Bounds {
    Bounds::new(level).max_simplices(400_000)
}

pub fn diamond() -> FiniteCategory {
    // a < b, a < c, b < d, c < d
    let le = [
        [true, true, true, true],
        [false, true, false, true],
        [false, false, true, true],
        [false, false, false, true],
    ];
    FiniteCategory::from_poset(["a", "b", "c", "d"].map(String::from).to_vec(), &le.concat()).unwrap()
}

pub fn vee() -> FiniteCategory {
    let le = [[true, true, true], [false, true, false], [false, false, true]];
    FiniteCategory::from_poset(["o", "l", "r"].map(String::from).to_vec(), &le.concat()).unwrap()
}

/// The multiplicative monoid {1, 0}.
pub fn multiplicative_z2() -> FiniteCategory {
    FiniteCategory::from_monoid(vec!["1".into(), "0".into()], &[0, 1, 1, 1], 0).unwrap()
}

/// Self-maps of {0, 1}; `(f(0), f(1))` labels, `a;b` applies `a` first.
pub fn transformations_of_two() -> FiniteCategory {
    let maps = [[0u32, 1], [1, 0], [0, 0], [1, 1]];
    let labels = maps.iter().map(|f| format!("{}{}", f[0], f[1])).collect();
    let mut table = Vec::new();
    for a in &maps {
        for b in &maps {
            let ab = [b[a[0] as usize], b[a[1] as usize]];
            table.push(maps.iter().position(|m| *m == ab).unwrap() as u32);
        }
    }
    FiniteCategory::from_monoid(labels, &table, 0).unwrap()
}

/// At least 20 categories: ordinals, posets, all groups up to order 8 and
/// seeded random concrete categories.
pub fn categories() -> Vec<(String, FiniteCategory)> {
    let mut out: Vec<(String, FiniteCategory)> = (0..4).map(|k| (format!("ordinal-{k}"), FiniteCategory::ordinal(k))).collect();
    out.push(("poset-diamond".into(), diamond()));
    out.push(("poset-vee".into(), vee()));
    for g in small_groups(8) {
        out.push((format!("group-{}", g.name), FiniteCategory::from_group(&g)));
    }
    out.push(("monoid-mult-z2".into(), multiplicative_z2()));
    out.push(("monoid-maps-of-2".into(), transformations_of_two()));
    let mut r = rng(1);
    for i in 0..6 {
        out.push((format!("random-{i}"), random_category(&mut r, 5, 8)));
    }
    out
}

/// Twisted cyclic nerve inputs, including poset shifts with `F ≠ Id`.
pub fn cyclic_inputs() -> Vec<(String, FiniteCategory, Endofunctor)> {
    let mut out = Vec::new();
    for (name, c) in [
        ("group-Z2", FiniteCategory::from_group(&FiniteGroup::cyclic(2))),
        ("group-Z3", FiniteCategory::from_group(&FiniteGroup::cyclic(3))),
        ("group-S3", FiniteCategory::from_group(&FiniteGroup::symmetric(3))),
        ("monoid-mult-z2", multiplicative_z2()),
        ("monoid-maps-of-2", transformations_of_two()),
        ("ordinal-2", FiniteCategory::ordinal(2)),
        ("poset-diamond", diamond()),
    ] {
        let f = Endofunctor::identity(&c);
        out.push((name.to_string(), c, f));
    }
    for p in z_posets() {
        let (c, f) = p.1.to_category();
        out.push((format!("shifted-{}", p.0), c, f));
    }
    out
}

/// Finite Z₊-ordered posets: capped chains with several shifts.
pub fn z_posets() -> Vec<(String, ZPlusPoset)> {
    let mut out = Vec::new();
    for k in 1..=4 {
        for step in 1..=3 {
            if step <= k + 1 {
                out.push((format!("chain-{k}-step-{step}"), ZPlusPoset::capped_chain(k, step)));
            }
        }
    }
    let le = [
        [true, true, true, true],
        [false, true, false, true],
        [false, false, true, true],
        [false, false, false, true],
    ];
    let diamond = ZPlusPoset::new(["a", "b", "c", "d"].map(String::from).to_vec(), le.concat(), vec![1, 3, 3, 3]).unwrap();
    out.push(("diamond-up".into(), diamond));
    out
}

/// Constructed instances at truncation `level`, each named.
pub fn corpus(level: usize) -> Vec<(String, TruncatedSimplicialSet)> {
    let b = bounds(level);
    let mut out = Vec::new();
    for (name, c) in categories() {
        out.push((format!("nerve/{name}"), nerve(&c, b).unwrap()));
    }
    for (name, c, f) in cyclic_inputs() {
        out.push((format!("cyclic/{name}"), twisted_cyclic_nerve(&c, &f, b).unwrap()));
    }
    for (name, p) in z_posets().into_iter().take(6) {
        out.push((format!("building/{name}"), building(&p, b).unwrap()));
    }
    for n in 0..=3 {
        out.push((format!("simplex/{n}"), standard_simplex(n, b).unwrap()));
    }
    let verts: Vec<String> = ["u", "v", "w"].map(String::from).to_vec();
    let edges = vec![("a".to_string(), 0, 1), ("b".to_string(), 1, 2), ("c".to_string(), 0, 2)];
    out.push(("graph/triangle".into(), oriented_graph(&verts, &edges, b).unwrap()));
    for n in 1..=2 {
        for (i, sol) in enumerate_solutions(n, true).unwrap().into_iter().enumerate() {
            out.push((format!("pentagon/{n}-{i}"), nerve_of_solution(&sol, b).unwrap()));
        }
    }
    if level >= 1 {
        for (name, c) in [("Z2", FiniteCategory::from_group(&FiniteGroup::cyclic(2))), ("ordinal-1", FiniteCategory::ordinal(1))] {
            let x = nerve(&c, bounds(level - 1)).unwrap();
            out.push((format!("suspension/{name}"), suspension_left(&x).unwrap()));
        }
    }
    out
}

/// Remove one or two random simplices at a random level in `2..=3`, with
/// everything above them.
pub fn corrupt<R: Rng>(r: &mut R, x: &TruncatedSimplicialSet) -> Option<TruncatedSimplicialSet> {
    let n = r.gen_range(2..=3.min(x.truncation()));
    let size = x.level_size(n);
    if size < 2 {
        return None;
    }
    let k = r.gen_range(1..=2);
    let drop: Vec<u32> = (0..k).map(|_| r.gen_range(0..size as u32)).collect();
    let y = x.without_simplices(n, &drop).ok()?;
    (y.level_size(0) > 0 && y.level_size(1) > 0).then_some(y)
}

fn subgroup_by_label(g: &FiniteGroup, keep: impl Fn(&str) -> bool) -> Vec<usize> {
    let k: Vec<usize> = (0..g.order()).filter(|&x| keep(g.label(x))).collect();
    assert!(g.is_subgroup(&k), "{}", g.name);
    k
}

/// `(S3, S2)`, `(S4, S3)`, `(D4, Z/2)`, `(Z/4, Z/2)`; point stabilizers
/// for the symmetric groups and a reflection subgroup for `D4`.
pub fn hecke_pairs() -> Vec<(String, FiniteGroup, Vec<usize>)> {
    let s3 = FiniteGroup::symmetric(3);
    let s4 = FiniteGroup::symmetric(4);
    let d4 = FiniteGroup::dihedral(4);
    let z4 = FiniteGroup::cyclic(4);
    vec![
        ("(S3,S2)".into(), s3.clone(), subgroup_by_label(&s3, |l| l.ends_with('2'))),
        ("(S4,S3)".into(), s4.clone(), subgroup_by_label(&s4, |l| l.ends_with('3'))),
        ("(D4,Z2)".into(), d4.clone(), subgroup_by_label(&d4, |l| l == "0123" || l == "0321")),
        ("(Z4,Z2)".into(), z4.clone(), z4.generated(&[2])),
    ]
}

/// A finite `G`-set built from coset spaces `G/K_j` along a subgroup chain
/// `{e} ⊆ H ⊆ G`, with its action groupoid.
pub struct GSet {
    pub pieces: Vec<usize>,
    pub offsets: Vec<usize>,
    pub groupoid: segal_core::groupoids::FiniteGroupoid,
}

pub struct Chain {
    pub group: FiniteGroup,
    pub subgroups: [Vec<usize>; 3],
    pub cosets: [Vec<Vec<usize>>; 3],
}

impl Chain {
    pub fn random<R: Rng>(r: &mut R, max_order: usize) -> Chain {
        let groups = small_groups(max_order);
        let g = groups[r.gen_range(0..groups.len())].clone();
        let h = g.generated(&[r.gen_range(0..g.order())]);
        let subgroups = [vec![g.identity()], h, (0..g.order()).collect()];
        let cosets = [0, 1, 2].map(|j| g.left_cosets(&subgroups[j]).unwrap());
        Chain { group: g, subgroups, cosets }
    }

    pub fn gset(&self, pieces: Vec<usize>) -> GSet {
        let g = &self.group;
        let mut offsets = Vec::new();
        let mut labels = Vec::new();
        let mut total = 0;
        for (p, &j) in pieces.iter().enumerate() {
            offsets.push(total);
            total += self.cosets[j].len();
            labels.extend((0..self.cosets[j].len()).map(|c| format!("p{p}c{c}")));
        }
        let act: Vec<Vec<u32>> = (0..g.order())
            .map(|a| {
                pieces
                    .iter()
                    .zip(&offsets)
                    .flat_map(|(&j, &off)| {
                        let act = g.coset_action(&self.subgroups[j]).unwrap();
                        act[a].iter().map(move |&c| (off + c as usize) as u32).collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        let groupoid = segal_core::groupoids::action_groupoid(g, labels, act).unwrap();
        GSet { pieces, offsets, groupoid }
    }

    pub fn random_gset<R: Rng>(&self, r: &mut R, with_point: bool) -> GSet {
        let mut pieces: Vec<usize> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(0..3)).collect();
        if with_point {
            pieces.push(2);
        }
        self.gset(pieces)
    }

    /// The equivariant map sending piece `i` of `a` to `targets[i]` of `b`,
    /// `xK_i ↦ xK_j`, as a functor of action groupoids.
    pub fn functor(&self, a: &GSet, b: &GSet, targets: &[usize]) -> segal_core::groupoids::GroupoidFunctor {
        let g = &self.group;
        let na = a.groupoid.object_count();
        let nb = b.groupoid.object_count();
        let mut objects = vec![0u32; na];
        for (i, &ki) in a.pieces.iter().enumerate() {
            let kj = b.pieces[targets[i]];
            assert!(ki <= kj);
            for (c, coset) in self.cosets[ki].iter().enumerate() {
                let rep = coset[0];
                let d = self.cosets[kj].iter().position(|cs| cs.contains(&rep)).unwrap();
                objects[a.offsets[i] + c] = (b.offsets[targets[i]] + d) as u32;
            }
        }
        let morphisms = (0..g.order() * na).map(|m| (m / na * nb + objects[m % na] as usize) as u32).collect();
        segal_core::groupoids::GroupoidFunctor { objects, morphisms }
    }

    /// A random equivariant map `a → b`; `b` must contain a point piece.
    pub fn random_functor<R: Rng>(&self, r: &mut R, a: &GSet, b: &GSet) -> segal_core::groupoids::GroupoidFunctor {
        let targets: Vec<usize> = a
            .pieces
            .iter()
            .map(|&ki| {
                let ok: Vec<usize> = (0..b.pieces.len()).filter(|&t| b.pieces[t] >= ki).collect();
                ok[r.gen_range(0..ok.len())]
            })
            .collect();
        self.functor(a, b, &targets)
    }
}
