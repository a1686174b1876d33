//! Brute-force oracles shared by the oracle tests and the acceptance suite.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use segal_core::constructions::FiniteCategory;

/// Triples `(α, β, γ)` with `αβγ = βγα = γαβ = w` (juxtaposition is the
/// composite, right factor first); faces `∂_0 = (γα, β)`, `∂_1 = (α, βγ)`,
/// `∂_2 = (αβ, γ)`; `1_{∂_2} * 1_{∂_0}` gains `1_{∂_1}`.
pub fn triple_table(m: &FiniteCategory, w: u32) -> BTreeMap<(String, String, String), i64> {
    let n = m.morphisms().len() as u32;
    let jux = |a: u32, b: u32| m.compose(b, a).unwrap();
    let name = |a: u32, b: u32| format!("({},{})", m.morphism(a).label, m.morphism(b).label);
    let mut out = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let abc = jux(jux(a, b), c);
                if abc == w && jux(jux(b, c), a) == w && jux(jux(c, a), b) == w {
                    let d0 = name(jux(c, a), b);
                    let d1 = name(a, jux(b, c));
                    let d2 = name(jux(a, b), c);
                    *out.entry((d2, d0, d1)).or_insert(0) += 1;
                }
            }
        }
    }
    out
}

/// Pointed subsets of a pointed set with `c` non-base points, enumerated
/// as vectors of membership flags.
pub fn subsets_of_size(c: usize, a: usize) -> u64 {
    fn go(i: usize, c: usize, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        if i == c {
            return 0;
        }
        go(i + 1, c, left - 1) + go(i + 1, c, left)
    }
    go(0, c, a)
}

/// Distinct spans of `a`-tuples of vectors in `F_q^n`, kept when the span
/// has `q^a` elements.
pub fn subspaces_by_spans(q: u32, n: usize, a: usize) -> u64 {
    let vectors: Vec<Vec<u32>> = (0..q.pow(n as u32))
        .map(|mut code| (0..n).map(|_| { let d = code % q; code /= q; d }).collect())
        .collect();
    let span = |gens: &[&Vec<u32>]| -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        for mut code in 0..q.pow(gens.len() as u32) {
            let mut v = vec![0u32; n];
            for g in gens {
                let coef = code % q;
                code /= q;
                for (vi, gi) in v.iter_mut().zip(g.iter()) {
                    *vi = (*vi + coef * gi) % q;
                }
            }
            out.insert(v);
        }
        out
    };
    let mut seen: HashSet<BTreeSet<Vec<u32>>> = HashSet::new();
    let mut idx = vec![0usize; a];
    loop {
        let gens: Vec<&Vec<u32>> = idx.iter().map(|&i| &vectors[i]).collect();
        let s = span(&gens);
        if s.len() == q.pow(a as u32) as usize {
            seen.insert(s);
        }
        let mut k = 0;
        loop {
            if k == a {
                return seen.len() as u64;
            }
            idx[k] += 1;
            if idx[k] < vectors.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

