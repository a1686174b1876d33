use std::collections::HashMap;

use super::{Budget, Kind, TruncatedSimplicialSet};
use crate::error::{Error, Result};

/// Levelwise maps `f_n: X_n → Y_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMorphism {
    pub components: Vec<Vec<u32>>,
}

impl SimplicialMorphism {
    pub fn identity(x: &TruncatedSimplicialSet) -> Self {
        SimplicialMorphism { components: (0..=x.truncation()).map(|n| (0..x.level_size(n) as u32).collect()).collect() }
    }

    /// Check totality and commutation with faces and (when both sides have
    /// them) degeneracies. Returns the first offending (level, element).
    pub fn check(&self, src: &TruncatedSimplicialSet, tgt: &TruncatedSimplicialSet) -> Result<()> {
        let top = src.truncation();
        if tgt.truncation() != top || self.components.len() != top + 1 {
            return Err(Error::Mismatch("truncation levels differ".into()));
        }
        for n in 0..=top {
            let f = &self.components[n];
            if f.len() != src.level_size(n) || f.iter().any(|&y| y as usize >= tgt.level_size(n)) {
                return Err(Error::Structural(format!("component {n} is not a total map")));
            }
            for x in 0..src.level_size(n) as u32 {
                if n > 0 {
                    for i in 0..=n {
                        if self.components[n - 1][src.face(n, i, x) as usize] != tgt.face(n, i, f[x as usize]) {
                            return Err(Error::Mismatch(format!("d{i} not preserved at level {n}, element {}", src.label(n, x))));
                        }
                    }
                }
                if n < top && src.is_simplicial() && tgt.is_simplicial() {
                    for i in 0..=n {
                        let a = self.components[n + 1][src.degeneracy(n, i, x).unwrap() as usize];
                        if Some(a) != tgt.degeneracy(n, i, f[x as usize]) {
                            return Err(Error::Mismatch(format!("s{i} not preserved at level {n}, element {}", src.label(n, x))));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_isomorphism(&self, src: &TruncatedSimplicialSet, tgt: &TruncatedSimplicialSet) -> bool {
        self.check(src, tgt).is_ok()
            && self.components.iter().enumerate().all(|(n, f)| {
                let mut seen = vec![false; tgt.level_size(n)];
                f.len() == tgt.level_size(n) && f.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
            })
    }
}

/// Search for an isomorphism by backtracking on vertices; higher simplices
/// are matched through their face tuples. Meant for small test instances.
pub fn find_isomorphism(x: &TruncatedSimplicialSet, y: &TruncatedSimplicialSet) -> Option<SimplicialMorphism> {
    if x.kind() != y.kind() || x.level_sizes() != y.level_sizes() {
        return None;
    }
    let top = x.truncation();
    // Y_n indexed by face tuples.
    let by_faces: Vec<HashMap<Vec<u32>, Vec<u32>>> = (0..=top)
        .map(|n| {
            let mut m: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
            if n > 0 {
                for e in 0..y.level_size(n) as u32 {
                    m.entry((0..=n).map(|i| y.face(n, i, e)).collect()).or_default().push(e);
                }
            }
            m
        })
        .collect();
    let order: Vec<(usize, u32)> = (0..=top).flat_map(|n| (0..x.level_size(n) as u32).map(move |e| (n, e))).collect();
    let mut comp: Vec<Vec<Option<u32>>> = (0..=top).map(|n| vec![None; x.level_size(n)]).collect();
    let mut used: Vec<Vec<bool>> = (0..=top).map(|n| vec![false; y.level_size(n)]).collect();
    let mut budget = 2_000_000usize;

    fn rec(
        pos: usize,
        order: &[(usize, u32)],
        x: &TruncatedSimplicialSet,
        y: &TruncatedSimplicialSet,
        by_faces: &[HashMap<Vec<u32>, Vec<u32>>],
        comp: &mut Vec<Vec<Option<u32>>>,
        used: &mut Vec<Vec<bool>>,
        budget: &mut usize,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let Some(&(n, e)) = order.get(pos) else {
            return true;
        };
        let cands: Vec<u32> = if n == 0 {
            (0..y.level_size(0) as u32).collect()
        } else {
            let key: Vec<u32> = (0..=n).map(|i| comp[n - 1][x.face(n, i, e) as usize].expect("lower level assigned")).collect();
            by_faces[n].get(&key).cloned().unwrap_or_default()
        };
        for c in cands {
            if used[n][c as usize] {
                continue;
            }
            if n > 0 && x.is_simplicial() {
                // degeneracies landing on level n are checked once both ends are set
                let ok = (0..n).all(|i| {
                    (0..x.level_size(n - 1) as u32).all(|z| {
                        x.degeneracy(n - 1, i, z).unwrap() != e
                            || y.degeneracy(n - 1, i, comp[n - 1][z as usize].unwrap()) == Some(c)
                    })
                });
                if !ok {
                    continue;
                }
            }
            comp[n][e as usize] = Some(c);
            used[n][c as usize] = true;
            if rec(pos + 1, order, x, y, by_faces, comp, used, budget) {
                return true;
            }
            comp[n][e as usize] = None;
            used[n][c as usize] = false;
        }
        false
    }

    if !rec(0, &order, x, y, &by_faces, &mut comp, &mut used, &mut budget) {
        return None;
    }
    let m = SimplicialMorphism { components: comp.into_iter().map(|l| l.into_iter().map(Option::unwrap).collect()).collect() };
    m.is_isomorphism(x, y).then_some(m)
}

/// Levelwise product.
pub fn product(x: &TruncatedSimplicialSet, y: &TruncatedSimplicialSet) -> Result<TruncatedSimplicialSet> {
    if x.truncation() != y.truncation() || x.kind() != y.kind() {
        return Err(Error::Mismatch("product needs equal truncation and kind".into()));
    }
    let top = x.truncation();
    let mut budget = Budget::new(super::default_max_simplices().max(x.total_simplices()).max(y.total_simplices()));
    for n in 0..=top {
        budget.spend(x.level_size(n) * y.level_size(n))?;
    }
    let pair = |n: usize, a: u32, b: u32| a as usize * y.level_size(n) + b as usize;
    let labels: Vec<Vec<String>> = (0..=top)
        .map(|n| {
            let mut l = Vec::with_capacity(x.level_size(n) * y.level_size(n));
            for a in 0..x.level_size(n) as u32 {
                for b in 0..y.level_size(n) as u32 {
                    l.push(format!("({};{})", x.label(n, a), y.label(n, b)));
                }
            }
            l
        })
        .collect();
    let map = |n: usize, tgt: usize, fx: &dyn Fn(u32) -> u32, fy: &dyn Fn(u32) -> u32| -> Vec<u32> {
        let mut out = Vec::with_capacity(x.level_size(n) * y.level_size(n));
        for a in 0..x.level_size(n) as u32 {
            for b in 0..y.level_size(n) as u32 {
                out.push(pair(tgt, fx(a), fy(b)) as u32);
            }
        }
        out
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=top {
        faces.push((0..=n).map(|i| map(n, n - 1, &|a| x.face(n, i, a), &|b| y.face(n, i, b))).collect());
    }
    let mut degens = Vec::new();
    if x.is_simplicial() {
        for n in 0..top {
            degens.push(
                (0..=n)
                    .map(|i| map(n, n + 1, &|a| x.degeneracy(n, i, a).unwrap(), &|b| y.degeneracy(n, i, b).unwrap()))
                    .collect(),
            );
        }
    }
    TruncatedSimplicialSet::from_tables(x.kind(), labels, faces, degens)
}

/// A finite group acting levelwise: `perms[g][n]` is the permutation of
/// `X_n` by element `g`; `identity` indexes the neutral element.
#[derive(Clone, Debug)]
pub struct LevelAction {
    pub perms: Vec<Vec<Vec<u32>>>,
    pub identity: usize,
}

impl LevelAction {
    pub fn trivial(x: &TruncatedSimplicialSet) -> Self {
        LevelAction { perms: vec![(0..=x.truncation()).map(|n| (0..x.level_size(n) as u32).collect()).collect()], identity: 0 }
    }
}

/// Orbit set of a free action by simplicial automorphisms.
pub fn quotient_by_free_action(x: &TruncatedSimplicialSet, action: &LevelAction) -> Result<TruncatedSimplicialSet> {
    let top = x.truncation();
    let order = action.perms.len();
    if action.identity >= order {
        return Err(Error::Invalid("identity index out of range".into()));
    }
    for (g, per) in action.perms.iter().enumerate() {
        if per.len() != top + 1 {
            return Err(Error::Structural(format!("element {g}: wrong number of levels")));
        }
        for n in 0..=top {
            let p = &per[n];
            let mut seen = vec![false; x.level_size(n)];
            if p.len() != x.level_size(n) || p.iter().any(|&v| v as usize >= seen.len() || std::mem::replace(&mut seen[v as usize], true)) {
                return Err(Error::Structural(format!("element {g} is not a permutation of level {n}")));
            }
            if g == action.identity {
                if p.iter().enumerate().any(|(i, &v)| i as u32 != v) {
                    return Err(Error::Invalid("identity element acts nontrivially".into()));
                }
                continue;
            }
            if let Some(e) = p.iter().enumerate().position(|(i, &v)| i as u32 == v) {
                return Err(Error::NotFree(format!("element {g} fixes {} on level {n}", x.label(n, e as u32))));
            }
        }
        let m = SimplicialMorphism { components: per.clone() };
        m.check(x, x).map_err(|e| Error::Invalid(format!("element {g} is not a simplicial automorphism: {e}")))?;
    }
    // orbit representative = smallest index in the orbit
    let mut orbit_of: Vec<Vec<u32>> = Vec::with_capacity(top + 1);
    let mut reps: Vec<Vec<u32>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut rep = vec![u32::MAX; x.level_size(n)];
        let mut r = Vec::new();
        for e in 0..x.level_size(n) {
            if rep[e] != u32::MAX {
                continue;
            }
            let id = r.len() as u32;
            let mut size = 0;
            for per in &action.perms {
                let t = per[n][e] as usize;
                if rep[t] == u32::MAX {
                    size += 1;
                }
                rep[t] = id;
            }
            if size != order {
                return Err(Error::NotFree(format!("orbit of {} has size {size}, group order {order}", x.label(n, e as u32))));
            }
            r.push(e as u32);
        }
        orbit_of.push(rep);
        reps.push(r);
    }
    let labels = (0..=top).map(|n| reps[n].iter().map(|&e| x.label(n, e).to_string()).collect()).collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=top {
        faces.push((0..=n).map(|i| reps[n].iter().map(|&e| orbit_of[n - 1][x.face(n, i, e) as usize]).collect()).collect());
    }
    let mut degens = Vec::new();
    if x.kind() == Kind::Simplicial {
        for n in 0..top {
            degens.push(
                (0..=n).map(|i| reps[n].iter().map(|&e| orbit_of[n + 1][x.degeneracy(n, i, e).unwrap() as usize]).collect()).collect(),
            );
        }
    }
    TruncatedSimplicialSet::from_tables(x.kind(), labels, faces, degens)
}
