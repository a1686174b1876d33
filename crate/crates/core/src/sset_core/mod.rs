//! Finite truncated (semi-)simplicial sets.
//!
//! Elements of each level are indices `0..|X_n|` whose order is the sorted
//! order of their string labels. Degenerate simplices are stored explicitly.

mod json;
mod membrane;
mod ops;

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

pub use json::SimplicialSetJson;
pub use membrane::{is_membrane, membrane_count, membrane_set, segal_map, IndexCollection, Membrane, MembraneSet, SegalMap};
pub(crate) use membrane::{check_segal_bijective, MapFailure};
pub use ops::{find_isomorphism, product, quotient_by_free_action, LevelAction, SimplicialMorphism};

pub const DEFAULT_MAX_SIMPLICES: usize = 100_000;
/// Environment variable overriding [`DEFAULT_MAX_SIMPLICES`].
pub const SIZE_CAP_ENV: &str = "SEGAL_MAX_SIMPLICES";

pub fn default_max_simplices() -> usize {
    std::env::var(SIZE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SIMPLICES)
}

/// Truncation level plus the cap on the total number of stored simplices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub level: usize,
    pub max_simplices: usize,
}

impl Bounds {
    pub fn new(level: usize) -> Self {
        Bounds { level, max_simplices: default_max_simplices() }
    }

    pub fn max_simplices(self, cap: usize) -> Self {
        Bounds { max_simplices: cap, ..self }
    }
}

impl From<usize> for Bounds {
    fn from(level: usize) -> Self {
        Bounds::new(level)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Simplicial,
    SemiSimplicial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    kind: Kind,
    labels: Vec<Vec<String>>,
    /// `faces[n][i][x]` for `1 <= n <= N`; `faces[0]` is empty.
    faces: Vec<Vec<Vec<u32>>>,
    /// `degens[n][i][x]` for `n < N`; empty for semi-simplicial sets.
    degens: Vec<Vec<Vec<u32>>>,
}

/// One failed simplicial identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub level: usize,
    pub element: String,
}

impl TruncatedSimplicialSet {
    /// Build from raw tables, checking totality and ranges, then sort every
    /// level by label.
    pub fn from_tables(
        kind: Kind,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<u32>>>,
        degens: Vec<Vec<Vec<u32>>>,
    ) -> Result<Self> {
        let top = labels.len().checked_sub(1).ok_or_else(|| structural("no levels"))?;
        if faces.len() != top + 1 {
            return Err(structural(format!("expected face tables for levels 0..={top}, got {}", faces.len())));
        }
        if !faces[0].is_empty() {
            return Err(structural("level 0 has no faces"));
        }
        for n in 1..=top {
            if faces[n].len() != n + 1 {
                return Err(structural(format!("level {n}: expected {} face maps, got {}", n + 1, faces[n].len())));
            }
            for (i, map) in faces[n].iter().enumerate() {
                check_map(map, labels[n].len(), labels[n - 1].len(), || format!("d_{i} on level {n}"))?;
            }
        }
        match kind {
            Kind::SemiSimplicial => {
                if degens.iter().any(|d| !d.is_empty()) {
                    return Err(structural("semi-simplicial set with degeneracies"));
                }
            }
            Kind::Simplicial => {
                if degens.len() != top {
                    return Err(structural(format!("expected degeneracy tables for levels 0..{top}, got {}", degens.len())));
                }
                for n in 0..top {
                    if degens[n].len() != n + 1 {
                        return Err(structural(format!("level {n}: expected {} degeneracies", n + 1)));
                    }
                    for (i, map) in degens[n].iter().enumerate() {
                        check_map(map, labels[n].len(), labels[n + 1].len(), || format!("s_{i} on level {n}"))?;
                    }
                }
            }
        }
        let degens = if kind == Kind::SemiSimplicial { Vec::new() } else { degens };
        let mut x = TruncatedSimplicialSet { kind, labels, faces, degens };
        x.canonicalize()?;
        Ok(x)
    }

    fn canonicalize(&mut self) -> Result<()> {
        let top = self.truncation();
        // perm[n][old] = new
        let mut perms: Vec<Option<Vec<u32>>> = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let lab = &self.labels[n];
            let sorted = lab.windows(2).all(|w| w[0] < w[1]);
            if sorted {
                perms.push(None);
                continue;
            }
            let mut order: Vec<u32> = (0..lab.len() as u32).collect();
            order.sort_by(|&a, &b| lab[a as usize].cmp(&lab[b as usize]));
            if let Some(w) = order.windows(2).find(|w| lab[w[0] as usize] == lab[w[1] as usize]) {
                return Err(structural(format!("duplicate label {:?} on level {n}", lab[w[0] as usize])));
            }
            let mut perm = vec![0u32; lab.len()];
            for (new, &old) in order.iter().enumerate() {
                perm[old as usize] = new as u32;
            }
            self.labels[n] = order.iter().map(|&o| lab[o as usize].clone()).collect();
            perms.push(Some(perm));
        }
        if perms.iter().all(Option::is_none) {
            return Ok(());
        }
        let relabel = |map: &Vec<u32>, src: &Option<Vec<u32>>, dst: &Option<Vec<u32>>| -> Vec<u32> {
            let mut out = vec![0u32; map.len()];
            for (old, &y) in map.iter().enumerate() {
                let new = src.as_ref().map_or(old as u32, |p| p[old]);
                out[new as usize] = dst.as_ref().map_or(y, |p| p[y as usize]);
            }
            out
        };
        for n in 1..=top {
            for i in 0..=n {
                self.faces[n][i] = relabel(&self.faces[n][i], &perms[n], &perms[n - 1]);
            }
        }
        for n in 0..self.degens.len() {
            for i in 0..=n {
                self.degens[n][i] = relabel(&self.degens[n][i], &perms[n], &perms[n + 1]);
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_simplicial(&self) -> bool {
        self.kind == Kind::Simplicial
    }

    pub fn truncation(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.labels[n].len()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn total_simplices(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    pub fn label(&self, n: usize, x: u32) -> &str {
        &self.labels[n][x as usize]
    }

    pub fn index_of(&self, n: usize, label: &str) -> Option<u32> {
        self.labels.get(n)?.binary_search_by(|l| l.as_str().cmp(label)).ok().map(|i| i as u32)
    }

    #[inline]
    pub fn face(&self, n: usize, i: usize, x: u32) -> u32 {
        self.faces[n][i][x as usize]
    }

    pub fn face_map(&self, n: usize, i: usize) -> &[u32] {
        &self.faces[n][i]
    }

    #[inline]
    pub fn degeneracy(&self, n: usize, i: usize, x: u32) -> Option<u32> {
        self.degens.get(n).map(|d| d[i][x as usize])
    }

    pub fn degeneracy_map(&self, n: usize, i: usize) -> Option<&[u32]> {
        self.degens.get(n).map(|d| d[i].as_slice())
    }

    /// Vertex `k` of an n-simplex.
    pub fn vertex(&self, n: usize, k: usize, x: u32) -> u32 {
        self.restrict(n, x, &[k])
    }

    /// Restriction of `x ∈ X_n` to the face spanned by the sorted vertex set `keep`.
    pub fn restrict(&self, n: usize, x: u32, keep: &[usize]) -> u32 {
        let mut cur = x;
        let mut level = n;
        for v in (0..=n).rev() {
            if keep.binary_search(&v).is_err() {
                cur = self.face(level, v, cur);
                level -= 1;
            }
        }
        cur
    }

    /// Face indices, applied in order, that restrict an n-simplex to `keep`.
    pub(crate) fn restriction_path(n: usize, keep: &[usize]) -> Vec<(usize, usize)> {
        let mut path = Vec::new();
        let mut level = n;
        for v in (0..=n).rev() {
            if keep.binary_search(&v).is_err() {
                path.push((level, v));
                level -= 1;
            }
        }
        path
    }

    #[inline]
    pub(crate) fn follow(&self, path: &[(usize, usize)], x: u32) -> u32 {
        path.iter().fold(x, |cur, &(level, i)| self.faces[level][i][cur as usize])
    }

    /// Keep levels `0..=n` only.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.truncation() {
            return Err(Error::InsufficientTruncation { needed: n, available: self.truncation() });
        }
        let mut x = self.clone();
        x.labels.truncate(n + 1);
        x.faces.truncate(n + 1);
        if x.kind == Kind::Simplicial {
            x.degens.truncate(n);
        }
        Ok(x)
    }

    /// Forget degeneracies.
    pub fn to_semi_simplicial(&self) -> Self {
        TruncatedSimplicialSet { kind: Kind::SemiSimplicial, degens: Vec::new(), ..self.clone() }
    }

    /// Replace one level's face map entry; used to build corrupted inputs.
    /// Returns an error if indices are out of range.
    pub fn with_face_entry(&self, n: usize, i: usize, x: u32, y: u32) -> Result<Self> {
        if n == 0 || n > self.truncation() || i > n || x as usize >= self.level_size(n) || y as usize >= self.level_size(n - 1) {
            return Err(structural("face entry out of range"));
        }
        let mut out = self.clone();
        out.faces[n][i][x as usize] = y;
        Ok(out)
    }

    /// Remove the listed elements from level `n` and every simplex above
    /// them whose faces (or degeneracy images) would dangle.
    pub fn without_simplices(&self, n: usize, drop: &[u32]) -> Result<Self> {
        if n > self.truncation() {
            return Err(Error::InsufficientTruncation { needed: n, available: self.truncation() });
        }
        let top = self.truncation();
        let mut alive: Vec<Vec<bool>> = self.labels.iter().map(|l| vec![true; l.len()]).collect();
        for &x in drop {
            if let Some(a) = alive[n].get_mut(x as usize) {
                *a = false;
            }
        }
        // dropping a degenerate simplex kills its face, which kills more above
        let mut changed = true;
        while changed {
            changed = false;
            for m in 1..=top {
                for x in 0..self.level_size(m) {
                    if alive[m][x] && (0..=m).any(|i| !alive[m - 1][self.face(m, i, x as u32) as usize]) {
                        alive[m][x] = false;
                        changed = true;
                    }
                }
            }
            if self.is_simplicial() {
                for m in (0..top).rev() {
                    for x in 0..self.level_size(m) {
                        if alive[m][x] && (0..=m).any(|i| !alive[m + 1][self.degens[m][i][x] as usize]) {
                            alive[m][x] = false;
                            changed = true;
                        }
                    }
                }
            }
        }
        let newidx: Vec<Vec<Option<u32>>> = alive
            .iter()
            .map(|a| {
                let mut c = 0u32;
                a.iter()
                    .map(|&k| {
                        if k {
                            c += 1;
                            Some(c - 1)
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        let labels: Vec<Vec<String>> = (0..=top)
            .map(|m| (0..self.level_size(m)).filter(|&x| alive[m][x]).map(|x| self.labels[m][x].clone()).collect())
            .collect();
        let remap = |m: usize, map: &[u32], tgt: usize| -> Vec<u32> {
            (0..self.level_size(m)).filter(|&x| alive[m][x]).map(|x| newidx[tgt][map[x] as usize].expect("alive closure")).collect()
        };
        let mut faces = vec![Vec::new()];
        for m in 1..=top {
            faces.push((0..=m).map(|i| remap(m, &self.faces[m][i], m - 1)).collect());
        }
        let degens = (0..self.degens.len()).map(|m| (0..=m).map(|i| remap(m, &self.degens[m][i], m + 1)).collect()).collect();
        TruncatedSimplicialSet::from_tables(self.kind, labels, faces, degens)
    }

    /// Check all simplicial identities that fit inside the truncation.
    pub fn validate(&self) -> Vec<Violation> {
        let top = self.truncation();
        let mut out = Vec::new();
        let report = |identity: String, level: usize, x: u32, out: &mut Vec<Violation>| {
            out.push(Violation { identity, level, element: self.label(level, x).to_string() });
        };
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    for x in 0..self.level_size(n) as u32 {
                        let a = self.face(n - 1, i, self.face(n, j, x));
                        let b = self.face(n - 1, j - 1, self.face(n, i, x));
                        if a != b {
                            report(format!("d{i} d{j} = d{} d{i}", j - 1), n, x, &mut out);
                        }
                    }
                }
            }
        }
        if self.kind == Kind::SemiSimplicial {
            return out;
        }
        for n in 0..top {
            for x in 0..self.level_size(n) as u32 {
                for j in 0..=n {
                    let sx = self.degens[n][j][x as usize];
                    for i in 0..=(n + 1) {
                        let lhs = self.face(n + 1, i, sx);
                        let rhs = if i == j || i == j + 1 {
                            Some(x)
                        } else if i < j {
                            Some(self.degens[n - 1][j - 1][self.face(n, i, x) as usize])
                        } else {
                            Some(self.degens[n - 1][j][self.face(n, i - 1, x) as usize])
                        };
                        if rhs != Some(lhs) {
                            let id = if i == j || i == j + 1 {
                                format!("d{i} s{j} = id")
                            } else if i < j {
                                format!("d{i} s{j} = s{} d{i}", j - 1)
                            } else {
                                format!("d{i} s{j} = s{j} d{}", i - 1)
                            };
                            report(id, n, x, &mut out);
                        }
                    }
                    if n + 2 <= top {
                        for i in 0..=j {
                            let a = self.degens[n + 1][i][sx as usize];
                            let b = self.degens[n + 1][j + 1][self.degens[n][i][x as usize] as usize];
                            if a != b {
                                report(format!("s{i} s{j} = s{} s{i}", j + 1), n, x, &mut out);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

fn check_map(map: &[u32], dom: usize, cod: usize, what: impl Fn() -> String) -> Result<()> {
    if map.len() != dom {
        return Err(structural(format!("{}: map has {} entries for {dom} elements", what(), map.len())));
    }
    if let Some(&y) = map.iter().find(|&&y| y as usize >= cod) {
        return Err(structural(format!("{}: target index {y} out of range {cod}", what())));
    }
    Ok(())
}

/// Running total of simplices against a cap.
pub(crate) struct Budget {
    cap: usize,
    used: usize,
}

impl Budget {
    pub(crate) fn new(cap: usize) -> Self {
        Budget { cap, used: 0 }
    }

    pub(crate) fn spend(&mut self, k: usize) -> Result<()> {
        self.used += k;
        if self.used > self.cap {
            return Err(Error::SizeCap { cap: self.cap, what: "simplices" });
        }
        Ok(())
    }
}

pub(crate) type KeyFn<'a, K> = &'a (dyn Fn(usize, usize, &K) -> K + Sync);

/// Assemble a simplicial set from structured keys. `face(n, i, k)` maps a
/// level-`n` key to a level-`n-1` key; `degen(n, i, k)` a level-`n` key to a
/// level-`n+1` key.
pub(crate) fn build_keyed<K>(
    kind: Kind,
    levels: Vec<Vec<K>>,
    label: &(dyn Fn(usize, &K) -> String + Sync),
    face: KeyFn<'_, K>,
    degen: Option<KeyFn<'_, K>>,
) -> Result<TruncatedSimplicialSet>
where
    K: Eq + Hash + Clone + Send + Sync,
{
    let top = levels.len() - 1;
    let mut labels = Vec::with_capacity(top + 1);
    let mut sorted_levels = Vec::with_capacity(top + 1);
    for (n, keys) in levels.into_iter().enumerate() {
        let mut lk: Vec<(String, K)> = par::map(&keys, |k| (label(n, k), k.clone()));
        lk.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = lk.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(structural(format!("duplicate label {:?} on level {n}", w[0].0)));
        }
        let (l, k): (Vec<String>, Vec<K>) = lk.into_iter().unzip();
        labels.push(l);
        sorted_levels.push(k);
    }
    let index: Vec<HashMap<&K, u32>> =
        sorted_levels.iter().map(|keys| keys.iter().enumerate().map(|(i, k)| (k, i as u32)).collect()).collect();
    let lookup = |n: usize, k: &K| -> Result<u32> {
        index[n].get(k).copied().ok_or_else(|| structural(format!("structure map leaves level {n}")))
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=top {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let m: Result<Vec<u32>> = par::map(&sorted_levels[n], |k| lookup(n - 1, &face(n, i, k))).into_iter().collect();
            per_i.push(m?);
        }
        faces.push(per_i);
    }
    let mut degens = Vec::new();
    if let (Kind::Simplicial, Some(degen)) = (kind, degen) {
        for n in 0..top {
            let mut per_i = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let m: Result<Vec<u32>> = par::map(&sorted_levels[n], |k| lookup(n + 1, &degen(n, i, k))).into_iter().collect();
                per_i.push(m?);
            }
            degens.push(per_i);
        }
    } else if kind == Kind::Simplicial {
        return Err(structural("simplicial kind requires degeneracies"));
    }
    Ok(TruncatedSimplicialSet { kind, labels, faces, degens })
}

/// Non-decreasing sequences of length `k+1` with entries in `0..=n`.
pub(crate) fn monotone_sequences(k: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k + 1);
    fn rec(k: usize, n: usize, lo: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v as u8);
            rec(k, n, v, cur, out);
            cur.pop();
        }
    }
    rec(k, n, 0, &mut cur, &mut out);
    out
}

pub fn join_label<T: std::fmt::Display>(parts: &[T]) -> String {
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&p.to_string());
    }
    s
}

/// The standard simplex Δ^n truncated at level `bounds.level`.
pub fn standard_simplex(n: usize, bounds: impl Into<Bounds>) -> Result<TruncatedSimplicialSet> {
    let b = bounds.into();
    if n > 200 {
        return Err(Error::Invalid("simplex dimension too large".into()));
    }
    let mut budget = Budget::new(b.max_simplices);
    let mut levels = Vec::with_capacity(b.level + 1);
    for k in 0..=b.level {
        let l = monotone_sequences(k, n);
        budget.spend(l.len())?;
        levels.push(l);
    }
    let wide = n >= 10;
    let label = move |_: usize, s: &Vec<u8>| {
        if wide {
            join_label(s)
        } else {
            s.iter().map(|v| char::from(b'0' + v)).collect()
        }
    };
    let face = |_: usize, i: usize, s: &Vec<u8>| {
        let mut t = s.clone();
        t.remove(i);
        t
    };
    let degen = |_: usize, i: usize, s: &Vec<u8>| {
        let mut t = s.clone();
        t.insert(i, s[i]);
        t
    };
    build_keyed(Kind::Simplicial, levels, &label, &face, Some(&degen))
}
