//! Finite categories, Z₊-ordered posets and graphs, and the simplicial sets
//! they produce: nerves, twisted cyclic nerves, buildings, 1-skeletal sets.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::sset_core::{build_keyed, join_label, Bounds, Budget, Kind, TruncatedSimplicialSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub label: String,
    pub src: u32,
    pub tgt: u32,
}

/// Objects, morphisms and an associative partial composition.
/// `compose(f, g)` is "f then g", defined iff `tgt f == src g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemicategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    table: Vec<Option<u32>>,
    out: Vec<Vec<u32>>,
}

impl FiniteSemicategory {
    pub fn new(objects: Vec<String>, morphisms: Vec<Morphism>, compose: impl Fn(u32, u32) -> Option<u32>) -> Result<Self> {
        let m = morphisms.len();
        if let Some(f) = morphisms.iter().find(|f| f.src as usize >= objects.len() || f.tgt as usize >= objects.len()) {
            return Err(Error::Invalid(format!("morphism {} has an unknown endpoint", f.label)));
        }
        unique(objects.iter(), "object")?;
        unique(morphisms.iter().map(|f| &f.label), "morphism")?;
        let mut table = vec![None; m * m];
        for f in 0..m as u32 {
            for g in 0..m as u32 {
                let (mf, mg) = (&morphisms[f as usize], &morphisms[g as usize]);
                let c = compose(f, g);
                if mf.tgt != mg.src {
                    if c.is_some() {
                        return Err(Error::Invalid(format!("composite of non-composable {} and {}", mf.label, mg.label)));
                    }
                    continue;
                }
                let h = c.ok_or_else(|| Error::Invalid(format!("missing composite of {} then {}", mf.label, mg.label)))?;
                let mh = morphisms.get(h as usize).ok_or_else(|| Error::Invalid("composite out of range".into()))?;
                if mh.src != mf.src || mh.tgt != mg.tgt {
                    return Err(Error::Invalid(format!("composite of {} then {} has wrong endpoints", mf.label, mg.label)));
                }
                table[(f as usize) * m + g as usize] = Some(h);
            }
        }
        for f in 0..m {
            for g in 0..m {
                let Some(fg) = table[f * m + g] else { continue };
                for h in 0..m {
                    let Some(gh) = table[g * m + h] else { continue };
                    if table[fg as usize * m + h] != table[f * m + gh as usize] {
                        return Err(Error::Invalid(format!(
                            "composition not associative at ({}, {}, {})",
                            morphisms[f].label, morphisms[g].label, morphisms[h].label
                        )));
                    }
                }
            }
        }
        let mut out = vec![Vec::new(); objects.len()];
        for (i, f) in morphisms.iter().enumerate() {
            out[f.src as usize].push(i as u32);
        }
        Ok(FiniteSemicategory { objects, morphisms, table, out })
    }

    /// One-object semicategory from a semigroup table `mul[a*n+b] = ab`.
    pub fn from_semigroup(labels: Vec<String>, mul: &[u32]) -> Result<Self> {
        let n = labels.len();
        if mul.len() != n * n {
            return Err(Error::Invalid("semigroup table has the wrong shape".into()));
        }
        let morphisms = labels.into_iter().map(|label| Morphism { label, src: 0, tgt: 0 }).collect();
        FiniteSemicategory::new(vec!["*".into()], morphisms, |a, b| Some(mul[a as usize * n + b as usize]))
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: u32) -> &Morphism {
        &self.morphisms[f as usize]
    }

    /// Morphisms with source `x`.
    pub fn out_of(&self, x: u32) -> &[u32] {
        &self.out[x as usize]
    }

    #[inline]
    pub fn compose(&self, f: u32, g: u32) -> Option<u32> {
        self.table[f as usize * self.morphisms.len() + g as usize]
    }

    pub fn hom(&self, x: u32, y: u32) -> Vec<u32> {
        self.out[x as usize].iter().copied().filter(|&f| self.morphisms[f as usize].tgt == y).collect()
    }
}

fn unique<'a>(labels: impl Iterator<Item = &'a String>, what: &str) -> Result<()> {
    let mut v: Vec<&String> = labels.collect();
    v.sort();
    match v.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::Invalid(format!("duplicate {what} label {}", w[0]))),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    semi: FiniteSemicategory,
    identities: Vec<u32>,
}

impl std::ops::Deref for FiniteCategory {
    type Target = FiniteSemicategory;
    fn deref(&self) -> &FiniteSemicategory {
        &self.semi
    }
}

impl FiniteCategory {
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<u32>,
        compose: impl Fn(u32, u32) -> Option<u32>,
    ) -> Result<Self> {
        let semi = FiniteSemicategory::new(objects, morphisms, compose)?;
        if identities.len() != semi.objects.len() {
            return Err(Error::Invalid("one identity per object required".into()));
        }
        for (x, &id) in identities.iter().enumerate() {
            let m = semi.morphisms.get(id as usize).ok_or_else(|| Error::Invalid("identity out of range".into()))?;
            if m.src as usize != x || m.tgt as usize != x {
                return Err(Error::Invalid(format!("identity of {} has wrong endpoints", semi.objects[x])));
            }
        }
        for (f, m) in semi.morphisms.iter().enumerate() {
            let f = f as u32;
            if semi.compose(identities[m.src as usize], f) != Some(f) || semi.compose(f, identities[m.tgt as usize]) != Some(f) {
                return Err(Error::Invalid(format!("unit law fails for {}", m.label)));
            }
        }
        Ok(FiniteCategory { semi, identities })
    }

    pub fn semicategory(&self) -> &FiniteSemicategory {
        &self.semi
    }

    pub fn identity(&self, x: u32) -> u32 {
        self.identities[x as usize]
    }

    pub fn is_identity(&self, f: u32) -> bool {
        self.identities[self.morphism(f).src as usize] == f
    }

    /// One-object category of a monoid table.
    pub fn from_monoid(labels: Vec<String>, mul: &[u32], identity: u32) -> Result<Self> {
        let n = labels.len();
        if mul.len() != n * n || identity as usize >= n {
            return Err(Error::Invalid("monoid table has the wrong shape".into()));
        }
        let morphisms = labels.into_iter().map(|label| Morphism { label, src: 0, tgt: 0 }).collect();
        FiniteCategory::new(vec!["*".into()], morphisms, vec![identity], |a, b| Some(mul[a as usize * n + b as usize]))
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        FiniteCategory::from_monoid(g.labels().to_vec(), g.table(), g.identity() as u32).expect("group is a monoid")
    }

    /// Poset from a reflexive relation table `le[a*n+b]`; morphisms `a<=b`.
    pub fn from_poset(labels: Vec<String>, le: &[bool]) -> Result<Self> {
        let n = labels.len();
        check_partial_order(n, le)?;
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        let mut identities = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if le[a * n + b] {
                    if a == b {
                        identities[a] = morphisms.len() as u32;
                    }
                    index.insert((a as u32, b as u32), morphisms.len() as u32);
                    morphisms.push(Morphism { label: format!("{}<={}", labels[a], labels[b]), src: a as u32, tgt: b as u32 });
                }
            }
        }
        let ends: Vec<(u32, u32)> = morphisms.iter().map(|m| (m.src, m.tgt)).collect();
        FiniteCategory::new(labels, morphisms, identities, |f, g| {
            let ((a, b), (c, d)) = (ends[f as usize], ends[g as usize]);
            (b == c).then(|| index[&(a, d)])
        })
    }

    /// The ordinal `[k] = {0 < 1 < … < k}`.
    pub fn ordinal(k: usize) -> Self {
        let n = k + 1;
        let le: Vec<bool> = (0..n * n).map(|i| i / n <= i % n).collect();
        FiniteCategory::from_poset((0..n).map(|i| i.to_string()).collect(), &le).expect("ordinal")
    }

    /// Search for an isomorphism; returns (object map, morphism map).
    pub fn find_isomorphism(&self, other: &FiniteCategory) -> Option<(Vec<u32>, Vec<u32>)> {
        let (no, nm) = (self.objects.len(), self.morphisms.len());
        if no != other.objects.len() || nm != other.morphisms.len() {
            return None;
        }
        let hom_sizes = |c: &FiniteCategory, x: u32| -> Vec<usize> {
            let mut v: Vec<usize> = (0..c.objects.len() as u32).map(|y| c.hom(x, y).len()).collect();
            v.push(c.hom(x, x).len());
            v.sort_unstable();
            v
        };
        let sig_a: Vec<_> = (0..no as u32).map(|x| hom_sizes(self, x)).collect();
        let sig_b: Vec<_> = (0..no as u32).map(|x| hom_sizes(other, x)).collect();
        let mut omap = vec![u32::MAX; no];
        let mut oused = vec![false; no];
        let mut found = None;
        self.iso_objects(other, 0, &sig_a, &sig_b, &mut omap, &mut oused, &mut found);
        found
    }

    #[allow(clippy::too_many_arguments)]
    fn iso_objects(
        &self,
        other: &FiniteCategory,
        x: usize,
        sa: &[Vec<usize>],
        sb: &[Vec<usize>],
        omap: &mut Vec<u32>,
        oused: &mut Vec<bool>,
        found: &mut Option<(Vec<u32>, Vec<u32>)>,
    ) {
        if found.is_some() {
            return;
        }
        if x == omap.len() {
            // hom-set sizes must match under the object map
            let ok = (0..x as u32).all(|a| (0..x as u32).all(|b| self.hom(a, b).len() == other.hom(omap[a as usize], omap[b as usize]).len()));
            if ok {
                let mut mmap = vec![u32::MAX; self.morphisms.len()];
                let mut mused = vec![false; self.morphisms.len()];
                for (a, &id) in self.identities.iter().enumerate() {
                    mmap[id as usize] = other.identities[omap[a] as usize];
                    mused[mmap[id as usize] as usize] = true;
                }
                let order: Vec<u32> = (0..self.morphisms.len() as u32).filter(|&f| !self.is_identity(f)).collect();
                if self.iso_morphisms(other, &order, 0, omap, &mut mmap, &mut mused) {
                    *found = Some((omap.clone(), mmap));
                }
            }
            return;
        }
        for y in 0..omap.len() {
            if !oused[y] && sa[x] == sb[y] {
                omap[x] = y as u32;
                oused[y] = true;
                self.iso_objects(other, x + 1, sa, sb, omap, oused, found);
                oused[y] = false;
                if found.is_some() {
                    return;
                }
            }
        }
    }

    fn iso_morphisms(&self, other: &FiniteCategory, order: &[u32], pos: usize, omap: &[u32], mmap: &mut Vec<u32>, mused: &mut Vec<bool>) -> bool {
        let Some(&f) = order.get(pos) else { return true };
        let m = self.morphism(f);
        for g in other.hom(omap[m.src as usize], omap[m.tgt as usize]) {
            if mused[g as usize] {
                continue;
            }
            mmap[f as usize] = g;
            // every composite among assigned morphisms must be preserved
            let consistent = (0..self.morphisms.len() as u32).filter(|&h| mmap[h as usize] != u32::MAX).all(|h| {
                let pairs = [(f, h), (h, f)];
                pairs.iter().all(|&(a, b)| match self.compose(a, b) {
                    Some(c) if mmap[c as usize] != u32::MAX => other.compose(mmap[a as usize], mmap[b as usize]) == Some(mmap[c as usize]),
                    _ => true,
                })
            });
            if consistent {
                mused[g as usize] = true;
                if self.iso_morphisms(other, order, pos + 1, omap, mmap, mused) {
                    return true;
                }
                mused[g as usize] = false;
            }
            mmap[f as usize] = u32::MAX;
        }
        false
    }

    pub fn to_json_value(&self) -> CategoryJson {
        CategoryJson {
            objects: self.objects.clone(),
            morphisms: self.morphisms.iter().map(|m| MorphismJson { label: m.label.clone(), src: self.objects[m.src as usize].clone(), tgt: self.objects[m.tgt as usize].clone() }).collect(),
            identities: self.identities.iter().map(|&i| self.morphisms[i as usize].label.clone()).collect(),
            compose: {
                let mut v = Vec::new();
                for f in 0..self.morphisms.len() as u32 {
                    for &g in self.out_of(self.morphism(f).tgt) {
                        let h = self.compose(f, g).unwrap();
                        v.push([self.morphism(f).label.clone(), self.morphism(g).label.clone(), self.morphism(h).label.clone()]);
                    }
                }
                v
            },
        }
    }

    pub fn from_json_value(v: &CategoryJson) -> Result<Self> {
        let obj = |s: &str| v.objects.iter().position(|o| o == s).map(|i| i as u32).ok_or_else(|| Error::Invalid(format!("unknown object {s}")));
        let morphisms: Vec<Morphism> = v
            .morphisms
            .iter()
            .map(|m| Ok(Morphism { label: m.label.clone(), src: obj(&m.src)?, tgt: obj(&m.tgt)? }))
            .collect::<Result<_>>()?;
        let mor = |s: &str| morphisms.iter().position(|m| m.label == s).map(|i| i as u32).ok_or_else(|| Error::Invalid(format!("unknown morphism {s}")));
        let mut table = HashMap::new();
        for [f, g, h] in &v.compose {
            table.insert((mor(f)?, mor(g)?), mor(h)?);
        }
        let identities = v.identities.iter().map(|s| mor(s)).collect::<Result<_>>()?;
        FiniteCategory::new(v.objects.clone(), morphisms, identities, |f, g| table.get(&(f, g)).copied())
    }
}

/// Interchange form: object and morphism lists plus the composition table as
/// `[f, g, f-then-g]` label triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identities: Vec<String>,
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub label: String,
    pub src: String,
    pub tgt: String,
}

fn check_partial_order(n: usize, le: &[bool]) -> Result<()> {
    if le.len() != n * n {
        return Err(Error::Invalid("order relation has the wrong shape".into()));
    }
    for a in 0..n {
        if !le[a * n + a] {
            return Err(Error::Invalid(format!("relation not reflexive at {a}")));
        }
        for b in 0..n {
            if a != b && le[a * n + b] && le[b * n + a] {
                return Err(Error::Invalid(format!("relation not antisymmetric at ({a},{b})")));
            }
            for c in 0..n {
                if le[a * n + b] && le[b * n + c] && !le[a * n + c] {
                    return Err(Error::Invalid(format!("relation not transitive at ({a},{b},{c})")));
                }
            }
        }
    }
    Ok(())
}

/// Endofunctor `F: C → C` as object and morphism maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endofunctor {
    pub objects: Vec<u32>,
    pub morphisms: Vec<u32>,
}

impl Endofunctor {
    pub fn identity(c: &FiniteCategory) -> Self {
        Endofunctor { objects: (0..c.objects().len() as u32).collect(), morphisms: (0..c.morphisms().len() as u32).collect() }
    }

    /// Functor laws: endpoints, identities, composites.
    pub fn check(&self, c: &FiniteCategory) -> Result<()> {
        let (no, nm) = (c.objects().len(), c.morphisms().len());
        if self.objects.len() != no || self.morphisms.len() != nm {
            return Err(Error::Invalid("functor maps have the wrong size".into()));
        }
        if self.objects.iter().any(|&o| o as usize >= no) || self.morphisms.iter().any(|&m| m as usize >= nm) {
            return Err(Error::Invalid("functor map out of range".into()));
        }
        for f in 0..nm as u32 {
            let (m, fm) = (c.morphism(f), c.morphism(self.morphisms[f as usize]));
            if fm.src != self.objects[m.src as usize] || fm.tgt != self.objects[m.tgt as usize] {
                return Err(Error::Invalid(format!("F does not preserve the endpoints of {}", m.label)));
            }
        }
        for x in 0..no as u32 {
            if self.morphisms[c.identity(x) as usize] != c.identity(self.objects[x as usize]) {
                return Err(Error::Invalid("F does not preserve identities".into()));
            }
        }
        for f in 0..nm as u32 {
            for &g in c.out_of(c.morphism(f).tgt) {
                let h = c.compose(f, g).unwrap();
                let lhs = c.compose(self.morphisms[f as usize], self.morphisms[g as usize]);
                if lhs != Some(self.morphisms[h as usize]) {
                    return Err(Error::Invalid(format!("F does not preserve {} then {}", c.morphism(f).label, c.morphism(g).label)));
                }
            }
        }
        Ok(())
    }
}

/// Nerve of a category: composable chains, with identities as degeneracies.
pub fn nerve(c: &FiniteCategory, bounds: impl Into<Bounds>) -> Result<TruncatedSimplicialSet> {
    let b = bounds.into();
    let levels = chain_levels(c, b)?;
    let label = |n: usize, k: &Vec<u32>| chain_label(c, n, k);
    let face = |n: usize, i: usize, k: &Vec<u32>| chain_face(c, n, i, k);
    let degen = |n: usize, i: usize, k: &Vec<u32>| -> Vec<u32> {
        if n == 0 {
            return vec![c.identity(k[0])];
        }
        let x = if i < n { c.morphism(k[i]).src } else { c.morphism(k[n - 1]).tgt };
        let mut out = k.clone();
        out.insert(i, c.identity(x));
        out
    };
    build_keyed(Kind::Simplicial, levels, &label, &face, Some(&degen))
}

/// Nerve of a semicategory (semi-simplicial).
pub fn nerve_semicategory(c: &FiniteSemicategory, bounds: impl Into<Bounds>) -> Result<TruncatedSimplicialSet> {
    let b = bounds.into();
    let levels = chain_levels(c, b)?;
    let label = |n: usize, k: &Vec<u32>| chain_label(c, n, k);
    let face = |n: usize, i: usize, k: &Vec<u32>| chain_face(c, n, i, k);
    build_keyed(Kind::SemiSimplicial, levels, &label, &face, None)
}

fn chain_levels(c: &FiniteSemicategory, b: Bounds) -> Result<Vec<Vec<Vec<u32>>>> {
    let mut budget = Budget::new(b.max_simplices);
    let mut levels: Vec<Vec<Vec<u32>>> = vec![(0..c.objects().len() as u32).map(|x| vec![x]).collect()];
    budget.spend(levels[0].len())?;
    if b.level >= 1 {
        levels.push((0..c.morphisms().len() as u32).map(|f| vec![f]).collect());
        budget.spend(levels[1].len())?;
    }
    for _ in 2..=b.level {
        let prev = levels.last().unwrap();
        let mut next = Vec::new();
        for k in prev {
            for &g in c.out_of(c.morphism(*k.last().unwrap()).tgt) {
                let mut e = k.clone();
                e.push(g);
                next.push(e);
            }
            budget.spend(0)?;
        }
        budget.spend(next.len())?;
        levels.push(next);
    }
    Ok(levels)
}

fn chain_label(c: &FiniteSemicategory, n: usize, k: &[u32]) -> String {
    if n == 0 {
        return c.objects()[k[0] as usize].clone();
    }
    let parts: Vec<&str> = k.iter().map(|&f| c.morphism(f).label.as_str()).collect();
    join_label(&parts)
}

fn chain_face(c: &FiniteSemicategory, n: usize, i: usize, k: &[u32]) -> Vec<u32> {
    if n == 1 {
        let m = c.morphism(k[0]);
        return vec![if i == 0 { m.tgt } else { m.src }];
    }
    if i == 0 {
        return k[1..].to_vec();
    }
    if i == n {
        return k[..n - 1].to_vec();
    }
    let mut out = Vec::with_capacity(n - 1);
    out.extend_from_slice(&k[..i - 1]);
    out.push(c.compose(k[i - 1], k[i]).expect("composable chain"));
    out.extend_from_slice(&k[i + 1..]);
    out
}

/// Twisted cyclic nerve: an n-simplex is `(u_01, …, u_{n-1,n}, u_{n0})` with
/// `u_{n0}: x_n → F(x_0)`.
pub fn twisted_cyclic_nerve(c: &FiniteCategory, f: &Endofunctor, bounds: impl Into<Bounds>) -> Result<TruncatedSimplicialSet> {
    f.check(c)?;
    let b = bounds.into();
    let mut budget = Budget::new(b.max_simplices);
    // chains starting at each object, extended one arrow at a time
    let mut open: Vec<Vec<u32>> = Vec::new();
    let mut levels: Vec<Vec<Vec<u32>>> = Vec::new();
    for n in 0..=b.level {
        if n > 0 {
            let mut next = Vec::new();
            if n == 1 {
                for g in 0..c.morphisms().len() as u32 {
                    next.push(vec![g]);
                }
            } else {
                for k in &open {
                    for &g in c.out_of(c.morphism(*k.last().unwrap()).tgt) {
                        let mut e = k.clone();
                        e.push(g);
                        next.push(e);
                    }
                }
            }
            open = next;
        }
        let mut level = Vec::new();
        let close = |x0: u32, xn: u32, prefix: &[u32], level: &mut Vec<Vec<u32>>| {
            for u in c.hom(xn, f.objects[x0 as usize]) {
                let mut e = prefix.to_vec();
                e.push(u);
                level.push(e);
            }
        };
        if n == 0 {
            for x in 0..c.objects().len() as u32 {
                close(x, x, &[], &mut level);
            }
        } else {
            for k in &open {
                close(c.morphism(k[0]).src, c.morphism(*k.last().unwrap()).tgt, k, &mut level);
            }
        }
        budget.spend(level.len())?;
        levels.push(level);
    }
    let label = |_: usize, k: &Vec<u32>| {
        let parts: Vec<&str> = k.iter().map(|&u| c.morphism(u).label.as_str()).collect();
        join_label(&parts)
    };
    let face = |n: usize, i: usize, k: &Vec<u32>| -> Vec<u32> {
        let mut out = Vec::with_capacity(n);
        if i == 0 {
            out.extend_from_slice(&k[1..n]);
            out.push(c.compose(k[n], f.morphisms[k[0] as usize]).expect("closing arrow"));
        } else {
            out.extend_from_slice(&k[..i - 1]);
            out.push(c.compose(k[i - 1], k[i]).expect("composable"));
            out.extend_from_slice(&k[i + 1..]);
        }
        out
    };
    let degen = |_: usize, i: usize, k: &Vec<u32>| -> Vec<u32> {
        let mut out = k.clone();
        out.insert(i, c.identity(c.morphism(k[i]).src));
        out
    };
    build_keyed(Kind::Simplicial, levels, &label, &face, Some(&degen))
}

/// A finite poset with a monotone endomap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPlusPoset {
    pub labels: Vec<String>,
    le: Vec<bool>,
    pub shift: Vec<u32>,
}

impl ZPlusPoset {
    pub fn new(labels: Vec<String>, le: Vec<bool>, shift: Vec<u32>) -> Result<Self> {
        let n = labels.len();
        check_partial_order(n, &le)?;
        if shift.len() != n || shift.iter().any(|&s| s as usize >= n) {
            return Err(Error::Invalid("F is not a total endomap".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if le[a * n + b] && !le[shift[a] as usize * n + shift[b] as usize] {
                    return Err(Error::Invalid(format!("F not order-preserving at ({}, {})", labels[a], labels[b])));
                }
            }
        }
        Ok(ZPlusPoset { labels, le, shift })
    }

    /// Chain `0 < 1 < … < k` with `F(x) = min(x + step, k)`.
    pub fn capped_chain(k: usize, step: usize) -> Self {
        let n = k + 1;
        let le = (0..n * n).map(|i| i / n <= i % n).collect();
        let shift = (0..n).map(|x| (x + step).min(k) as u32).collect();
        ZPlusPoset::new((0..n).map(|i| i.to_string()).collect(), le, shift).expect("capped chain")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn le(&self, a: u32, b: u32) -> bool {
        self.le[a as usize * self.len() + b as usize]
    }

    pub fn relation(&self) -> &[bool] {
        &self.le
    }

    /// The poset as a category with `F` as an endofunctor.
    pub fn to_category(&self) -> (FiniteCategory, Endofunctor) {
        let c = FiniteCategory::from_poset(self.labels.clone(), &self.le).expect("validated order");
        let mor = |a: u32, b: u32| c.hom(a, b)[0];
        let morphisms = c.morphisms().iter().map(|m| mor(self.shift[m.src as usize], self.shift[m.tgt as usize])).collect();
        let f = Endofunctor { objects: self.shift.clone(), morphisms };
        (c, f)
    }
}

/// Chains `a_0 <= … <= a_n <= F(a_0)`; faces delete, degeneracies repeat.
pub fn building(p: &ZPlusPoset, bounds: impl Into<Bounds>) -> Result<TruncatedSimplicialSet> {
    let b = bounds.into();
    let mut budget = Budget::new(b.max_simplices);
    let mut open: Vec<Vec<u32>> = (0..p.len() as u32).map(|a| vec![a]).collect();
    let mut levels = Vec::new();
    for n in 0..=b.level {
        if n > 0 {
            let mut next = Vec::new();
            for k in &open {
                for a in 0..p.len() as u32 {
                    if p.le(*k.last().unwrap(), a) {
                        let mut e = k.clone();
                        e.push(a);
                        next.push(e);
                    }
                }
            }
            open = next;
        }
        let level: Vec<Vec<u32>> = open.iter().filter(|k| p.le(*k.last().unwrap(), p.shift[k[0] as usize])).cloned().collect();
        budget.spend(level.len())?;
        levels.push(level);
    }
    let label = |_: usize, k: &Vec<u32>| {
        let parts: Vec<&str> = k.iter().map(|&a| p.labels[a as usize].as_str()).collect();
        join_label(&parts)
    };
    let face = |_: usize, i: usize, k: &Vec<u32>| {
        let mut e = k.clone();
        e.remove(i);
        e
    };
    let degen = |_: usize, i: usize, k: &Vec<u32>| {
        let mut e = k.clone();
        e.insert(i, k[i]);
        e
    };
    build_keyed(Kind::Simplicial, levels, &label, &face, Some(&degen))
}

/// Canonical map from the building to the twisted cyclic nerve of the poset
/// category: a chain goes to its consecutive relations.
pub fn building_to_cyclic_nerve(p: &ZPlusPoset, bld: &TruncatedSimplicialSet, cyc: &TruncatedSimplicialSet) -> Result<crate::sset_core::SimplicialMorphism> {
    let (c, _) = p.to_category();
    let index: HashMap<&str, u32> = p.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect();
    let mut components = Vec::new();
    for n in 0..=bld.truncation() {
        let mut comp = Vec::with_capacity(bld.level_size(n));
        for x in 0..bld.level_size(n) as u32 {
            // labels of building simplices are comma-joined poset labels
            let chain: Vec<u32> = bld.label(n, x).split(',').map(|s| index[s]).collect();
            let mut arrows: Vec<&str> = chain.windows(2).map(|w| c.morphism(c.hom(w[0], w[1])[0]).label.as_str()).collect();
            let last = c.hom(*chain.last().unwrap(), p.shift[chain[0] as usize])[0];
            arrows.push(&c.morphism(last).label);
            let l = join_label(&arrows);
            comp.push(cyc.index_of(n, &l).ok_or_else(|| Error::Inconsistent(format!("no cyclic simplex {l}")))?);
        }
        components.push(comp);
    }
    Ok(crate::sset_core::SimplicialMorphism { components })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum GraphSimplex {
    Vertex(u32),
    /// Edge with the first `k` vertices on its source.
    Edge(u32, u32),
}

/// The 1-skeletal simplicial set of an oriented graph; `edges` are
/// `(label, source, target)` with vertex indices.
pub fn oriented_graph(vertices: &[String], edges: &[(String, u32, u32)], bounds: impl Into<Bounds>) -> Result<TruncatedSimplicialSet> {
    let b = bounds.into();
    if edges.iter().any(|e| e.1 as usize >= vertices.len() || e.2 as usize >= vertices.len()) {
        return Err(Error::Invalid("edge endpoint out of range".into()));
    }
    unique(vertices.iter(), "vertex")?;
    unique(edges.iter().map(|e| &e.0), "edge")?;
    let mut budget = Budget::new(b.max_simplices);
    let mut levels = Vec::new();
    for n in 0..=b.level {
        let mut level: Vec<GraphSimplex> = (0..vertices.len() as u32).map(GraphSimplex::Vertex).collect();
        for e in 0..edges.len() as u32 {
            for k in 1..=n as u32 {
                level.push(GraphSimplex::Edge(e, k));
            }
        }
        budget.spend(level.len())?;
        levels.push(level);
    }
    let label = |n: usize, s: &GraphSimplex| match *s {
        GraphSimplex::Vertex(v) => vec![vertices[v as usize].as_str(); n + 1].join(","),
        GraphSimplex::Edge(e, k) => format!("{}@{k}", edges[e as usize].0),
    };
    let face = |n: usize, i: usize, s: &GraphSimplex| match *s {
        GraphSimplex::Vertex(v) => GraphSimplex::Vertex(v),
        GraphSimplex::Edge(e, k) => {
            let k2 = if (i as u32) < k { k - 1 } else { k };
            if k2 == 0 {
                GraphSimplex::Vertex(edges[e as usize].2)
            } else if k2 as usize == n {
                GraphSimplex::Vertex(edges[e as usize].1)
            } else {
                GraphSimplex::Edge(e, k2)
            }
        }
    };
    let degen = |_: usize, i: usize, s: &GraphSimplex| match *s {
        GraphSimplex::Vertex(v) => GraphSimplex::Vertex(v),
        GraphSimplex::Edge(e, k) => GraphSimplex::Edge(e, if (i as u32) < k { k + 1 } else { k }),
    };
    build_keyed(Kind::Simplicial, levels, &label, &face, Some(&degen))
}

/// Free category on a (semi-)simplicial set: generators are the
/// nondegenerate edges, relations `∂_2 c then ∂_0 c = ∂_1 c` for `c ∈ D_2`.
/// Enumeration stops with an error once `cap` morphisms are reached.
pub fn free_category(d: &TruncatedSimplicialSet, cap: usize) -> Result<FiniteCategory> {
    if d.truncation() < 2 {
        return Err(Error::InsufficientTruncation { needed: 2, available: d.truncation() });
    }
    let objects = d.level_size(0);
    let degenerate: Vec<bool> = {
        let mut v = vec![false; d.level_size(1)];
        if d.is_simplicial() {
            for a in 0..objects as u32 {
                v[d.degeneracy(0, 0, a).unwrap() as usize] = true;
            }
        }
        v
    };
    let gens: Vec<u32> = (0..d.level_size(1) as u32).filter(|&e| !degenerate[e as usize]).collect();
    let gen_of: HashMap<u32, usize> = gens.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let word = |e: u32| -> Vec<usize> { gen_of.get(&e).map(|&g| vec![g]).unwrap_or_default() };
    let gsrc: Vec<u32> = gens.iter().map(|&e| d.face(1, 1, e)).collect();
    let gtgt: Vec<u32> = gens.iter().map(|&e| d.face(1, 0, e)).collect();
    // relations grouped by source object
    let mut relations: Vec<Vec<(Vec<usize>, Vec<usize>)>> = vec![Vec::new(); objects];
    for c in 0..d.level_size(2) as u32 {
        let (f, g, h) = (d.face(2, 2, c), d.face(2, 0, c), d.face(2, 1, c));
        let mut lhs = word(f);
        lhs.extend(word(g));
        let rhs = word(h);
        if lhs != rhs {
            relations[d.face(1, 1, h) as usize].push((lhs, rhs));
        }
    }
    let mut cosets = Enumerator { next: Vec::new(), parent: Vec::new(), src: Vec::new(), tgt: Vec::new(), ngens: gens.len(), cap };
    for a in 0..objects as u32 {
        cosets.add(a, a)?;
    }
    let mut p = 0;
    while p < cosets.next.len() {
        if cosets.find(p) != p {
            p += 1;
            continue;
        }
        let at = cosets.tgt[p] as usize;
        for (lhs, rhs) in &relations[at] {
            let a = cosets.trace(p, lhs, &gtgt)?;
            let b = cosets.trace(cosets.find(p), rhs, &gtgt)?;
            cosets.merge(a, b);
        }
        for (g, &s) in gsrc.iter().enumerate() {
            let p2 = cosets.find(p);
            if s == cosets.tgt[p2] && cosets.next[p2][g].is_none() {
                cosets.define(p2, g, gtgt[g])?;
            }
        }
        p += 1;
    }
    // shortest words by BFS from the identities
    let mut index: HashMap<usize, u32> = HashMap::new();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    for a in 0..objects {
        let r = cosets.find(a);
        index.insert(r, words.len() as u32);
        words.push(Vec::new());
        owner.push(r);
        queue.push_back(r);
    }
    while let Some(r) = queue.pop_front() {
        let base = words[index[&r] as usize].clone();
        for g in 0..gens.len() {
            if let Some(t) = cosets.next[r][g] {
                let t = cosets.find(t);
                if let std::collections::hash_map::Entry::Vacant(v) = index.entry(t) {
                    v.insert(words.len() as u32);
                    let mut w = base.clone();
                    w.push(g);
                    words.push(w);
                    owner.push(t);
                    queue.push_back(t);
                }
            }
        }
    }
    let labels: Vec<String> = words
        .iter()
        .zip(&owner)
        .map(|(w, &r)| {
            if w.is_empty() {
                format!("id_{}", d.label(0, cosets.src[r]))
            } else {
                w.iter().map(|&g| d.label(1, gens[g]).to_string()).collect::<Vec<_>>().join(";")
            }
        })
        .collect();
    let morphisms: Vec<Morphism> =
        owner.iter().zip(labels).map(|(&r, label)| Morphism { label, src: cosets.src[r], tgt: cosets.tgt[r] }).collect();
    let objs: Vec<String> = d.labels(0).to_vec();
    let identities: Vec<u32> = (0..objects).map(|a| index[&cosets.find(a)]).collect();
    let compose = |f: u32, g: u32| -> Option<u32> {
        let (rf, rg) = (owner[f as usize], owner[g as usize]);
        if cosets.tgt[rf] != cosets.src[rg] {
            return None;
        }
        let mut cur = rf;
        for &gen in &words[g as usize] {
            cur = cosets.find(cosets.next[cur][gen]?);
        }
        index.get(&cur).copied()
    };
    FiniteCategory::new(objs, morphisms, identities, compose)
}

/// Right-multiplication table of partially enumerated morphisms, with
/// union-find coincidence handling.
struct Enumerator {
    next: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    ngens: usize,
    cap: usize,
}

impl Enumerator {
    fn add(&mut self, src: u32, tgt: u32) -> Result<usize> {
        let id = self.next.len();
        if id >= self.cap {
            return Err(Error::PossiblyInfinite(format!("more than {} morphisms", self.cap)));
        }
        self.next.push(vec![None; self.ngens]);
        self.parent.push(id);
        self.src.push(src);
        self.tgt.push(tgt);
        Ok(id)
    }

    fn find(&self, mut p: usize) -> usize {
        while self.parent[p] != p {
            p = self.parent[p];
        }
        p
    }

    fn define(&mut self, p: usize, g: usize, tgt: u32) -> Result<usize> {
        let q = self.add(self.src[p], tgt)?;
        self.next[p][g] = Some(q);
        Ok(q)
    }

    fn trace(&mut self, p: usize, word: &[usize], gtgt: &[u32]) -> Result<usize> {
        let mut cur = self.find(p);
        for &g in word {
            cur = match self.next[cur][g] {
                Some(q) => self.find(q),
                None => self.define(cur, g, gtgt[g])?,
            };
        }
        Ok(cur)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut pending = vec![(a, b)];
        while let Some((a, b)) = pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            for g in 0..self.ngens {
                match (self.next[keep][g], self.next[gone][g]) {
                    (Some(x), Some(y)) => pending.push((x, y)),
                    (None, Some(y)) => self.next[keep][g] = Some(y),
                    _ => {}
                }
            }
        }
    }
}

/// A category of finite sets and functions: objects are sets of the given
/// sizes, morphisms the closure of the generators under composition.
pub fn concrete_category(sizes: &[usize], generators: &[(u32, u32, Vec<u32>)], cap: usize) -> Result<FiniteCategory> {
    let mut funcs: Vec<(u32, u32, Vec<u32>)> = Vec::new();
    let mut index: BTreeMap<(u32, u32, Vec<u32>), u32> = BTreeMap::new();
    let mut push = |f: (u32, u32, Vec<u32>), funcs: &mut Vec<(u32, u32, Vec<u32>)>| -> Result<bool> {
        if index.contains_key(&f) {
            return Ok(false);
        }
        if funcs.len() >= cap {
            return Err(Error::SizeCap { cap, what: "morphisms" });
        }
        index.insert(f.clone(), funcs.len() as u32);
        funcs.push(f);
        Ok(true)
    };
    for (x, &s) in sizes.iter().enumerate() {
        push((x as u32, x as u32, (0..s as u32).collect()), &mut funcs)?;
    }
    for g in generators {
        let (s, t) = (sizes.get(g.0 as usize), sizes.get(g.1 as usize));
        match (s, t) {
            (Some(&s), Some(&t)) if g.2.len() == s && g.2.iter().all(|&v| (v as usize) < t) => {
                push(g.clone(), &mut funcs)?;
            }
            _ => return Err(Error::Invalid("generator is not a function between the given sets".into())),
        }
    }
    let mut i = 0;
    while i < funcs.len() {
        let f = funcs[i].clone();
        for j in 0..funcs.len() {
            let g = funcs[j].clone();
            if f.1 == g.0 {
                push((f.0, g.1, f.2.iter().map(|&v| g.2[v as usize]).collect()), &mut funcs)?;
            }
            if g.1 == f.0 {
                push((g.0, f.1, g.2.iter().map(|&v| f.2[v as usize]).collect()), &mut funcs)?;
            }
        }
        i += 1;
    }
    let lookup: HashMap<(u32, u32, Vec<u32>), u32> = funcs.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
    let morphisms: Vec<Morphism> = funcs
        .iter()
        .map(|(s, t, v)| Morphism { label: format!("{s}>{t}:{}", v.iter().map(|d| d.to_string()).collect::<String>()), src: *s, tgt: *t })
        .collect();
    let objects = sizes.iter().enumerate().map(|(i, s)| format!("X{i}[{s}]")).collect();
    let identities = (0..sizes.len() as u32).collect();
    FiniteCategory::new(objects, morphisms, identities, |a, b| {
        let (f, g) = (&funcs[a as usize], &funcs[b as usize]);
        (f.1 == g.0).then(|| lookup[&(f.0, g.1, f.2.iter().map(|&v| g.2[v as usize]).collect())])
    })
}

/// Random concrete category with at most `max_objects` objects; retries
/// until the closure has at most `cap` morphisms.
pub fn random_category<R: Rng>(rng: &mut R, max_objects: usize, cap: usize) -> FiniteCategory {
    loop {
        let k = rng.gen_range(1..=max_objects);
        let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let ngen = rng.gen_range(1..=k + 2);
        let gens: Vec<(u32, u32, Vec<u32>)> = (0..ngen)
            .map(|_| {
                let s = rng.gen_range(0..k);
                let t = rng.gen_range(0..k);
                (s as u32, t as u32, (0..sizes[s]).map(|_| rng.gen_range(0..sizes[t] as u32)).collect())
            })
            .collect();
        if let Ok(c) = concrete_category(&sizes, &gens, cap) {
            return c;
        }
    }
}
