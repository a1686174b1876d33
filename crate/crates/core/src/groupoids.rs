//! Finite groupoids, 2-fiber products, homotopy cardinality and transfer, and
//! the Hecke-Waldhausen simplicial groupoid.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::constructions::{CategoryJson, FiniteCategory};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::par;
use crate::sset_core::{join_label, Bounds, TruncatedSimplicialSet};
use crate::Rational;

/// Largest 2-fiber product built, in morphisms.
pub const MAX_FIBER_MORPHISMS: usize = 100_000;

type ComposeFn = Arc<dyn Fn(u32, u32) -> u32 + Send + Sync>;

/// A finite groupoid stored with all objects and morphisms. Composition is a
/// closure over whatever data the groupoid was built from.
#[derive(Clone)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    identities: Vec<u32>,
    inverse: Vec<u32>,
    labels: Option<Vec<String>>,
    out: Vec<Vec<u32>>,
    out_pos: Vec<u32>,
    component: Vec<u32>,
    reps: Vec<u32>,
    comp: ComposeFn,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupoid")
            .field("objects", &self.objects.len())
            .field("morphisms", &self.src.len())
            .field("components", &self.reps.len())
            .finish()
    }
}

impl FiniteGroupoid {
    fn assemble(
        objects: Vec<String>,
        src: Vec<u32>,
        tgt: Vec<u32>,
        identities: Vec<u32>,
        inverse: Vec<u32>,
        labels: Option<Vec<String>>,
        comp: ComposeFn,
    ) -> Self {
        let mut out = vec![Vec::new(); objects.len()];
        let mut out_pos = vec![0u32; src.len()];
        for (f, &s) in src.iter().enumerate() {
            out_pos[f] = out[s as usize].len() as u32;
            out[s as usize].push(f as u32);
        }
        let mut component = vec![u32::MAX; objects.len()];
        let mut reps = Vec::new();
        for x in 0..objects.len() {
            if component[x] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x as u32);
            // in a groupoid every object of the component is one arrow away
            for &f in &out[x] {
                component[tgt[f as usize] as usize] = c;
            }
            component[x] = c;
        }
        FiniteGroupoid { objects, src, tgt, identities, inverse, labels, out, out_pos, component, reps, comp }
    }

    /// A finite category all of whose morphisms are invertible.
    pub fn from_category(c: &FiniteCategory) -> Result<Self> {
        let m = c.morphisms().len();
        let mut inverse = vec![u32::MAX; m];
        for f in 0..m as u32 {
            let mf = c.morphism(f);
            inverse[f as usize] = c
                .hom(mf.tgt, mf.src)
                .into_iter()
                .find(|&g| c.compose(f, g) == Some(c.identity(mf.src)) && c.compose(g, f) == Some(c.identity(mf.tgt)))
                .ok_or_else(|| Error::Invalid(format!("morphism {} is not invertible", mf.label)))?;
        }
        let table: HashMap<(u32, u32), u32> = (0..m as u32)
            .flat_map(|f| c.out_of(c.morphism(f).tgt).iter().map(move |&g| (f, g)))
            .map(|(f, g)| ((f, g), c.compose(f, g).unwrap()))
            .collect();
        let table = Arc::new(table);
        Ok(FiniteGroupoid::assemble(
            c.objects().to_vec(),
            c.morphisms().iter().map(|f| f.src).collect(),
            c.morphisms().iter().map(|f| f.tgt).collect(),
            (0..c.objects().len() as u32).map(|x| c.identity(x)).collect(),
            inverse,
            Some(c.morphisms().iter().map(|f| f.label.clone()).collect()),
            Arc::new(move |f, g| table[&(f, g)]),
        ))
    }

    /// Objects only, no non-identity morphisms.
    pub fn discrete(objects: Vec<String>) -> Self {
        let n = objects.len() as u32;
        FiniteGroupoid::assemble(
            objects,
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            None,
            Arc::new(|f, _| f),
        )
    }

    /// `BG`: one object with automorphism group `G`.
    pub fn one_object(g: &FiniteGroup) -> Self {
        action_groupoid(g, vec!["*".into()], vec![vec![0]; g.order()]).expect("trivial action")
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.src.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_label(&self, x: u32) -> &str {
        &self.objects[x as usize]
    }

    pub fn morphism_label(&self, f: u32) -> String {
        match &self.labels {
            Some(l) => l[f as usize].clone(),
            None => format!("m{f}"),
        }
    }

    pub fn src(&self, f: u32) -> u32 {
        self.src[f as usize]
    }

    pub fn tgt(&self, f: u32) -> u32 {
        self.tgt[f as usize]
    }

    pub fn identity(&self, x: u32) -> u32 {
        self.identities[x as usize]
    }

    pub fn inverse(&self, f: u32) -> u32 {
        self.inverse[f as usize]
    }

    /// "f then g", defined iff `tgt f == src g`.
    pub fn compose(&self, f: u32, g: u32) -> Option<u32> {
        (self.tgt[f as usize] == self.src[g as usize]).then(|| (self.comp)(f, g))
    }

    fn then(&self, f: u32, g: u32) -> u32 {
        debug_assert_eq!(self.tgt[f as usize], self.src[g as usize]);
        (self.comp)(f, g)
    }

    pub fn out_of(&self, x: u32) -> &[u32] {
        &self.out[x as usize]
    }

    pub fn hom(&self, x: u32, y: u32) -> Vec<u32> {
        self.out[x as usize].iter().copied().filter(|&f| self.tgt[f as usize] == y).collect()
    }

    pub fn aut_order(&self, x: u32) -> usize {
        self.out[x as usize].iter().filter(|&&f| self.tgt[f as usize] == x).count()
    }

    /// Index of the connected component of `x`.
    pub fn component(&self, x: u32) -> u32 {
        self.component[x as usize]
    }

    /// One object per component, the smallest.
    pub fn component_reps(&self) -> &[u32] {
        &self.reps
    }

    pub fn pi0_len(&self) -> usize {
        self.reps.len()
    }

    /// Exhaustive check of the groupoid axioms.
    pub fn validate(&self) -> Result<()> {
        let n = self.objects.len();
        for (x, &id) in self.identities.iter().enumerate() {
            if self.src(id) as usize != x || self.tgt(id) as usize != x {
                return Err(Error::Invalid(format!("identity of {} has wrong endpoints", self.objects[x])));
            }
        }
        for f in 0..self.morphism_count() as u32 {
            let (s, t) = (self.src(f), self.tgt(f));
            if s as usize >= n || t as usize >= n {
                return Err(Error::Invalid("morphism endpoint out of range".into()));
            }
            if self.then(self.identity(s), f) != f || self.then(f, self.identity(t)) != f {
                return Err(Error::Invalid(format!("unit law fails at {}", self.morphism_label(f))));
            }
            let g = self.inverse(f);
            if self.compose(f, g) != Some(self.identity(s)) || self.compose(g, f) != Some(self.identity(t)) {
                return Err(Error::Invalid(format!("{} has no inverse", self.morphism_label(f))));
            }
            for &g in self.out_of(t) {
                let fg = self.then(f, g);
                if self.src(fg) != s || self.tgt(fg) != self.tgt(g) {
                    return Err(Error::Invalid("composite has wrong endpoints".into()));
                }
                for &h in self.out_of(self.tgt(g)) {
                    if self.then(fg, h) != self.then(f, self.then(g, h)) {
                        return Err(Error::Invalid("composition is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// The full subgroupoid on `objs`, with its inclusion.
    pub fn full_subgroupoid(&self, objs: &[u32]) -> (FiniteGroupoid, GroupoidFunctor) {
        let mut new_obj = vec![u32::MAX; self.object_count()];
        for (i, &x) in objs.iter().enumerate() {
            new_obj[x as usize] = i as u32;
        }
        let mut parent_of = Vec::new();
        let mut new_mor = vec![u32::MAX; self.morphism_count()];
        for &x in objs {
            for &f in self.out_of(x) {
                if new_obj[self.tgt(f) as usize] != u32::MAX {
                    new_mor[f as usize] = parent_of.len() as u32;
                    parent_of.push(f);
                }
            }
        }
        let parent = Arc::new(self.clone());
        let (po, nm) = (Arc::new(parent_of.clone()), Arc::new(new_mor.clone()));
        let sub = FiniteGroupoid::assemble(
            objs.iter().map(|&x| self.objects[x as usize].clone()).collect(),
            parent_of.iter().map(|&f| new_obj[self.src(f) as usize]).collect(),
            parent_of.iter().map(|&f| new_obj[self.tgt(f) as usize]).collect(),
            objs.iter().map(|&x| new_mor[self.identity(x) as usize]).collect(),
            parent_of.iter().map(|&f| new_mor[self.inverse(f) as usize]).collect(),
            Some(parent_of.iter().map(|&f| self.morphism_label(f)).collect()),
            Arc::new(move |f, g| nm[parent.then(po[f as usize], po[g as usize]) as usize]),
        );
        (sub, GroupoidFunctor { objects: objs.to_vec(), morphisms: parent_of })
    }

    /// Cartesian product; objects are labelled `(x;y)`.
    pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Self {
        let (nb, mb) = (b.object_count() as u32, b.morphism_count() as u32);
        let (ac, bc) = (Arc::new(a.clone()), Arc::new(b.clone()));
        let pair = |f: u32, g: u32| f * mb + g;
        let mors: Vec<(u32, u32)> = (0..a.morphism_count() as u32).flat_map(|f| (0..mb).map(move |g| (f, g))).collect();
        FiniteGroupoid::assemble(
            a.objects.iter().flat_map(|x| b.objects.iter().map(move |y| format!("({x};{y})"))).collect(),
            mors.iter().map(|&(f, g)| a.src(f) * nb + b.src(g)).collect(),
            mors.iter().map(|&(f, g)| a.tgt(f) * nb + b.tgt(g)).collect(),
            (0..a.object_count() as u32).flat_map(|x| (0..nb).map(move |y| (x, y))).map(|(x, y)| pair(a.identity(x), b.identity(y))).collect(),
            mors.iter().map(|&(f, g)| pair(a.inverse(f), b.inverse(g))).collect(),
            None,
            Arc::new(move |p, q| (ac.then(p / mb, q / mb)) * mb + bc.then(p % mb, q % mb)),
        )
    }

    pub fn to_json_value(&self) -> CategoryJson {
        let mut compose = Vec::new();
        for f in 0..self.morphism_count() as u32 {
            for &g in self.out_of(self.tgt(f)) {
                compose.push([self.morphism_label(f), self.morphism_label(g), self.morphism_label(self.then(f, g))]);
            }
        }
        CategoryJson {
            objects: self.objects.clone(),
            morphisms: (0..self.morphism_count() as u32)
                .map(|f| crate::constructions::MorphismJson {
                    label: self.morphism_label(f),
                    src: self.objects[self.src(f) as usize].clone(),
                    tgt: self.objects[self.tgt(f) as usize].clone(),
                })
                .collect(),
            identities: self.identities.iter().map(|&f| self.morphism_label(f)).collect(),
            compose,
        }
    }

    pub fn from_json_value(v: &CategoryJson) -> Result<Self> {
        FiniteGroupoid::from_category(&FiniteCategory::from_json_value(v)?)
    }
}

/// Object and morphism maps of a functor between finite groupoids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidFunctor {
    pub objects: Vec<u32>,
    pub morphisms: Vec<u32>,
}

impl GroupoidFunctor {
    pub fn identity(a: &FiniteGroupoid) -> Self {
        GroupoidFunctor { objects: (0..a.object_count() as u32).collect(), morphisms: (0..a.morphism_count() as u32).collect() }
    }

    /// Constant functor onto the object `y`.
    pub fn constant(a: &FiniteGroupoid, b: &FiniteGroupoid, y: u32) -> Self {
        GroupoidFunctor { objects: vec![y; a.object_count()], morphisms: vec![b.identity(y); a.morphism_count()] }
    }

    /// `self` then `next`.
    pub fn then(&self, next: &GroupoidFunctor) -> Self {
        GroupoidFunctor {
            objects: self.objects.iter().map(|&x| next.objects[x as usize]).collect(),
            morphisms: self.morphisms.iter().map(|&f| next.morphisms[f as usize]).collect(),
        }
    }

    /// Exhaustive functoriality check.
    pub fn check(&self, a: &FiniteGroupoid, b: &FiniteGroupoid) -> Result<()> {
        if self.objects.len() != a.object_count() || self.morphisms.len() != a.morphism_count() {
            return Err(Error::Invalid("functor maps have the wrong size".into()));
        }
        if self.objects.iter().any(|&x| x as usize >= b.object_count()) || self.morphisms.iter().any(|&f| f as usize >= b.morphism_count()) {
            return Err(Error::Invalid("functor map out of range".into()));
        }
        for f in 0..a.morphism_count() as u32 {
            let g = self.morphisms[f as usize];
            if b.src(g) != self.objects[a.src(f) as usize] || b.tgt(g) != self.objects[a.tgt(f) as usize] {
                return Err(Error::Invalid(format!("endpoints of {} not preserved", a.morphism_label(f))));
            }
            for &h in a.out_of(a.tgt(f)) {
                if b.then(g, self.morphisms[h as usize]) != self.morphisms[a.then(f, h) as usize] {
                    return Err(Error::Invalid(format!("composite {} then {} not preserved", a.morphism_label(f), a.morphism_label(h))));
                }
            }
        }
        for x in 0..a.object_count() as u32 {
            if self.morphisms[a.identity(x) as usize] != b.identity(self.objects[x as usize]) {
                return Err(Error::Invalid("identity not preserved".into()));
            }
        }
        Ok(())
    }
}

/// Action groupoid `G\\E` of a left action `act[g][x] = g·x`: objects `E`,
/// morphisms `(g, x): x → g·x`, stored at `g*|E| + x`.
pub fn action_groupoid(g: &FiniteGroup, labels: Vec<String>, act: Vec<Vec<u32>>) -> Result<FiniteGroupoid> {
    let (ng, ne) = (g.order(), labels.len());
    if act.len() != ng || act.iter().any(|row| row.len() != ne || row.iter().any(|&y| y as usize >= ne)) {
        return Err(Error::Invalid("action table has the wrong shape".into()));
    }
    if act[g.identity()].iter().enumerate().any(|(x, &y)| x as u32 != y) {
        return Err(Error::Invalid("identity does not act trivially".into()));
    }
    for a in 0..ng {
        for b in 0..ng {
            let ab = g.mul(a, b) as usize;
            if (0..ne).any(|x| act[ab][x] != act[a][act[b][x] as usize]) {
                return Err(Error::Invalid(format!("not an action: ({})({}) fails", g.label(a), g.label(b))));
            }
        }
    }
    let nm = ng * ne;
    let src = (0..nm).map(|m| (m % ne) as u32).collect();
    let tgt = (0..nm).map(|m| act[m / ne][m % ne]).collect();
    let e = g.identity();
    let identities = (0..ne).map(|x| (e * ne + x) as u32).collect();
    let inverse = (0..nm).map(|m| (g.inv(m / ne) * ne + act[m / ne][m % ne] as usize) as u32).collect();
    let mlabels = (0..nm).map(|m| format!("{}|{}", g.label(m / ne), labels[m % ne])).collect();
    let table: Arc<Vec<u32>> = Arc::new(g.table().to_vec());
    let comp = Arc::new(move |f: u32, h: u32| {
        let (a, x) = (f as usize / ne, f as usize % ne);
        let b = h as usize / ne;
        // (a, x) then (b, a·x) = (b·a, x)
        (table[b * ng + a] as usize * ne + x) as u32
    });
    Ok(FiniteGroupoid::assemble(labels, src, tgt, identities, inverse, Some(mlabels), comp))
}

/// Homotopy cardinality `Σ_{[x]} 1/|Aut(x)|`.
pub fn cardinality(g: &FiniteGroupoid) -> Rational {
    g.component_reps().iter().map(|&x| Rational::new(1.into(), g.aut_order(x).into())).fold(Rational::zero(), |a, b| a + b)
}

/// The 2-fiber product `A ×_C B` of `F: A → C` and `G: B → C`.
#[derive(Clone, Debug)]
pub struct TwoFiberProduct {
    pub groupoid: FiniteGroupoid,
    /// Projection to `A`.
    pub left: GroupoidFunctor,
    /// Projection to `B`.
    pub right: GroupoidFunctor,
    /// Objects as `(a, b, φ: F a → G b)`.
    pub triples: Vec<(u32, u32, u32)>,
    index: HashMap<(u32, u32, u32), u32>,
    base: Vec<u32>,
    b_out: Vec<u32>,
    a_pos: Vec<u32>,
    b_pos: Vec<u32>,
}

impl TwoFiberProduct {
    pub fn object_index(&self, a: u32, b: u32, phi: u32) -> Option<u32> {
        self.index.get(&(a, b, phi)).copied()
    }

    /// The morphism `(α, β)` out of object `o`, if `α` leaves `a` and `β`
    /// leaves `b`.
    pub fn morphism_from(&self, o: u32, alpha: u32, beta: u32, a: &FiniteGroupoid, b: &FiniteGroupoid) -> Option<u32> {
        let (x, y, _) = self.triples[o as usize];
        (a.src(alpha) == x && b.src(beta) == y).then(|| self.base[o as usize] + self.a_pos[alpha as usize] * self.b_out[o as usize] + self.b_pos[beta as usize])
    }
}

pub fn two_fiber_product(
    a: &FiniteGroupoid,
    f: &GroupoidFunctor,
    b: &FiniteGroupoid,
    g: &GroupoidFunctor,
    c: &FiniteGroupoid,
) -> Result<TwoFiberProduct> {
    two_fiber_product_capped(a, f, b, g, c, MAX_FIBER_MORPHISMS)
}

pub fn two_fiber_product_capped(
    a: &FiniteGroupoid,
    f: &GroupoidFunctor,
    b: &FiniteGroupoid,
    g: &GroupoidFunctor,
    c: &FiniteGroupoid,
    cap: usize,
) -> Result<TwoFiberProduct> {
    let mut triples = Vec::new();
    let mut base = Vec::new();
    let mut b_out = Vec::new();
    let mut total = 0usize;
    for x in 0..a.object_count() as u32 {
        for y in 0..b.object_count() as u32 {
            for phi in c.hom(f.objects[x as usize], g.objects[y as usize]) {
                triples.push((x, y, phi));
                base.push(total as u32);
                let k = b.out_of(y).len();
                b_out.push(k as u32);
                total += a.out_of(x).len() * k;
                if total > cap {
                    return Err(Error::SizeCap { cap, what: "2-fiber product morphisms" });
                }
            }
        }
    }
    let index: HashMap<(u32, u32, u32), u32> = triples.iter().enumerate().map(|(i, &t)| (t, i as u32)).collect();
    let mut src = Vec::with_capacity(total);
    let mut tgt = Vec::with_capacity(total);
    let mut alpha = Vec::with_capacity(total);
    let mut beta = Vec::with_capacity(total);
    for (o, &(x, y, phi)) in triples.iter().enumerate() {
        for &al in a.out_of(x) {
            let fa = c.inverse(f.morphisms[al as usize]);
            let partial = c.then(fa, phi);
            for &be in b.out_of(y) {
                let phi2 = c.then(partial, g.morphisms[be as usize]);
                src.push(o as u32);
                tgt.push(index[&(a.tgt(al), b.tgt(be), phi2)]);
                alpha.push(al);
                beta.push(be);
            }
        }
    }
    let a_pos = a.out_pos.clone();
    let b_pos = b.out_pos.clone();
    let pos_of = {
        let (base, b_out, a_pos, b_pos) = (Arc::new(base.clone()), Arc::new(b_out.clone()), Arc::new(a_pos.clone()), Arc::new(b_pos.clone()));
        move |o: u32, al: u32, be: u32| base[o as usize] + a_pos[al as usize] * b_out[o as usize] + b_pos[be as usize]
    };
    let identities: Vec<u32> =
        triples.iter().enumerate().map(|(o, &(x, y, _))| pos_of(o as u32, a.identity(x), b.identity(y))).collect();
    let inverse: Vec<u32> = (0..total).map(|m| pos_of(tgt[m], a.inverse(alpha[m]), b.inverse(beta[m]))).collect();
    let left = GroupoidFunctor { objects: triples.iter().map(|t| t.0).collect(), morphisms: alpha.clone() };
    let right = GroupoidFunctor { objects: triples.iter().map(|t| t.1).collect(), morphisms: beta.clone() };
    let objects = triples
        .iter()
        .map(|&(x, y, phi)| format!("({};{};{})", a.object_label(x), b.object_label(y), c.morphism_label(phi)))
        .collect();
    let (ac, bc, src_c, al_c, be_c) = (Arc::new(a.clone()), Arc::new(b.clone()), Arc::new(src.clone()), Arc::new(alpha), Arc::new(beta));
    let comp = Arc::new(move |m1: u32, m2: u32| {
        let (m1, m2) = (m1 as usize, m2 as usize);
        pos_of(src_c[m1], ac.then(al_c[m1], al_c[m2]), bc.then(be_c[m1], be_c[m2]))
    });
    let groupoid = FiniteGroupoid::assemble(objects, src, tgt, identities, inverse, None, comp);
    Ok(TwoFiberProduct { groupoid, left, right, triples, index, base, b_out, a_pos, b_pos })
}

/// Function on `π₀`, indexed by component.
pub type ClassFunction = Vec<Rational>;

/// `(f^*φ)([a]) = φ([f a])`.
pub fn pullback(a: &FiniteGroupoid, f: &GroupoidFunctor, b: &FiniteGroupoid, phi: &[Rational]) -> ClassFunction {
    a.component_reps().iter().map(|&x| phi[b.component(f.objects[x as usize]) as usize].clone()).collect()
}

/// Orbifold direct image `(f_*φ)([b]) = ∫_{Rf^{-1}(b)} φ`, computed on the
/// 2-fiber of `f` over each component representative.
pub fn pushforward(a: &FiniteGroupoid, f: &GroupoidFunctor, b: &FiniteGroupoid, phi: &[Rational]) -> Result<ClassFunction> {
    Ok(apply_kernel(&pushforward_kernel(a, f, b)?, phi))
}

/// `k[y][c] = Σ 1/|Aut(o)|` over components `o` of the 2-fiber over the
/// `y`-th representative lying over component `c` of `a`, so that
/// `f_*φ = k φ`.
pub fn pushforward_kernel(a: &FiniteGroupoid, f: &GroupoidFunctor, b: &FiniteGroupoid) -> Result<Vec<Vec<Rational>>> {
    let point = FiniteGroupoid::discrete(vec!["*".into()]);
    par::map(b.component_reps(), |&y| {
        let to_y = GroupoidFunctor::constant(&point, b, y);
        let fiber = two_fiber_product(a, f, &point, &to_y, b)?;
        let fg = &fiber.groupoid;
        let mut row = vec![Rational::zero(); a.pi0_len()];
        for &o in fg.component_reps() {
            row[a.component(fiber.left.objects[o as usize]) as usize] += Rational::new(1.into(), fg.aut_order(o).into());
        }
        Ok(row)
    })
    .into_iter()
    .collect()
}

pub fn apply_kernel(k: &[Vec<Rational>], phi: &[Rational]) -> ClassFunction {
    k.iter().map(|row| row.iter().zip(phi).filter(|(w, _)| !w.is_zero()).map(|(w, v)| w * v).fold(Rational::zero(), |s, v| s + v)).collect()
}

/// Properness classes of a transfer. For finite groupoids every functor is
/// in all of them; they are reported for reference only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferClass {
    WeaklyProper,
    LocallyProper,
    AbsolutelyProper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushforwardReport {
    pub values: ClassFunction,
    pub classes: Vec<TransferClass>,
}

pub fn pushforward_report(a: &FiniteGroupoid, f: &GroupoidFunctor, b: &FiniteGroupoid, phi: &[Rational]) -> Result<PushforwardReport> {
    Ok(PushforwardReport {
        values: pushforward(a, f, b, phi)?,
        classes: vec![TransferClass::WeaklyProper, TransferClass::LocallyProper, TransferClass::AbsolutelyProper],
    })
}

/// A skeleton with its inclusion, a retraction onto it, and the chosen
/// isomorphisms `x → rep(x)`.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub groupoid: FiniteGroupoid,
    pub inclusion: GroupoidFunctor,
    pub retraction: GroupoidFunctor,
    pub to_rep: Vec<u32>,
}

pub fn skeleton(g: &FiniteGroupoid) -> Skeleton {
    let reps = g.component_reps().to_vec();
    let (sk, inclusion) = g.full_subgroupoid(&reps);
    let mut to_rep = vec![u32::MAX; g.object_count()];
    for &r in &reps {
        for &f in g.out_of(r) {
            let y = g.tgt(f);
            if to_rep[y as usize] == u32::MAX {
                to_rep[y as usize] = if y == r { g.identity(r) } else { g.inverse(f) };
            }
        }
        to_rep[r as usize] = g.identity(r);
    }
    let mut sub_index = vec![u32::MAX; g.morphism_count()];
    for (i, &f) in inclusion.morphisms.iter().enumerate() {
        sub_index[f as usize] = i as u32;
    }
    let objects = (0..g.object_count() as u32).map(|x| g.component(x)).collect();
    let morphisms = (0..g.morphism_count() as u32)
        .map(|f| {
            let m = g.then(g.then(g.inverse(to_rep[g.src(f) as usize]), f), to_rep[g.tgt(f) as usize]);
            sub_index[m as usize]
        })
        .collect();
    Skeleton { groupoid: sk, inclusion, retraction: GroupoidFunctor { objects, morphisms }, to_rep }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivalenceFailure {
    NotEssentiallySurjective { object: String },
    HomSizeMismatch { source: (String, String), source_size: usize, target_size: usize },
    NotFaithful { first: String, second: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub holds: bool,
    pub witness: Option<EquivalenceFailure>,
}

/// Decides whether `f` is essentially surjective and fully faithful.
/// Hom-sets are compared between all pairs of component representatives,
/// which suffices in a groupoid.
pub fn equivalence_check(a: &FiniteGroupoid, f: &GroupoidFunctor, b: &FiniteGroupoid) -> EquivalenceVerdict {
    let mut hit = vec![false; b.pi0_len()];
    for &y in &f.objects {
        hit[b.component(y) as usize] = true;
    }
    if let Some(c) = hit.iter().position(|h| !h) {
        let object = b.object_label(b.component_reps()[c]).to_string();
        return EquivalenceVerdict { holds: false, witness: Some(EquivalenceFailure::NotEssentiallySurjective { object }) };
    }
    let reps = a.component_reps();
    let witness = par::find_map_first(reps, |&x| {
        for &y in reps {
            let h = a.hom(x, y);
            let (fx, fy) = (f.objects[x as usize], f.objects[y as usize]);
            let k = b.hom(fx, fy).len();
            if h.len() != k {
                return Some(EquivalenceFailure::HomSizeMismatch {
                    source: (a.object_label(x).to_string(), a.object_label(y).to_string()),
                    source_size: h.len(),
                    target_size: k,
                });
            }
            let mut seen: HashMap<u32, u32> = HashMap::new();
            for &m in &h {
                if let Some(&prev) = seen.get(&f.morphisms[m as usize]) {
                    return Some(EquivalenceFailure::NotFaithful { first: a.morphism_label(prev), second: a.morphism_label(m) });
                }
                seen.insert(f.morphisms[m as usize], m);
            }
        }
        None
    });
    EquivalenceVerdict { holds: witness.is_none(), witness }
}

/// Levels of groupoids with face and degeneracy functors.
#[derive(Clone, Debug)]
pub struct SimplicialGroupoid {
    levels: Vec<FiniteGroupoid>,
    faces: Vec<Vec<GroupoidFunctor>>,
    degens: Vec<Vec<GroupoidFunctor>>,
}

impl SimplicialGroupoid {
    pub fn new(levels: Vec<FiniteGroupoid>, faces: Vec<Vec<GroupoidFunctor>>, degens: Vec<Vec<GroupoidFunctor>>) -> Result<Self> {
        let s = SimplicialGroupoid { levels, faces, degens };
        s.validate()?;
        Ok(s)
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &FiniteGroupoid {
        &self.levels[n]
    }

    /// `∂_i: S_n → S_{n-1}`.
    pub fn face(&self, n: usize, i: usize) -> &GroupoidFunctor {
        &self.faces[n][i]
    }

    /// `s_i: S_n → S_{n+1}`.
    pub fn degeneracy(&self, n: usize, i: usize) -> &GroupoidFunctor {
        &self.degens[n][i]
    }

    /// Replace one face functor without any checks; for building
    /// deliberately broken inputs.
    pub fn with_face_unchecked(&self, n: usize, i: usize, f: GroupoidFunctor) -> Self {
        let mut s = self.clone();
        s.faces[n][i] = f;
        s
    }

    /// Functoriality of every structure map and the simplicial identities,
    /// on objects and morphisms.
    pub fn validate(&self) -> Result<()> {
        let top = self.truncation();
        if self.faces.len() != top + 1 || self.faces.iter().enumerate().any(|(n, v)| v.len() != if n == 0 { 0 } else { n + 1 }) {
            return Err(Error::Structural("face functors have the wrong shape".into()));
        }
        if self.degens.len() != top || self.degens.iter().enumerate().any(|(n, v)| v.len() != n + 1) {
            return Err(Error::Structural("degeneracy functors have the wrong shape".into()));
        }
        for n in 1..=top {
            for f in &self.faces[n] {
                f.check(&self.levels[n], &self.levels[n - 1])?;
            }
        }
        for n in 0..top {
            for s in &self.degens[n] {
                s.check(&self.levels[n], &self.levels[n + 1])?;
            }
        }
        let eq = |p: &GroupoidFunctor, q: &GroupoidFunctor, what: String| -> Result<()> {
            if p == q {
                Ok(())
            } else {
                Err(Error::Structural(format!("simplicial identity fails: {what}")))
            }
        };
        for n in 2..=top {
            for i in 0..n {
                for j in i + 1..=n {
                    // d_i d_j = d_{j-1} d_i
                    eq(&self.faces[n][j].then(&self.faces[n - 1][i]), &self.faces[n][i].then(&self.faces[n - 1][j - 1]), format!("d{i}d{j} at level {n}"))?;
                }
            }
        }
        for n in 0..top {
            for i in 0..=n {
                for j in 0..=n + 1 {
                    let lhs = self.degens[n][i].then(&self.faces[n + 1][j]);
                    let what = format!("d{j}s{i} at level {n}");
                    if j == i || j == i + 1 {
                        eq(&lhs, &GroupoidFunctor::identity(&self.levels[n]), what)?;
                    } else if n > 0 && j < i {
                        eq(&lhs, &self.faces[n][j].then(&self.degens[n - 1][i - 1]), what)?;
                    } else if n > 0 {
                        eq(&lhs, &self.faces[n][j - 1].then(&self.degens[n - 1][i]), what)?;
                    }
                }
                for j in i..=n {
                    if n + 1 < self.degens.len() {
                        // s_{j+1} s_i = s_i s_j for i <= j, as maps S_n → S_{n+2}
                        eq(
                            &self.degens[n][i].then(&self.degens[n + 1][j + 1]),
                            &self.degens[n][j].then(&self.degens[n + 1][i]),
                            format!("s{}s{i} at level {n}", j + 1),
                        )?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Component counts per level.
    pub fn pi0_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.pi0_len()).collect()
    }
}

/// `S_n(G, G/K) = G\\(G/K)^{n+1}`, with faces deleting and degeneracies
/// repeating coordinates. Tuples are stored little-endian in base `|G/K|`.
pub fn hecke_waldhausen(g: &FiniteGroup, k: &[usize], bounds: impl Into<Bounds>) -> Result<SimplicialGroupoid> {
    let b = bounds.into();
    if !g.is_subgroup(k) {
        return Err(Error::Invalid("K is not a subgroup of G".into()));
    }
    let cosets = g.left_cosets(k)?;
    let act = g.coset_action(k)?;
    let e = cosets.len();
    let coset_labels: Vec<String> = cosets.iter().map(|c| format!("{}K", g.label(c[0]))).collect();
    let mut used = 0usize;
    let mut levels = Vec::new();
    for n in 0..=b.level {
        let count = e.checked_pow(n as u32 + 1).unwrap_or(usize::MAX);
        used = used.saturating_add(count.saturating_mul(g.order()));
        if used > b.max_simplices {
            return Err(Error::SizeCap { cap: b.max_simplices, what: "groupoid morphisms" });
        }
        let tuples: Vec<Vec<u32>> = (0..count).map(|t| digits(t, e, n + 1)).collect();
        let labels = tuples.iter().map(|d| join_label(&d.iter().map(|&c| coset_labels[c as usize].as_str()).collect::<Vec<_>>())).collect();
        let act_n = (0..g.order())
            .map(|a| tuples.iter().map(|d| undigits(&d.iter().map(|&c| act[a][c as usize]).collect::<Vec<_>>(), e)).collect())
            .collect();
        levels.push(action_groupoid(g, labels, act_n)?);
    }
    let ng = g.order() as u32;
    let lift = |src_count: usize, dst_count: usize, obj: &dyn Fn(u32) -> u32| -> GroupoidFunctor {
        let objects: Vec<u32> = (0..src_count as u32).map(obj).collect();
        let morphisms = (0..ng).flat_map(|a| objects.iter().map(move |&y| a * dst_count as u32 + y)).collect();
        GroupoidFunctor { objects, morphisms }
    };
    let mut faces = vec![Vec::new()];
    let mut degens = Vec::new();
    for n in 1..=b.level {
        let (cn, cm) = (levels[n].object_count(), levels[n - 1].object_count());
        faces.push(
            (0..=n)
                .map(|i| {
                    lift(cn, cm, &|t| {
                        let mut d = digits(t as usize, e, n + 1);
                        d.remove(i);
                        undigits(&d, e)
                    })
                })
                .collect(),
        );
    }
    for n in 0..b.level {
        let (cn, cm) = (levels[n].object_count(), levels[n + 1].object_count());
        degens.push(
            (0..=n)
                .map(|i| {
                    lift(cn, cm, &|t| {
                        let mut d = digits(t as usize, e, n + 1);
                        d.insert(i, d[i]);
                        undigits(&d, e)
                    })
                })
                .collect(),
        );
    }
    Ok(SimplicialGroupoid { levels, faces, degens })
}

fn digits(mut t: usize, base: usize, len: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(len);
    for _ in 0..len {
        d.push((t % base) as u32);
        t /= base;
    }
    d
}

fn undigits(d: &[u32], base: usize) -> u32 {
    d.iter().rev().fold(0usize, |acc, &c| acc * base + c as usize) as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidLevelReport {
    pub level: usize,
    pub source_objects: usize,
    pub source_morphisms: usize,
    pub target_objects: usize,
    pub target_morphisms: usize,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidSegalVerdict {
    pub up_to_level: usize,
    pub holds: bool,
    pub levels: Vec<GroupoidLevelReport>,
}

/// For each `2 ≤ n ≤ up_to`, builds `φ_n: S_n → S_1 ×_{S_0} ⋯ ×_{S_0} S_1`
/// into the iterated 2-fiber product of skeleta and decides whether it is an
/// equivalence.
pub fn check_1segal_groupoid(s: &SimplicialGroupoid, up_to: usize) -> Result<GroupoidSegalVerdict> {
    if up_to > s.truncation() {
        return Err(Error::InsufficientTruncation { needed: up_to, available: s.truncation() });
    }
    if up_to < 2 {
        return Ok(GroupoidSegalVerdict { up_to_level: up_to, holds: true, levels: Vec::new() });
    }
    let (s0, s1) = (s.level(0), s.level(1));
    let (k0, k1) = (skeleton(s0), skeleton(s1));
    let leg = |i: usize| k1.inclusion.then(s.face(1, i)).then(&k0.retraction);
    let (leg0, leg1) = (leg(0), leg(1));
    // chain[k-2] = S_1 ×_{S_0} ⋯ with k factors; `last` projects to the final factor
    let mut chain: Vec<(TwoFiberProduct, GroupoidFunctor)> = Vec::new();
    let mut levels = Vec::new();
    for n in 2..=up_to {
        let (prev, prev_last) = match chain.last() {
            Some((p, last)) => (&p.groupoid, last.clone()),
            None => (&k1.groupoid, GroupoidFunctor::identity(&k1.groupoid)),
        };
        let fp = two_fiber_product(prev, &prev_last.then(&leg0), &k1.groupoid, &leg1, &k0.groupoid)?;
        let last = fp.right.clone();
        chain.push((fp, last));
        let report = segal_level(s, n, &k0, &k1, &chain);
        levels.push(report);
    }
    Ok(GroupoidSegalVerdict { up_to_level: up_to, holds: levels.iter().all(|l| l.holds), levels })
}

fn segal_level(
    s: &SimplicialGroupoid,
    n: usize,
    k0: &Skeleton,
    k1: &Skeleton,
    chain: &[(TwoFiberProduct, GroupoidFunctor)],
) -> GroupoidLevelReport {
    let sn = s.level(n);
    let target = &chain[n - 2].0.groupoid;
    let mut report = GroupoidLevelReport {
        level: n,
        source_objects: sn.object_count(),
        source_morphisms: sn.morphism_count(),
        target_objects: target.object_count(),
        target_morphisms: target.morphism_count(),
        holds: false,
        witness: None,
    };
    let paths: Vec<Vec<(usize, usize)>> = (1..=n).map(|j| TruncatedSimplicialSet::restriction_path(n, &[j - 1, j])).collect();
    let along = |path: &[(usize, usize)], obj: bool, x: u32| {
        path.iter().fold(x, |x, &(lvl, i)| {
            let f = s.face(lvl, i);
            if obj {
                f.objects[x as usize]
            } else {
                f.morphisms[x as usize]
            }
        })
    };
    let (s0, s1) = (s.level(0), s.level(1));
    // partial[j][x]: image of x in the product of its first j+1 edges
    let mut partial: Vec<Vec<u32>> = vec![Vec::with_capacity(sn.object_count()); n];
    for x in 0..sn.object_count() as u32 {
        let edges: Vec<u32> = paths.iter().map(|p| along(p, true, x)).collect();
        let mut cur = k1.retraction.objects[edges[0] as usize];
        partial[0].push(cur);
        for j in 1..n {
            let (e_prev, e) = (edges[j - 1], edges[j]);
            if s.face(1, 0).objects[e_prev as usize] != s.face(1, 1).objects[e as usize] {
                report.witness = Some(format!(
                    "object {}: edges {} and {} do not share a vertex",
                    sn.object_label(x),
                    s1.object_label(e_prev),
                    s1.object_label(e)
                ));
                return report;
            }
            let (c_prev, c) = (k1.to_rep[e_prev as usize], k1.to_rep[e as usize]);
            let psi = s0.then(s0.inverse(s.face(1, 0).morphisms[c_prev as usize]), s.face(1, 1).morphisms[c as usize]);
            let phi = k0.retraction.morphisms[psi as usize];
            match chain[j - 1].0.object_index(cur, k1.retraction.objects[e as usize], phi) {
                Some(o) => cur = o,
                None => {
                    report.witness = Some(format!("object {}: no matching fiber object", sn.object_label(x)));
                    return report;
                }
            }
            partial[j].push(cur);
        }
    }
    let mut morphisms = Vec::with_capacity(sn.morphism_count());
    for m in 0..sn.morphism_count() as u32 {
        let alphas: Vec<u32> = paths.iter().map(|p| k1.retraction.morphisms[along(p, false, m) as usize]).collect();
        let mut cur = Some(alphas[0]);
        let mut prev_g = &k1.groupoid;
        for j in 1..n {
            let fp = &chain[j - 1].0;
            cur = cur.and_then(|c| fp.morphism_from(partial[j][sn.src(m) as usize], c, alphas[j], prev_g, &k1.groupoid));
            prev_g = &fp.groupoid;
        }
        let ends_ok = |c: u32| target.src(c) == partial[n - 1][sn.src(m) as usize] && target.tgt(c) == partial[n - 1][sn.tgt(m) as usize];
        match cur.filter(|&c| ends_ok(c)) {
            Some(c) => morphisms.push(c),
            None => {
                report.witness =
                    Some(format!("morphism {} is not sent to a morphism between the images of its ends", sn.morphism_label(m)));
                return report;
            }
        }
    }
    let phi = GroupoidFunctor { objects: partial.pop().unwrap(), morphisms };
    let v = equivalence_check(sn, &phi, target);
    report.holds = v.holds;
    report.witness = v.witness.map(|w| format!("{w:?}"));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn regular(g: &FiniteGroup) -> FiniteGroupoid {
        let act = (0..g.order()).map(|a| (0..g.order()).map(|x| g.mul(a, x)).collect()).collect();
        action_groupoid(g, g.labels().to_vec(), act).unwrap()
    }

    #[test]
    fn action_groupoids() {
        let t = FiniteGroupoid::one_object(&FiniteGroup::trivial());
        assert_eq!((t.object_count(), t.morphism_count()), (1, 1));
        let z2 = FiniteGroup::cyclic(2);
        let reg = regular(&z2);
        reg.validate().unwrap();
        assert_eq!(reg.pi0_len(), 1);
        assert_eq!(reg.aut_order(0), 1);
        let bz2 = FiniteGroupoid::one_object(&z2);
        assert_eq!(bz2.aut_order(0), 2);
        assert_eq!(cardinality(&bz2), r(1, 2));
        assert_eq!(cardinality(&reg), r(1, 1));
        assert!(action_groupoid(&z2, vec!["a".into(), "b".into()], vec![vec![1, 0], vec![1, 0]]).is_err());
    }

    #[test]
    fn cardinality_of_products_and_discrete() {
        let d = FiniteGroupoid::discrete(vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(cardinality(&d), r(3, 1));
        let s3 = FiniteGroupoid::one_object(&FiniteGroup::symmetric(3));
        let p = FiniteGroupoid::product(&d, &s3);
        p.validate().unwrap();
        assert_eq!(cardinality(&p), cardinality(&d) * cardinality(&s3));
    }

    #[test]
    fn skeleton_is_equivalent() {
        let g = FiniteGroup::symmetric(3);
        let hw = hecke_waldhausen(&g, &[0, 1], 2).unwrap();
        for n in 0..=2 {
            let l = hw.level(n);
            let sk = skeleton(l);
            sk.retraction.check(l, &sk.groupoid).unwrap();
            sk.inclusion.check(&sk.groupoid, l).unwrap();
            assert!(equivalence_check(&sk.groupoid, &sk.inclusion, l).holds);
            assert!(equivalence_check(l, &sk.retraction, &sk.groupoid).holds);
            assert_eq!(cardinality(&sk.groupoid), cardinality(l));
        }
    }

    #[test]
    fn collapsing_functor_is_not_equivalence() {
        let d = FiniteGroupoid::discrete(vec!["a".into(), "b".into()]);
        let p = FiniteGroupoid::discrete(vec!["*".into()]);
        let f = GroupoidFunctor::constant(&d, &p, 0);
        let v = equivalence_check(&d, &f, &p);
        assert!(matches!(v.witness, Some(EquivalenceFailure::HomSizeMismatch { source_size: 0, target_size: 1, .. })));
    }

    #[test]
    fn fiber_over_point() {
        // BG → pt, fiber over the point is the regular action, contractible
        let g = FiniteGroup::cyclic(3);
        let bg = FiniteGroupoid::one_object(&g);
        let pt = FiniteGroupoid::discrete(vec!["*".into()]);
        let f = GroupoidFunctor::constant(&bg, &pt, 0);
        let fp = two_fiber_product(&bg, &f, &pt, &GroupoidFunctor::identity(&pt), &pt).unwrap();
        fp.groupoid.validate().unwrap();
        assert_eq!(cardinality(&fp.groupoid), r(1, 3));
        let push = pushforward(&bg, &f, &pt, &[r(1, 1)]).unwrap();
        assert_eq!(push, vec![r(1, 3)]);
        // pt → BG: fiber is G, discrete
        let i = GroupoidFunctor::constant(&pt, &bg, 0);
        assert_eq!(pushforward(&pt, &i, &bg, &[r(1, 1)]).unwrap(), vec![r(3, 1)]);
    }

    #[test]
    fn hecke_waldhausen_examples() {
        let g = FiniteGroup::symmetric(3);
        let k = g.generated(&[1]);
        assert_eq!(k.len(), 2);
        let hw = hecke_waldhausen(&g, &k, 3).unwrap();
        assert_eq!(hw.level(1).pi0_len(), g.double_cosets(&k).unwrap().len());
        assert_eq!(hw.level(1).pi0_len(), 2);
        let full: Vec<usize> = (0..6).collect();
        let bg = hecke_waldhausen(&g, &full, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(bg.level(n).object_count(), 1);
            assert_eq!(bg.level(n).aut_order(0), 6);
        }
        let disc = hecke_waldhausen(&g, &[g.identity()], 2).unwrap();
        assert_eq!(disc.pi0_sizes(), vec![1, 6, 36]);
        assert!(disc.level(2).component_reps().iter().all(|&x| disc.level(2).aut_order(x) == 1));
    }

    #[test]
    fn hecke_waldhausen_is_1segal() {
        let g = FiniteGroup::symmetric(3);
        let hw = hecke_waldhausen(&g, &g.generated(&[1]), 3).unwrap();
        let v = check_1segal_groupoid(&hw, 3).unwrap();
        assert!(v.holds, "{v:?}");
        let z4 = FiniteGroup::cyclic(4);
        let hw = hecke_waldhausen(&z4, &[0, 2], 3).unwrap();
        assert!(check_1segal_groupoid(&hw, 3).unwrap().holds);
    }

    #[test]
    fn corrupted_face_breaks_1segal() {
        let g = FiniteGroup::cyclic(4);
        let hw = hecke_waldhausen(&g, &[0, 2], 2).unwrap();
        let bad = hw.with_face_unchecked(2, 0, hw.face(2, 1).clone());
        assert!(bad.validate().is_err());
        let v = check_1segal_groupoid(&bad, 2).unwrap();
        assert!(!v.holds);
        assert!(v.levels[0].witness.is_some());
    }

    #[test]
    fn groupoid_json_round_trip() {
        let g = regular(&FiniteGroup::cyclic(3));
        let back = FiniteGroupoid::from_json_value(&g.to_json_value()).unwrap();
        assert_eq!((back.object_count(), back.morphism_count()), (3, 9));
        back.validate().unwrap();
    }
}
