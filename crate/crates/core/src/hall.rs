//! Associative algebras from 2-Segal data: Hall categories by triangle
//! counting, algebras of factorizations, truncated Hall algebras of pointed
//! sets and of vector spaces over small prime fields, and Hecke algebras.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::FiniteCategory;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoids::{apply_kernel, hecke_waldhausen, pullback, pushforward_kernel, ClassFunction};
use crate::par;
use crate::segal_check::{is_2segal, is_unital, Strategy};
use crate::sset_core::TruncatedSimplicialSet;
use crate::Rational;

/// A finite-dimensional algebra by structure constants
/// `e_i * e_j = Σ_k c_{ij}^k e_k`. The basis is sorted by label and zero
/// constants are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraTable {
    basis: Vec<String>,
    products: BTreeMap<(u32, u32), Vec<(u32, Rational)>>,
    unit: Option<Vec<(u32, Rational)>>,
}

impl AlgebraTable {
    /// Build from `(left, right, result, coefficient)` entries over an
    /// arbitrary basis order; repeated entries add up.
    pub fn new(basis: Vec<String>, entries: impl IntoIterator<Item = (u32, u32, u32, Rational)>, unit: Option<Vec<(u32, Rational)>>) -> Result<Self> {
        let n = basis.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| basis[a].cmp(&basis[b]));
        if order.windows(2).any(|w| basis[w[0]] == basis[w[1]]) {
            return Err(Error::Invalid("duplicate basis label".into()));
        }
        let mut pos = vec![0u32; n];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p as u32;
        }
        let check = |i: u32| -> Result<u32> { pos.get(i as usize).copied().ok_or_else(|| Error::Invalid("basis index out of range".into())) };
        let mut acc: BTreeMap<(u32, u32), BTreeMap<u32, Rational>> = BTreeMap::new();
        for (i, j, k, c) in entries {
            let e = acc.entry((check(i)?, check(j)?)).or_default().entry(check(k)?).or_insert_with(Rational::zero);
            *e += c;
        }
        let products = acc
            .into_iter()
            .map(|(key, m)| (key, m.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>()))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        let unit = match unit {
            Some(u) => {
                let mut m: BTreeMap<u32, Rational> = BTreeMap::new();
                for (i, c) in u {
                    *m.entry(check(i)?).or_insert_with(Rational::zero) += c;
                }
                Some(m.into_iter().filter(|(_, c)| !c.is_zero()).collect())
            }
            None => None,
        };
        Ok(AlgebraTable { basis: order.into_iter().map(|i| basis[i].clone()).collect(), products, unit })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.basis.binary_search_by(|b| b.as_str().cmp(label)).ok().map(|i| i as u32)
    }

    pub fn unit(&self) -> Option<&[(u32, Rational)]> {
        self.unit.as_deref()
    }

    /// `e_i * e_j` as a sparse vector.
    pub fn product(&self, i: u32, j: u32) -> &[(u32, Rational)] {
        self.products.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn coefficient(&self, i: u32, j: u32, k: u32) -> Rational {
        self.product(i, j).iter().find(|(x, _)| *x == k).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Coefficient by labels; `None` if a label is unknown.
    pub fn coefficient_by_label(&self, i: &str, j: &str, k: &str) -> Option<Rational> {
        Some(self.coefficient(self.index_of(i)?, self.index_of(j)?, self.index_of(k)?))
    }

    /// All nonzero `(left, right, result, coefficient)` in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, u32, &Rational)> + '_ {
        self.products.iter().flat_map(|(&(i, j), v)| v.iter().map(move |(k, c)| (i, j, *k, c)))
    }

    /// Product of two sparse vectors.
    pub fn multiply(&self, x: &[(u32, Rational)], y: &[(u32, Rational)]) -> Vec<(u32, Rational)> {
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in self.product(*i, *j) {
                    *acc.entry(*k).or_insert_with(Rational::zero) += a * b * c;
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// A copy with `(i, j, k)` changed by `delta`.
    pub fn perturbed(&self, i: u32, j: u32, k: u32, delta: Rational) -> Self {
        let entries = self.entries().map(|(a, b, c, v)| (a, b, c, v.clone())).chain(std::iter::once((i, j, k, delta)));
        AlgebraTable::new(self.basis.clone(), entries.collect::<Vec<_>>(), self.unit.clone()).expect("same basis")
    }

    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        let basis = self.basis.iter().map(|b| f(b)).collect();
        AlgebraTable::new(basis, self.entries().map(|(a, b, c, v)| (a, b, c, v.clone())).collect::<Vec<_>>(), self.unit.clone())
    }

    /// CSV with header `left,right,result,coefficient`; fields are quoted
    /// when they contain commas or quotes.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("left,right,result,coefficient\n");
        for (i, j, k, c) in self.entries() {
            let row = [self.basis[i as usize].as_str(), &self.basis[j as usize], &self.basis[k as usize], &c.to_string()].map(csv_field);
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json_value(&self) -> AlgebraJson {
        let b = |i: u32| self.basis[i as usize].clone();
        AlgebraJson {
            basis: self.basis.clone(),
            products: self.entries().map(|(i, j, k, c)| ProductJson { left: b(i), right: b(j), result: b(k), coefficient: c.to_string() }).collect(),
            unit: self.unit.as_ref().map(|u| u.iter().map(|(i, c)| (b(*i), c.to_string())).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: AlgebraJson = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        let idx = |l: &str| v.basis.iter().position(|b| b == l).map(|i| i as u32).ok_or_else(|| Error::Invalid(format!("unknown basis element {l}")));
        let num = |c: &str| c.parse::<Rational>().map_err(|_| Error::Invalid(format!("bad coefficient {c}")));
        let entries = v.products.iter().map(|p| Ok((idx(&p.left)?, idx(&p.right)?, idx(&p.result)?, num(&p.coefficient)?))).collect::<Result<Vec<_>>>()?;
        let unit = match &v.unit {
            Some(u) => Some(u.iter().map(|(l, c)| Ok((idx(l)?, num(c)?))).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        AlgebraTable::new(v.basis.clone(), entries, unit)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub basis: Vec<String>,
    pub products: Vec<ProductJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unit: Option<Vec<(String, String)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductJson {
    pub left: String,
    pub right: String,
    pub result: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub associative: bool,
    /// First `(x, y, z)` with `(xy)z ≠ x(yz)`, by basis label.
    pub failing_triple: Option<[String; 3]>,
    /// `None` when no unit is declared.
    pub unit_holds: Option<bool>,
    pub unit_failure: Option<String>,
}

impl AlgebraReport {
    pub fn holds(&self) -> bool {
        self.associative && self.unit_holds != Some(false)
    }
}

/// Exhaustive associativity over all basis triples, and the unit laws if a
/// unit is declared.
pub fn verify_algebra(t: &AlgebraTable) -> AlgebraReport {
    let n = t.dim() as u32;
    let one = |i: u32| vec![(i, Rational::one())];
    let failing = par::find_map_first(&(0..n).collect::<Vec<_>>(), |&x| {
        for y in 0..n {
            let xy = t.product(x, y);
            for z in 0..n {
                let lhs = t.multiply(xy, &one(z));
                let rhs = t.multiply(&one(x), t.product(y, z));
                if lhs != rhs {
                    return Some([x, y, z]);
                }
            }
        }
        None
    });
    let (unit_holds, unit_failure) = match t.unit() {
        None => (None, None),
        Some(u) => match (0..n).find(|&x| t.multiply(u, &one(x)) != one(x) || t.multiply(&one(x), u) != one(x)) {
            Some(x) => (Some(false), Some(t.basis[x as usize].clone())),
            None => (Some(true), None),
        },
    };
    AlgebraReport {
        associative: failing.is_none(),
        failing_triple: failing.map(|f| f.map(|i| t.basis[i as usize].clone())),
        unit_holds,
        unit_failure,
    }
}

/// The Hall category of a 2-Segal set: objects `X_0`, hom basis the edges,
/// `1_b * 1_{b'} = Σ c 1_{b''}` with `c` the number of 2-simplices with
/// `∂_2 = b`, `∂_0 = b'`, `∂_1 = b''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallCategory {
    pub objects: Vec<String>,
    pub edges: Vec<String>,
    pub src: Vec<u32>,
    pub tgt: Vec<u32>,
    constants: BTreeMap<(u32, u32), Vec<(u32, u64)>>,
    /// `1_{s_0(a)}` per object; absent for semi-simplicial input.
    pub units: Option<Vec<u32>>,
    /// Level up to which the 2-Segal (and unitality) hypotheses were checked.
    pub checked_up_to: usize,
    /// Finite fibers of `(∂_2, ∂_0)`; automatic for finite input.
    pub proper: bool,
}

impl HallCategory {
    pub fn constant(&self, b: u32, b2: u32) -> &[(u32, u64)] {
        self.constants.get(&(b, b2)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// The whole category as one algebra, with non-composable products zero.
    pub fn to_table(&self) -> AlgebraTable {
        let unit = self.units.as_ref().map(|u| u.iter().map(|&e| (e, Rational::one())).collect());
        AlgebraTable::new(self.edges.clone(), self.raw_entries(|_| true), unit).expect("edge labels are distinct")
    }

    /// The Hall algebra `End(a)`.
    pub fn at_object(&self, a: u32) -> AlgebraTable {
        let loops: Vec<u32> = (0..self.edges.len() as u32).filter(|&e| self.src[e as usize] == a && self.tgt[e as usize] == a).collect();
        let pos: HashMap<u32, u32> = loops.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let entries = self.raw_entries(|e| pos.contains_key(&e)).into_iter().map(|(i, j, k, c)| (pos[&i], pos[&j], pos[&k], c));
        let unit = self.units.as_ref().map(|u| vec![(pos[&u[a as usize]], Rational::one())]);
        AlgebraTable::new(loops.iter().map(|&e| self.edges[e as usize].clone()).collect(), entries.collect::<Vec<_>>(), unit).expect("distinct")
    }

    fn raw_entries(&self, keep: impl Fn(u32) -> bool) -> Vec<(u32, u32, u32, Rational)> {
        self.constants
            .iter()
            .filter(|((i, j), _)| keep(*i) && keep(*j))
            .flat_map(|(&(i, j), v)| v.iter().map(move |&(k, c)| (i, j, k, Rational::from_integer(c.into()))))
            .collect()
    }
}

/// Triangle counts; checks the 2-Segal hypothesis up to `min(4, N)` and,
/// for simplicial input, unitality, then verifies associativity and units.
pub fn hall_category(x: &TruncatedSimplicialSet) -> Result<HallCategory> {
    if x.truncation() < 3 {
        return Err(Error::InsufficientTruncation { needed: 3, available: x.truncation() });
    }
    let up_to = x.truncation().min(4);
    let v = is_2segal(x, up_to, Strategy::AllTriangulations)?;
    if !v.holds {
        return Err(Error::Hypothesis(format!("not 2-Segal up to level {up_to}: {:?}", v.witnesses[0])));
    }
    let units = if x.is_simplicial() {
        let u = is_unital(x, up_to)?;
        if !u.holds {
            return Err(Error::Hypothesis(format!("not unital up to level {up_to}: {:?}", u.witnesses[0])));
        }
        Some((0..x.level_size(0) as u32).map(|a| x.degeneracy(0, 0, a).unwrap()).collect())
    } else {
        None
    };
    let mut acc: BTreeMap<(u32, u32), BTreeMap<u32, u64>> = BTreeMap::new();
    for t in 0..x.level_size(2) as u32 {
        *acc.entry((x.face(2, 2, t), x.face(2, 0, t))).or_default().entry(x.face(2, 1, t)).or_insert(0) += 1;
    }
    let hall = HallCategory {
        objects: x.labels(0).to_vec(),
        edges: x.labels(1).to_vec(),
        src: x.face_map(1, 1).to_vec(),
        tgt: x.face_map(1, 0).to_vec(),
        constants: acc.into_iter().map(|(k, m)| (k, m.into_iter().collect())).collect(),
        units,
        checked_up_to: up_to,
        proper: true,
    };
    let report = verify_algebra(&hall.to_table());
    if !report.holds() {
        return Err(Error::Inconsistent(format!("Hall category fails verification: {report:?}")));
    }
    Ok(hall)
}

/// `1_{A,B} * 1_{C,D} = Σ_{E: ED=A, BE=C} 1_{E,DB}` on pairs with
/// `AB = BA = w`, for a one-object category `M`. Basis labels are `(A,B)`.
pub fn factorization_algebra(m: &FiniteCategory, w: u32) -> Result<AlgebraTable> {
    if m.objects().len() != 1 {
        return Err(Error::Invalid("a monoid has exactly one object".into()));
    }
    let n = m.morphisms().len() as u32;
    if w >= n {
        return Err(Error::Invalid("w is not an element of the monoid".into()));
    }
    // juxtaposition `ab` is the composite a∘b, with b applied first
    let mul = |a: u32, b: u32| m.compose(b, a).expect("one object");
    let basis: Vec<(u32, u32)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| mul(a, b) == w && mul(b, a) == w).collect();
    let pos: HashMap<(u32, u32), u32> = basis.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
    let mut entries = Vec::new();
    for (i, &(a, b)) in basis.iter().enumerate() {
        for (j, &(c, d)) in basis.iter().enumerate() {
            for e in 0..n {
                if mul(e, d) == a && mul(b, e) == c {
                    let k = pos.get(&(e, mul(d, b))).ok_or_else(|| Error::Inconsistent("product leaves the basis".into()))?;
                    entries.push((i as u32, j as u32, *k, Rational::one()));
                }
            }
        }
    }
    let label = |&(a, b): &(u32, u32)| format!("({},{})", m.morphism(a).label, m.morphism(b).label);
    let unit = pos.get(&(w, m.identity(0))).map(|&u| vec![(u, Rational::one())]);
    let t = AlgebraTable::new(basis.iter().map(label).collect(), entries, unit)?;
    let report = verify_algebra(&t);
    if !report.holds() {
        return Err(Error::Inconsistent(format!("factorization algebra fails verification: {report:?}")));
    }
    Ok(t)
}

/// An abelian-like category with a size grading, given by counts
/// `g(A, B; C) = #{A' ⊂ C : A' ≅ A, C/A' ≅ B}` over iso classes.
pub trait FinitaryHallOracle: Sync {
    fn name(&self) -> String;
    /// Iso classes of size at most `bound` as `(label, size)`.
    fn classes(&self, bound: usize) -> Result<Vec<(String, usize)>>;
    /// `g(A, B; C)` for class indices as returned by `classes`.
    fn count(&self, a: usize, b: usize, c: usize) -> u64;
}

/// Finite pointed sets; the class of size `n` has `n` non-base points.
#[derive(Clone, Copy, Debug, Default)]
pub struct PointedSets;

pub fn oracle_pointed_sets() -> PointedSets {
    PointedSets
}

/// Largest pointed set enumerated, in non-base points.
pub const MAX_POINTED_SIZE: usize = 16;

impl FinitaryHallOracle for PointedSets {
    fn name(&self) -> String {
        "pointed-sets".into()
    }

    fn classes(&self, bound: usize) -> Result<Vec<(String, usize)>> {
        if bound > MAX_POINTED_SIZE {
            return Err(Error::SizeCap { cap: MAX_POINTED_SIZE, what: "non-base points" });
        }
        Ok((0..=bound).map(|n| (format!("e{n:02}"), n)).collect())
    }

    fn count(&self, a: usize, b: usize, c: usize) -> u64 {
        // a pointed subset with `a` non-base points has quotient of size c - a
        (0u32..1 << c).filter(|s| s.count_ones() as usize == a && c - a == b).count() as u64
    }
}

/// Finite-dimensional vector spaces over `F_q`, classes by dimension.
#[derive(Clone, Copy, Debug)]
pub struct FqVectorSpaces {
    q: u32,
    max_dim: usize,
}

pub fn oracle_fq_vector_spaces(q: u32, max_dim: usize) -> Result<FqVectorSpaces> {
    if ![2, 3, 5].contains(&q) {
        return Err(Error::Invalid(format!("q = {q} must be a prime at most 5")));
    }
    if max_dim > 4 {
        return Err(Error::SizeCap { cap: 4, what: "dimensions" });
    }
    Ok(FqVectorSpaces { q, max_dim })
}

impl FqVectorSpaces {
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Reduced row echelon `k × n` matrices over `F_q`, one per
    /// `k`-dimensional subspace of `F_q^n`.
    pub fn echelon_forms(&self, k: usize, n: usize) -> Vec<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        for pivots in combinations(n, k) {
            // free slots: row i, column j > pivot_i, j not a pivot
            let free: Vec<(usize, usize)> =
                (0..k).flat_map(|i| (pivots[i] + 1..n).filter(|j| !pivots.contains(j)).map(move |j| (i, j))).collect();
            let total = (self.q as usize).pow(free.len() as u32);
            for mut code in 0..total {
                let mut m = vec![vec![0u32; n]; k];
                for (i, &p) in pivots.iter().enumerate() {
                    m[i][p] = 1;
                }
                for &(i, j) in &free {
                    m[i][j] = (code % self.q as usize) as u32;
                    code /= self.q as usize;
                }
                out.push(m);
            }
        }
        out
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

impl FinitaryHallOracle for FqVectorSpaces {
    fn name(&self) -> String {
        format!("fq-vector-spaces(q={})", self.q)
    }

    fn classes(&self, bound: usize) -> Result<Vec<(String, usize)>> {
        if bound > self.max_dim {
            return Err(Error::SizeCap { cap: self.max_dim, what: "dimensions" });
        }
        Ok((0..=bound).map(|n| (format!("e{n:02}"), n)).collect())
    }

    fn count(&self, a: usize, b: usize, c: usize) -> u64 {
        if a + b != c {
            return 0;
        }
        self.echelon_forms(a, c).len() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleHallAlgebra {
    pub table: AlgebraTable,
    pub bound: usize,
    pub verified_triples: usize,
    pub skipped_triples: usize,
    /// Set when some triples could not be verified inside the bound.
    pub warning: Option<String>,
}

/// `e_A * e_B = Σ_C g(A,B;C) e_C`, truncated to classes of size at most
/// `bound`. Associativity is verified on every triple of total size at
/// most `bound`; the rest are counted and reported.
pub fn hall_from_oracle(o: &dyn FinitaryHallOracle, bound: usize) -> Result<OracleHallAlgebra> {
    let classes = o.classes(bound)?;
    let n = classes.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let entries: Vec<(u32, u32, u32, Rational)> = par::map(&pairs, |&(a, b)| {
        (0..n)
            .map(|c| (c, o.count(a, b, c)))
            .filter(|&(_, g)| g > 0)
            .map(|(c, g)| (a as u32, b as u32, c as u32, Rational::from_integer(g.into())))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let unit = classes.iter().position(|c| c.1 == 0).map(|z| vec![(z as u32, Rational::one())]);
    let table = AlgebraTable::new(classes.iter().map(|c| c.0.clone()).collect(), entries, unit)?;
    let size: HashMap<&str, usize> = classes.iter().map(|c| (c.0.as_str(), c.1)).collect();
    let sz = |i: u32| size[table.basis()[i as usize].as_str()];
    let one = |i: u32| vec![(i, Rational::one())];
    let (mut verified, mut skipped) = (0, 0);
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            for z in 0..n as u32 {
                if sz(x) + sz(y) + sz(z) > bound {
                    skipped += 1;
                    continue;
                }
                let lhs = table.multiply(table.product(x, y), &one(z));
                let rhs = table.multiply(&one(x), table.product(y, z));
                if lhs != rhs {
                    return Err(Error::Inconsistent(format!(
                        "associativity fails at ({}, {}, {})",
                        table.basis()[x as usize],
                        table.basis()[y as usize],
                        table.basis()[z as usize]
                    )));
                }
                verified += 1;
            }
        }
    }
    let warning = (skipped > 0).then(|| format!("associativity verified only for triples of total size <= {bound}; {skipped} triples skipped"));
    Ok(OracleHallAlgebra { table, bound, verified_triples: verified, skipped_triples: skipped, warning })
}

/// Double cosets `KgK`, labelled by their smallest element.
fn double_coset_basis(g: &FiniteGroup, k: &[usize]) -> Result<(Vec<Vec<usize>>, Vec<u32>, Vec<String>)> {
    let dcs = g.double_cosets(k)?;
    let mut which = vec![0u32; g.order()];
    for (i, d) in dcs.iter().enumerate() {
        for &x in d {
            which[x] = i as u32;
        }
    }
    let labels = dcs.iter().map(|d| format!("K{}K", g.label(*d.iter().min().unwrap()))).collect();
    Ok((dcs, which, labels))
}

/// Convolution of `K`-bi-invariant indicators:
/// `(f_1 * f_2)(x) = |K|^{-1} Σ_y f_1(y) f_2(y^{-1}x)`.
pub fn hecke_by_convolution(g: &FiniteGroup, k: &[usize]) -> Result<AlgebraTable> {
    let (dcs, which, labels) = double_coset_basis(g, k)?;
    let d = dcs.len();
    let norm = Rational::new(1.into(), k.len().into());
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).collect();
    let entries = par::map(&pairs, |&(a, b)| {
        let mut counts = vec![0u64; d];
        for (c, dc) in dcs.iter().enumerate() {
            let x = dc[0];
            counts[c] = (0..g.order()).filter(|&y| which[y] as usize == a && which[g.mul(g.inv(y), x) as usize] as usize == b).count() as u64;
        }
        counts.into_iter().enumerate().map(|(c, n)| (a as u32, b as u32, c as u32, Rational::from_integer(n.into()) * &norm)).collect::<Vec<_>>()
    });
    let unit = vec![(which[g.identity()], Rational::one())];
    AlgebraTable::new(labels, entries.into_iter().flatten(), Some(unit))
}

/// Transfer along `S_1 × S_1 ← S_2 → S_1` on the Hecke-Waldhausen
/// groupoid: `1_a * 1_b = ∂_{1*}(∂_2^* 1_a · ∂_0^* 1_b)`.
pub fn hecke_by_transfer(g: &FiniteGroup, k: &[usize]) -> Result<AlgebraTable> {
    let (dcs, which, labels) = double_coset_basis(g, k)?;
    let d = dcs.len();
    let hw = hecke_waldhausen(g, k, 2)?;
    let (s1, s2) = (hw.level(1), hw.level(2));
    let cosets = g.left_cosets(k)?;
    let e = cosets.len();
    // component of S_1 ↦ double coset of x^{-1}z for its representative (xK, zK)
    let class_of_component: Vec<u32> = s1
        .component_reps()
        .iter()
        .map(|&t| {
            let (x, z) = (cosets[t as usize % e][0], cosets[t as usize / e][0]);
            which[g.mul(g.inv(x), z) as usize]
        })
        .collect();
    let indicator = |a: usize| -> ClassFunction {
        class_of_component.iter().map(|&c| if c as usize == a { Rational::one() } else { Rational::zero() }).collect()
    };
    // ∂_{1*} is linear, so its kernel is built once and applied per pair
    let push = pushforward_kernel(s2, hw.face(2, 1), s1)?;
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).collect();
    let entries = par::map(&pairs, |&(a, b)| {
        let pa = pullback(s2, hw.face(2, 2), s1, &indicator(a));
        let pb = pullback(s2, hw.face(2, 0), s1, &indicator(b));
        let prod: ClassFunction = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
        let pushed = apply_kernel(&push, &prod);
        pushed.into_iter().enumerate().map(|(comp, v)| (a as u32, b as u32, class_of_component[comp], v)).collect::<Vec<_>>()
    });
    let entries: Vec<_> = entries.into_iter().flatten().collect();
    let unit = vec![(which[g.identity()], Rational::one())];
    AlgebraTable::new(labels, entries, Some(unit))
}

/// Hecke algebra of `(G, K)` by both methods; they must agree and the
/// result must be associative with unit `1_K`.
pub fn hecke_algebra(g: &FiniteGroup, k: &[usize]) -> Result<AlgebraTable> {
    let conv = hecke_by_convolution(g, k)?;
    let transfer = hecke_by_transfer(g, k)?;
    if conv != transfer {
        return Err(Error::Inconsistent("Hecke algebra: transfer and convolution tables differ".into()));
    }
    let report = verify_algebra(&conv);
    if !report.holds() {
        return Err(Error::Inconsistent(format!("Hecke algebra fails verification: {report:?}")));
    }
    Ok(conv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{nerve, twisted_cyclic_nerve, Endofunctor};
    use crate::pentagon::{nerve_of_solution, PentagonSolution};

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn nerve_gives_linear_envelope() {
        let c = FiniteCategory::ordinal(2);
        let h = hall_category(&nerve(&c, 4).unwrap()).unwrap();
        let t = h.to_table();
        for (i, j, k, v) in t.entries() {
            assert_eq!(*v, int(1));
            let (f, g) = (c.morphisms().iter().position(|m| m.label == t.basis()[i as usize]).unwrap(), c.morphisms().iter().position(|m| m.label == t.basis()[j as usize]).unwrap());
            let fg = c.compose(f as u32, g as u32).unwrap();
            assert_eq!(c.morphism(fg).label, t.basis()[k as usize]);
        }
        assert_eq!(t.entries().count(), 10);
    }

    #[test]
    fn trivial_pentagon_nerve_is_one_dimensional() {
        let h = hall_category(&nerve_of_solution(&PentagonSolution::identity(1), 4).unwrap()).unwrap();
        let t = h.to_table();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.coefficient(0, 0, 0), int(1));
        assert!(h.units.is_none());
    }

    #[test]
    fn factorization_algebras() {
        let trivial = FiniteCategory::from_group(&FiniteGroup::trivial());
        let t = factorization_algebra(&trivial, 0).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.coefficient(0, 0, 0), int(1));
        let z2 = FiniteCategory::from_group(&FiniteGroup::cyclic(2));
        let t = factorization_algebra(&z2, z2.identity(0)).unwrap();
        assert_eq!(t.basis().len(), 2);
        let (one, g) = (&t.basis()[0], &t.basis()[1]);
        assert_eq!(t.coefficient_by_label(g, g, one), Some(int(1)));
        assert_eq!(t.coefficient_by_label(g, g, g), Some(int(0)));
    }

    #[test]
    fn factorization_matches_cyclic_nerve() {
        let monoids = vec![
            FiniteCategory::from_group(&FiniteGroup::cyclic(2)),
            FiniteCategory::from_monoid(vec!["1".into(), "0".into()], &[0, 1, 1, 1], 0).unwrap(),
            FiniteCategory::from_group(&FiniteGroup::symmetric(3)),
            transformations_of_two(),
        ];
        for m in monoids {
            let x = twisted_cyclic_nerve(&m, &Endofunctor::identity(&m), 4).unwrap();
            let h = hall_category(&x).unwrap();
            for w in 0..m.morphisms().len() as u32 {
                let f = factorization_algebra(&m, w).unwrap();
                let a = h.at_object(x.index_of(0, &m.morphism(w).label).unwrap());
                // cyclic-nerve edge (u01, u10) = (B, A) is the basis element 1_{A,B}
                let a = a.relabeled(|l| {
                    let (b, a) = l.split_once(',').unwrap();
                    format!("({a},{b})")
                }).unwrap();
                assert_eq!(a, f);
            }
        }
    }

    // self-maps of {0,1} as (f(0), f(1)); `a;b` applies a first
    fn transformations_of_two() -> FiniteCategory {
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

    #[test]
    fn oracle_values() {
        let p = oracle_pointed_sets();
        assert_eq!(p.count(1, 1, 2), 2);
        assert_eq!(p.count(1, 1, 3), 0);
        let f3 = oracle_fq_vector_spaces(3, 4).unwrap();
        assert_eq!(f3.count(1, 1, 2), 4);
        assert_eq!(f3.count(2, 1, 2), 0);
        assert!(oracle_fq_vector_spaces(4, 2).is_err());
        assert!(oracle_fq_vector_spaces(2, 5).is_err());
        let h = hall_from_oracle(&oracle_fq_vector_spaces(2, 3).unwrap(), 3).unwrap();
        assert_eq!(h.table.coefficient_by_label("e01", "e01", "e02"), Some(int(3)));
        assert!(h.warning.is_some());
        let h = hall_from_oracle(&p, 4).unwrap();
        assert_eq!(h.table.coefficient_by_label("e01", "e01", "e02"), Some(int(2)));
    }

    #[test]
    fn hecke_examples() {
        let s3 = FiniteGroup::symmetric(3);
        let t = hecke_algebra(&s3, &s3.generated(&[1])).unwrap();
        assert_eq!(t.dim(), 2);
        let all: Vec<usize> = (0..6).collect();
        let t = hecke_algebra(&s3, &all).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.coefficient(0, 0, 0), int(1));
        let t = hecke_algebra(&s3, &[s3.identity()]).unwrap();
        assert_eq!(t.dim(), 6);
        for a in 0..6 {
            for b in 0..6 {
                let ab = s3.mul(a, b) as usize;
                let l = |x: usize| format!("K{}K", s3.label(x));
                assert_eq!(t.coefficient_by_label(&l(a), &l(b), &l(ab)), Some(int(1)));
            }
        }
    }

    #[test]
    fn perturbed_table_fails() {
        let s3 = FiniteGroup::symmetric(3);
        let t = hecke_algebra(&s3, &[s3.identity()]).unwrap();
        let bad = t.perturbed(1, 2, 3, int(1));
        let r = verify_algebra(&bad);
        assert!(!r.associative);
        assert!(r.failing_triple.is_some());
    }

    #[test]
    fn csv_and_json() {
        let t = factorization_algebra(&FiniteCategory::from_group(&FiniteGroup::cyclic(2)), 0).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("left,right,result,coefficient\n"));
        assert!(csv.contains("\"("));
        assert_eq!(AlgebraTable::from_json(&t.to_json()).unwrap(), t);
    }
}
