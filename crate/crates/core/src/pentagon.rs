//! Set-theoretic solutions of the pentagon equation, their semi-simplicial
//! nerves, extraction from 2-Segal sets, and the positive rational cluster
//! solution.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::par;
use crate::segal_check::{is_2segal, Strategy};
use crate::sset_core::{build_keyed, join_label, Bounds, Budget, Kind, TruncatedSimplicialSet};
use crate::Rational;

/// Largest carrier accepted by [`enumerate_solutions`].
pub const MAX_ENUMERATION_CARRIER: usize = 4;

/// A finite set `C` with a bijection `α: C×C → C×C` satisfying
/// `α₂₃∘α₁₃∘α₁₂ = α₁₂∘α₂₃`. `alpha[x*n+y] = α(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PentagonSolution {
    carrier: Vec<String>,
    alpha: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PentagonVerdict {
    pub holds: bool,
    /// First `(x, y, z)` in lexicographic order where the two sides differ.
    pub failing_triple: Option<[u32; 3]>,
}

/// Both sides of the pentagon equation at `(x, y, z)`, composing right to
/// left: `α₂₃(α₁₃(α₁₂(x,y,z)))` and `α₁₂(α₂₃(x,y,z))`.
pub fn pentagon_sides<T: Clone>(alpha: impl Fn(&T, &T) -> (T, T), x: &T, y: &T, z: &T) -> ([T; 3], [T; 3]) {
    let (a, b) = alpha(x, y);
    let (a, c) = alpha(&a, z);
    let (b, c) = alpha(&b, &c);
    let (y2, z2) = alpha(y, z);
    let (x2, y2) = alpha(x, &y2);
    ([a, b, c], [x2, y2, z2])
}

/// Sides of the mirrored equation `α₁₂∘α₁₃∘α₂₃ = α₂₃∘α₁₂`, which is the
/// pentagon equation for `α⁻¹`.
pub fn mirrored_pentagon_sides<T: Clone>(alpha: impl Fn(&T, &T) -> (T, T), x: &T, y: &T, z: &T) -> ([T; 3], [T; 3]) {
    let (b, c) = alpha(y, z);
    let (a, c) = alpha(x, &c);
    let (a, b) = alpha(&a, &b);
    let (x2, y2) = alpha(x, y);
    let (y2, z2) = alpha(&y2, z);
    ([a, b, c], [x2, y2, z2])
}

/// Exhaustive check of a total table on `n` points. Errors if the table is
/// malformed or not a bijection.
pub fn verify_pentagon(n: usize, alpha: &[[u32; 2]]) -> Result<PentagonVerdict> {
    check_bijection(n, alpha)?;
    let f = |x: &u32, y: &u32| {
        let [a, b] = alpha[*x as usize * n + *y as usize];
        (a, b)
    };
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            for z in 0..n as u32 {
                let (l, r) = pentagon_sides(f, &x, &y, &z);
                if l != r {
                    return Ok(PentagonVerdict { holds: false, failing_triple: Some([x, y, z]) });
                }
            }
        }
    }
    Ok(PentagonVerdict { holds: true, failing_triple: None })
}

fn check_bijection(n: usize, alpha: &[[u32; 2]]) -> Result<()> {
    if alpha.len() != n * n {
        return Err(Error::Invalid(format!("alpha table has {} entries, expected {}", alpha.len(), n * n)));
    }
    let mut seen = vec![false; n * n];
    for &[a, b] in alpha {
        if a as usize >= n || b as usize >= n {
            return Err(Error::Invalid("alpha value outside the carrier".into()));
        }
        let k = a as usize * n + b as usize;
        if seen[k] {
            return Err(Error::Invalid(format!("alpha is not a bijection: ({a}, {b}) hit twice")));
        }
        seen[k] = true;
    }
    Ok(())
}

impl PentagonSolution {
    pub fn new(carrier: Vec<String>, alpha: Vec<[u32; 2]>) -> Result<Self> {
        let v = verify_pentagon(carrier.len(), &alpha)?;
        if let Some([x, y, z]) = v.failing_triple {
            return Err(Error::Invalid(format!(
                "pentagon equation fails at ({}, {}, {})",
                carrier[x as usize], carrier[y as usize], carrier[z as usize]
            )));
        }
        let mut sorted = carrier.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != carrier.len() {
            return Err(Error::Invalid("duplicate carrier label".into()));
        }
        Ok(PentagonSolution { carrier, alpha })
    }

    /// `α = id` on `n` points.
    pub fn identity(n: usize) -> Self {
        let alpha = (0..n * n).map(|k| [(k / n) as u32, (k % n) as u32]).collect();
        PentagonSolution::new(numbered(n), alpha).expect("identity solution")
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn table(&self) -> &[[u32; 2]] {
        &self.alpha
    }

    #[inline]
    pub fn alpha(&self, x: u32, y: u32) -> (u32, u32) {
        let [a, b] = self.alpha[x as usize * self.len() + y as usize];
        (a, b)
    }

    /// The same solution with the carrier listed in `order`.
    pub fn reordered(&self, order: &[String]) -> Result<Self> {
        let n = self.len();
        let pos: Vec<u32> = self
            .carrier
            .iter()
            .map(|l| order.iter().position(|o| o == l).map(|p| p as u32))
            .collect::<Option<_>>()
            .filter(|_: &Vec<u32>| order.len() == n)
            .ok_or_else(|| Error::Mismatch("order is not a permutation of the carrier".into()))?;
        Ok(PentagonSolution { carrier: order.to_vec(), alpha: relabel(n, &self.alpha, &pos) })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PentagonSolution = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        PentagonSolution::new(raw.carrier, raw.alpha)
    }
}

impl fmt::Display for PentagonSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.carrier;
        for x in 0..self.len() as u32 {
            for y in 0..self.len() as u32 {
                let (a, b) = self.alpha(x, y);
                writeln!(f, "({}, {}) -> ({}, {})", c[x as usize], c[y as usize], c[a as usize], c[b as usize])?;
            }
        }
        Ok(())
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Table of the solution transported along `x ↦ perm[x]`.
fn relabel(n: usize, alpha: &[[u32; 2]], perm: &[u32]) -> Vec<[u32; 2]> {
    let mut out = vec![[0, 0]; n * n];
    for x in 0..n {
        for y in 0..n {
            let [a, b] = alpha[x * n + y];
            out[perm[x] as usize * n + perm[y] as usize] = [perm[a as usize], perm[b as usize]];
        }
    }
    out
}

/// `α(x, y) = (xy, y)`.
pub fn group_solution(g: &FiniteGroup) -> PentagonSolution {
    let n = g.order();
    let alpha = (0..n * n).map(|k| [g.mul(k / n, k % n), (k % n) as u32]).collect();
    PentagonSolution::new(g.labels().to_vec(), alpha).expect("group solutions satisfy the pentagon equation")
}

/// All values `x_{ijk}` of the system determined by the fan values
/// `x_{0,j,j+1}`, stored at `i*(n+1)² + j*(n+1) + k`.
fn system_from_fan(sol: &PentagonSolution, n: usize, fan: &[u32]) -> Vec<u32> {
    let m = n + 1;
    let at = |i: usize, j: usize, k: usize| i * m * m + j * m + k;
    let mut x = vec![u32::MAX; m * m * m];
    for j in 1..n {
        x[at(0, j, j + 1)] = fan[j - 1];
    }
    // cocycle on (0, j, l-1, l): α(x_{0,j,l-1}, x_{0,l-1,l}) = (x_{0,j,l}, x_{j,l-1,l})
    for gap in 2..n {
        for j in 1..=n - gap {
            let l = j + gap;
            x[at(0, j, l)] = sol.alpha(x[at(0, j, l - 1)], x[at(0, l - 1, l)]).0;
        }
    }
    for j in 1..n {
        for k in j + 1..n {
            for l in k + 1..=n {
                x[at(j, k, l)] = sol.alpha(x[at(0, j, k)], x[at(0, k, l)]).1;
            }
        }
    }
    x
}

/// The semi-simplicial nerve: `X_0 = X_1 = pt`, and `X_n` for `n ≥ 2` the
/// systems `(x_{ijk})` with `α(x_{ijk}, x_{ikl}) = (x_{ijl}, x_{jkl})` for
/// all `i<j<k<l`, keyed by their fan values.
pub fn nerve_of_solution(sol: &PentagonSolution, bounds: impl Into<Bounds>) -> Result<TruncatedSimplicialSet> {
    let b = bounds.into();
    let c = sol.len() as u32;
    let mut budget = Budget::new(b.max_simplices);
    let mut levels: Vec<Vec<Vec<u32>>> = Vec::new();
    for n in 0..=b.level {
        let level: Vec<Vec<u32>> = if n < 2 {
            vec![Vec::new()]
        } else {
            let size = (c as usize).checked_pow((n - 1) as u32).filter(|&s| s <= b.max_simplices);
            budget.spend(size.unwrap_or(usize::MAX / 2))?;
            let mut all = vec![Vec::new()];
            for _ in 1..n {
                all = all.into_iter().flat_map(|k: Vec<u32>| (0..c).map(move |v| [k.as_slice(), &[v]].concat())).collect();
            }
            all
        };
        if n < 2 {
            budget.spend(1)?;
        }
        levels.push(level);
    }
    let label = |n: usize, k: &Vec<u32>| {
        if n < 2 {
            "*".to_string()
        } else {
            let parts: Vec<&str> = k.iter().map(|&v| sol.carrier[v as usize].as_str()).collect();
            join_label(&parts)
        }
    };
    let face = |n: usize, i: usize, k: &Vec<u32>| -> Vec<u32> {
        if n <= 2 {
            return Vec::new();
        }
        let m = n + 1;
        let x = system_from_fan(sol, n, k);
        let v: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
        (1..n - 1).map(|j| x[v[0] * m * m + v[j] * m + v[j + 1]]).collect()
    };
    build_keyed(Kind::SemiSimplicial, levels, &label, &face, None)
}

/// Recover `(C, α)` from a 2-Segal set with one vertex and one edge:
/// `C = X_2` and `α(∂_3 s, ∂_1 s) = (∂_2 s, ∂_0 s)` for `s ∈ X_3`.
pub fn extract_solution(x: &TruncatedSimplicialSet) -> Result<PentagonSolution> {
    if x.truncation() < 4 {
        return Err(Error::InsufficientTruncation { needed: 4, available: x.truncation() });
    }
    if x.level_size(0) != 1 || x.level_size(1) != 1 {
        return Err(Error::Hypothesis(format!(
            "need one vertex and one edge, found {} and {}",
            x.level_size(0),
            x.level_size(1)
        )));
    }
    let v = is_2segal(x, 4, Strategy::AllTriangulations)?;
    if let Some(w) = v.witnesses.first() {
        return Err(Error::Hypothesis(format!("not 2-Segal up to level 4: {w:?}")));
    }
    let n = x.level_size(2);
    let mut alpha = vec![[u32::MAX; 2]; n * n];
    for s in 0..x.level_size(3) as u32 {
        let (a, b) = (x.face(3, 3, s), x.face(3, 1, s));
        alpha[a as usize * n + b as usize] = [x.face(3, 2, s), x.face(3, 0, s)];
    }
    PentagonSolution::new(x.labels(2).to_vec(), alpha)
}

/// `α(x, y) = (x•y, x∗y)` and the three identities they satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedOperations {
    /// `dot[x*n+y] = x•y`
    pub dot: Vec<u32>,
    /// `star[x*n+y] = x∗y`
    pub star: Vec<u32>,
    /// First failing triple of `(x•y)•z = x•(y•z)`.
    pub associativity: Option<[u32; 3]>,
    /// First failing triple of `(x∗y)•((x•y)∗z) = x∗(y•z)`.
    pub mixed: Option<[u32; 3]>,
    /// First failing triple of `(x∗y)∗((x•y)∗z) = y∗z`.
    pub star_identity: Option<[u32; 3]>,
}

impl DerivedOperations {
    pub fn all_hold(&self) -> bool {
        self.associativity.is_none() && self.mixed.is_none() && self.star_identity.is_none()
    }
}

pub fn derived_operations(sol: &PentagonSolution) -> DerivedOperations {
    let n = sol.len();
    let dot: Vec<u32> = sol.alpha.iter().map(|p| p[0]).collect();
    let star: Vec<u32> = sol.alpha.iter().map(|p| p[1]).collect();
    let d = |x: u32, y: u32| dot[x as usize * n + y as usize];
    let s = |x: u32, y: u32| star[x as usize * n + y as usize];
    let first = |f: &dyn Fn(u32, u32, u32) -> bool| -> Option<[u32; 3]> {
        let n = n as u32;
        (0..n * n * n).map(|k| [k / (n * n), (k / n) % n, k % n]).find(|&[x, y, z]| !f(x, y, z))
    };
    DerivedOperations {
        associativity: first(&|x, y, z| d(d(x, y), z) == d(x, d(y, z))),
        mixed: first(&|x, y, z| d(s(x, y), s(d(x, y), z)) == s(x, d(y, z))),
        star_identity: first(&|x, y, z| s(s(x, y), s(d(x, y), z)) == s(y, z)),
        dot,
        star,
    }
}

/// All solutions on `n` points; with `dedup`, one per relabeling orbit, each
/// the lexicographically least table in its orbit. Output is sorted.
pub fn enumerate_solutions(n: usize, dedup: bool) -> Result<Vec<PentagonSolution>> {
    if n > MAX_ENUMERATION_CARRIER {
        return Err(Error::SizeCap { cap: MAX_ENUMERATION_CARRIER, what: "carrier points for enumeration" });
    }
    if n == 0 {
        return Ok(vec![PentagonSolution { carrier: Vec::new(), alpha: Vec::new() }]);
    }
    let nn = n * n;
    // branch on the value of α(0, 0)
    let mut tables: Vec<Vec<[u32; 2]>> = par::map_range(nn, |first| {
        let mut s = Search { n, alpha: vec![None; nn], used: vec![false; nn], found: Vec::new() };
        s.alpha[0] = Some([(first / n) as u32, (first % n) as u32]);
        s.used[first] = true;
        if s.consistent() {
            s.run(1);
        }
        s.found
    })
    .into_iter()
    .flatten()
    .collect();
    if dedup {
        let perms = permutations(n);
        tables = tables.into_iter().map(|t| perms.iter().map(|p| relabel(n, &t, p)).min().unwrap()).collect();
        tables.sort();
        tables.dedup();
    } else {
        tables.sort();
    }
    Ok(tables.into_iter().map(|alpha| PentagonSolution { carrier: numbered(n), alpha }).collect())
}

struct Search {
    n: usize,
    alpha: Vec<Option<[u32; 2]>>,
    used: Vec<bool>,
    found: Vec<Vec<[u32; 2]>>,
}

impl Search {
    fn run(&mut self, pos: usize) {
        if pos == self.alpha.len() {
            self.found.push(self.alpha.iter().map(|a| a.unwrap()).collect());
            return;
        }
        for v in 0..self.alpha.len() {
            if self.used[v] {
                continue;
            }
            self.alpha[pos] = Some([(v / self.n) as u32, (v % self.n) as u32]);
            self.used[v] = true;
            if self.consistent() {
                self.run(pos + 1);
            }
            self.used[v] = false;
        }
        self.alpha[pos] = None;
    }

    /// No triple whose sides are both computable disagrees.
    fn consistent(&self) -> bool {
        let n = self.n as u32;
        let f = |x: u32, y: u32| self.alpha[(x * n + y) as usize];
        for x in 0..n {
            for y in 0..n {
                let Some([a, b]) = f(x, y) else { continue };
                for z in 0..n {
                    let lhs = f(a, z).and_then(|[a2, c]| f(b, c).map(|[b2, c2]| [a2, b2, c2]));
                    let Some(lhs) = lhs else { continue };
                    let rhs = f(y, z).and_then(|[y2, z2]| f(x, y2).map(|[x2, y3]| [x2, y3, z2]));
                    if rhs.is_some_and(|r| r != lhs) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..n as u32).collect();
    heap(n, &mut cur, &mut out);
    out.sort();
    out
}

fn heap(k: usize, a: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

/// A point of the positive quadrant `Q_{>0}²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalClusterPoint {
    pub c0: Rational,
    pub c2: Rational,
}

impl RationalClusterPoint {
    pub fn new(c0: Rational, c2: Rational) -> Result<Self> {
        if c0 <= Rational::zero() || c2 <= Rational::zero() {
            return Err(Error::Invalid("cluster coordinates must be positive".into()));
        }
        Ok(RationalClusterPoint { c0, c2 })
    }

    pub fn from_ints(n0: i64, d0: i64, n2: i64, d2: i64) -> Result<Self> {
        if d0 == 0 || d2 == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        RationalClusterPoint::new(Rational::new(n0.into(), d0.into()), Rational::new(n2.into(), d2.into()))
    }

    /// Product of lower-triangular matrices `[[c0, 0], [c2, 1]]`.
    pub fn matrix_product(&self, other: &Self) -> Self {
        RationalClusterPoint { c0: &self.c0 * &other.c0, c2: &self.c2 * &other.c0 + &other.c2 }
    }
}

impl fmt::Display for RationalClusterPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c0, self.c2)
    }
}

#[derive(Serialize, Deserialize)]
struct ClusterPointJson {
    c0: [String; 2],
    c2: [String; 2],
}

fn ratio_json(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn ratio_parse(p: &[String; 2]) -> std::result::Result<Rational, String> {
    let n: num_bigint::BigInt = p[0].parse().map_err(|_| format!("bad numerator {}", p[0]))?;
    let d: num_bigint::BigInt = p[1].parse().map_err(|_| format!("bad denominator {}", p[1]))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(n, d))
}

impl Serialize for RationalClusterPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClusterPointJson { c0: ratio_json(&self.c0), c2: ratio_json(&self.c2) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalClusterPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ClusterPointJson::deserialize(d)?;
        let c0 = ratio_parse(&j.c0).map_err(serde::de::Error::custom)?;
        let c2 = ratio_parse(&j.c2).map_err(serde::de::Error::custom)?;
        RationalClusterPoint::new(c0, c2).map_err(serde::de::Error::custom)
    }
}

/// `(λ, μ) ↦ (λ', μ')` with `λ'_0 = λ_0 / (1 + λ_2 μ_0 / μ_2)`,
/// `λ'_2 = λ_2 / (μ_2 (1 + λ_2 μ_0 / μ_2))`, `μ'_0 = μ_0 λ_0`,
/// `μ'_2 = μ_0 λ_2 + μ_2`.
pub fn cluster_alpha(l: &RationalClusterPoint, m: &RationalClusterPoint) -> (RationalClusterPoint, RationalClusterPoint) {
    let k = Rational::one() + &l.c2 * &m.c0 / &m.c2;
    let l2 = RationalClusterPoint { c0: &l.c0 / &k, c2: &l.c2 / (&m.c2 * &k) };
    let m2 = RationalClusterPoint { c0: &m.c0 * &l.c0, c2: &m.c0 * &l.c2 + &m.c2 };
    (l2, m2)
}

/// Inverse of [`cluster_alpha`].
pub fn cluster_alpha_inverse(l: &RationalClusterPoint, m: &RationalClusterPoint) -> (RationalClusterPoint, RationalClusterPoint) {
    let d = &l.c0 + &l.c2 * &m.c0;
    let l2 = RationalClusterPoint { c0: d.clone(), c2: &l.c2 * &m.c2 };
    let m2 = RationalClusterPoint { c0: &m.c0 / &d, c2: &l.c0 * &m.c2 / &d };
    (l2, m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{nerve, nerve_semicategory, FiniteCategory, FiniteSemicategory};
    use crate::segal_check::{path_space_initial, suspension_left};
    use crate::sset_core::find_isomorphism;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn basic_solutions() {
        assert!(verify_pentagon(2, PentagonSolution::identity(2).table()).unwrap().holds);
        let z2 = group_solution(&FiniteGroup::cyclic(2));
        assert_eq!(z2.table(), &[[0, 0], [0, 1], [1, 0], [1, 1]].map(|[x, y]| [x ^ y, y]));
        assert_eq!(group_solution(&FiniteGroup::trivial()).table(), PentagonSolution::identity(1).table());
        assert_eq!(group_solution(&FiniteGroup::symmetric(3)).table().len(), 36);
    }

    #[test]
    fn swap_is_not_a_solution() {
        let swap = vec![[0, 0], [1, 0], [0, 1], [1, 1]];
        let v = verify_pentagon(2, &swap).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_triple, Some([0, 1, 0]));
    }

    #[test]
    fn non_bijection_rejected() {
        assert!(verify_pentagon(2, &[[0, 0], [0, 0], [1, 0], [1, 1]]).is_err());
        assert!(verify_pentagon(2, &[[0, 0]]).is_err());
    }

    #[test]
    fn nerve_sizes_and_round_trip() {
        let sol = group_solution(&FiniteGroup::cyclic(2));
        let x = nerve_of_solution(&sol, 4).unwrap();
        assert_eq!(x.level_sizes(), vec![1, 1, 2, 4, 8]);
        assert!(x.validate().is_empty());
        let back = extract_solution(&x).unwrap().reordered(sol.carrier()).unwrap();
        assert_eq!(back, sol);
    }

    #[test]
    fn suspension_extracts_group_solution() {
        let g = FiniteGroup::symmetric(3);
        let x = suspension_left(&nerve(&FiniteCategory::from_group(&g), 3).unwrap()).unwrap();
        let sol = extract_solution(&x).unwrap().reordered(g.labels()).unwrap();
        assert_eq!(sol, group_solution(&g));
    }

    #[test]
    fn path_space_is_dot_semigroup_nerve() {
        for sol in enumerate_solutions(2, false).unwrap() {
            let ops = derived_operations(&sol);
            let semi = FiniteSemicategory::from_semigroup(sol.carrier().to_vec(), &ops.dot).unwrap();
            let p = path_space_initial(&nerve_of_solution(&sol, 4).unwrap()).unwrap();
            assert!(find_isomorphism(&p, &nerve_semicategory(&semi, 3).unwrap()).is_some());
        }
    }

    #[test]
    fn derived_operations_of_group_and_identity() {
        let g = FiniteGroup::cyclic(3);
        let ops = derived_operations(&group_solution(&g));
        assert!(ops.all_hold());
        assert_eq!(ops.dot, g.table());
        assert!(ops.star.iter().enumerate().all(|(k, &s)| s as usize == k % 3));
        let ops = derived_operations(&PentagonSolution::identity(3));
        assert!(ops.all_hold());
        assert!(ops.dot.iter().enumerate().all(|(k, &d)| d as usize == k / 3));
    }

    #[test]
    fn golden_counts() {
        let counts: Vec<(usize, usize)> =
            (1..=3).map(|n| (enumerate_solutions(n, false).unwrap().len(), enumerate_solutions(n, true).unwrap().len())).collect();
        assert_eq!(counts, vec![(1, 1), (5, 3), (7, 3)]);
        assert!(enumerate_solutions(5, true).is_err());
    }

    #[test]
    fn cluster_sample() {
        let one = RationalClusterPoint::from_ints(1, 1, 1, 1).unwrap();
        let (a, b) = cluster_alpha(&one, &one);
        assert_eq!((a.c0, a.c2), (r(1, 2), r(1, 2)));
        assert_eq!((b.c0, b.c2), (r(1, 1), r(2, 1)));
    }

    #[test]
    fn cluster_inverse_and_pentagon() {
        let p = RationalClusterPoint::from_ints(1, 1, 2, 1).unwrap();
        let q = RationalClusterPoint::from_ints(3, 1, 1, 1).unwrap();
        let s = RationalClusterPoint::from_ints(2, 1, 5, 1).unwrap();
        let (a, b) = cluster_alpha(&p, &q);
        assert_eq!(cluster_alpha_inverse(&a, &b), (p.clone(), q.clone()));
        assert_eq!(b, p.matrix_product(&q));
        let f = |x: &RationalClusterPoint, y: &RationalClusterPoint| cluster_alpha(x, y);
        let g = |x: &RationalClusterPoint, y: &RationalClusterPoint| cluster_alpha_inverse(x, y);
        let (l, rr) = mirrored_pentagon_sides(f, &p, &q, &s);
        assert_eq!(l, rr);
        let (l, rr) = pentagon_sides(g, &p, &q, &s);
        assert_eq!(l, rr);
    }

    #[test]
    fn cluster_json_round_trip() {
        let p = RationalClusterPoint::from_ints(3, 7, 22, 5).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<RationalClusterPoint>(&s).unwrap(), p);
        assert!(serde_json::from_str::<RationalClusterPoint>(r#"{"c0":["-1","2"],"c2":["1","1"]}"#).is_err());
    }

    #[test]
    fn solution_json_round_trip() {
        let sol = group_solution(&FiniteGroup::cyclic(3));
        assert_eq!(PentagonSolution::from_json(&sol.to_json()).unwrap(), sol);
    }
}
