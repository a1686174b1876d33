use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::TruncatedSimplicialSet;
use crate::error::{Error, Result};
use crate::par;

/// A collection of nonempty subsets of `{0..n}`, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexCollection {
    n: usize,
    members: Vec<Vec<usize>>,
}

impl IndexCollection {
    pub fn new(n: usize, members: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut out = Vec::new();
        for mut m in members {
            m.sort_unstable();
            m.dedup();
            if m.is_empty() {
                return Err(Error::Invalid("empty member in index collection".into()));
            }
            if m[m.len() - 1] > n {
                return Err(Error::Invalid(format!("member {m:?} not inside [{n}]")));
            }
            out.push(m);
        }
        if out.is_empty() {
            return Err(Error::Invalid("index collection has no members".into()));
        }
        out.sort();
        out.dedup();
        Ok(IndexCollection { n, members: out })
    }

    /// `{[n]}`.
    pub fn full(n: usize) -> Self {
        IndexCollection { n, members: vec![(0..=n).collect()] }
    }

    /// `{{0,1},{1,2},…,{n-1,n}}`; for `n = 0` the single vertex.
    pub fn intervals(n: usize) -> Self {
        if n == 0 {
            return IndexCollection::full(0);
        }
        IndexCollection { n, members: (0..n).map(|i| vec![i, i + 1]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    /// Members not strictly contained in another member.
    pub fn maximal(&self) -> Vec<Vec<usize>> {
        self.members
            .iter()
            .filter(|m| !self.members.iter().any(|o| o.len() > m.len() && is_subset(m, o)))
            .cloned()
            .collect()
    }

    pub fn max_dim(&self) -> usize {
        self.members.iter().map(|m| m.len() - 1).max().unwrap_or(0)
    }

    pub fn union(&self, other: &IndexCollection) -> Result<IndexCollection> {
        if self.n != other.n {
            return Err(Error::Mismatch("index collections over different simplices".into()));
        }
        IndexCollection::new(self.n, self.members.iter().chain(&other.members).cloned())
    }

    /// Nonempty pairwise intersections `S ∩ S'`.
    pub fn intersections(&self, other: &IndexCollection) -> Result<IndexCollection> {
        if self.n != other.n {
            return Err(Error::Mismatch("index collections over different simplices".into()));
        }
        let mut out = Vec::new();
        for a in &self.members {
            for b in &other.members {
                let c = intersect(a, b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Invalid("collections are disjoint".into()));
        }
        IndexCollection::new(self.n, out)
    }

    /// Does every vertex set of `self` lie inside some member?
    pub fn covers_vertices(&self) -> bool {
        (0..=self.n).all(|v| self.members.iter().any(|m| m.contains(&v)))
    }
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// A compatible family, recorded by its values on the maximal members (in
/// sorted member order). Values on smaller subsets are faces of these.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Membrane {
    pub values: Vec<u32>,
}

impl Membrane {
    /// Value at a subset `j` of some maximal member.
    pub fn value_at(&self, x: &TruncatedSimplicialSet, maximal: &[Vec<usize>], j: &[usize]) -> Option<u32> {
        let (t, s) = maximal.iter().enumerate().find(|(_, s)| is_subset(j, s))?;
        let keep: Vec<usize> = j.iter().map(|v| s.binary_search(v).expect("subset")).collect();
        Some(x.restrict(s.len() - 1, self.values[t], &keep))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembraneSet {
    pub collection: IndexCollection,
    pub maximal: Vec<Vec<usize>>,
    /// Sorted lexicographically by values.
    pub membranes: Vec<Membrane>,
}

impl MembraneSet {
    pub fn len(&self) -> usize {
        self.membranes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.membranes.is_empty()
    }
}

struct Step {
    member: usize,
    level: usize,
    /// (earlier step, restriction path in that step's simplex, path in ours)
    overlaps: Vec<(usize, Vec<(usize, usize)>, Vec<(usize, usize)>)>,
    /// Mixed-radix weights for packing a key, when the product fits.
    radices: Option<Vec<u128>>,
    candidates: HashMap<Key, Vec<u32>>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Packed(u128),
    Raw(Vec<u32>),
}

fn make_key(radices: &Option<Vec<u128>>, values: impl Iterator<Item = u32>) -> Key {
    match radices {
        Some(r) => Key::Packed(values.zip(r).fold(0u128, |acc, (v, &r)| acc * r + v as u128)),
        None => Key::Raw(values.collect()),
    }
}

/// Join plan over the maximal members: each step indexes its level by the
/// restrictions to overlaps with earlier steps.
struct Plan {
    maximal: Vec<Vec<usize>>,
    steps: Vec<Step>,
}

impl Plan {
    fn new(x: &TruncatedSimplicialSet, coll: &IndexCollection) -> Result<Plan> {
        let need = coll.max_dim();
        if need > x.truncation() {
            return Err(Error::InsufficientTruncation { needed: need, available: x.truncation() });
        }
        let maximal = coll.maximal();
        // Greedy order: next member shares the most vertices with those placed.
        let mut order = vec![0usize];
        let mut placed: HashSet<usize> = maximal[0].iter().copied().collect();
        while order.len() < maximal.len() {
            let next = (0..maximal.len())
                .filter(|t| !order.contains(t))
                .max_by_key(|&t| (maximal[t].iter().filter(|v| placed.contains(v)).count(), usize::MAX - t))
                .expect("remaining member");
            placed.extend(maximal[next].iter().copied());
            order.push(next);
        }
        let mut steps: Vec<Step> = Vec::with_capacity(order.len());
        for (pos, &t) in order.iter().enumerate() {
            let s = &maximal[t];
            let level = s.len() - 1;
            let mut overlaps = Vec::new();
            for (prev_pos, &u) in order[..pos].iter().enumerate() {
                let o = intersect(s, &maximal[u]);
                if o.is_empty() {
                    continue;
                }
                let in_prev: Vec<usize> = o.iter().map(|v| maximal[u].binary_search(v).unwrap()).collect();
                let in_this: Vec<usize> = o.iter().map(|v| s.binary_search(v).unwrap()).collect();
                overlaps.push((
                    prev_pos,
                    TruncatedSimplicialSet::restriction_path(maximal[u].len() - 1, &in_prev),
                    TruncatedSimplicialSet::restriction_path(level, &in_this),
                ));
            }
            let sizes: Vec<u128> = overlaps.iter().map(|(_, _, p)| x.level_size(level - p.len()).max(1) as u128).collect();
            let radices = sizes.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r)).map(|_| sizes);
            let mut candidates: HashMap<Key, Vec<u32>> = HashMap::new();
            for y in 0..x.level_size(level) as u32 {
                let key = make_key(&radices, overlaps.iter().map(|(_, _, p)| x.follow(p, y)));
                candidates.entry(key).or_default().push(y);
            }
            steps.push(Step { member: t, level, overlaps, radices, candidates });
        }
        Ok(Plan { maximal, steps })
    }

    fn key_for(&self, x: &TruncatedSimplicialSet, step: &Step, assigned: &[u32]) -> Key {
        make_key(&step.radices, step.overlaps.iter().map(|(prev, p, _)| x.follow(p, assigned[*prev])))
    }

    fn count(&self, x: &TruncatedSimplicialSet) -> u128 {
        let mut assigned = Vec::with_capacity(self.steps.len());
        self.count_from(x, &mut assigned)
    }

    fn count_from(&self, x: &TruncatedSimplicialSet, assigned: &mut Vec<u32>) -> u128 {
        let pos = assigned.len();
        if pos == self.steps.len() {
            return 1;
        }
        let step = &self.steps[pos];
        let key = self.key_for(x, step, assigned);
        let Some(cands) = step.candidates.get(&key) else { return 0 };
        if pos + 1 == self.steps.len() {
            return cands.len() as u128;
        }
        let mut total = 0;
        for &c in cands {
            assigned.push(c);
            total += self.count_from(x, assigned);
            assigned.pop();
        }
        total
    }

    fn enumerate(&self, x: &TruncatedSimplicialSet) -> Vec<Membrane> {
        let mut out = Vec::new();
        let mut assigned = Vec::with_capacity(self.steps.len());
        self.enumerate_from(x, &mut assigned, &mut out);
        out.sort();
        out
    }

    fn enumerate_from(&self, x: &TruncatedSimplicialSet, assigned: &mut Vec<u32>, out: &mut Vec<Membrane>) {
        let pos = assigned.len();
        if pos == self.steps.len() {
            let mut values = vec![0u32; self.steps.len()];
            for (p, step) in self.steps.iter().enumerate() {
                values[step.member] = assigned[p];
            }
            out.push(Membrane { values });
            return;
        }
        let step = &self.steps[pos];
        let key = self.key_for(x, step, assigned);
        if let Some(cands) = step.candidates.get(&key) {
            for &c in cands {
                assigned.push(c);
                self.enumerate_from(x, assigned, out);
                assigned.pop();
            }
        }
    }

    /// Restriction of an n-simplex to every maximal member.
    fn image_fn(&self, n: usize) -> Vec<Vec<(usize, usize)>> {
        self.maximal.iter().map(|s| TruncatedSimplicialSet::restriction_path(n, s)).collect()
    }

    /// Does `values` (in member order) satisfy every overlap constraint?
    fn is_compatible(&self, x: &TruncatedSimplicialSet, values: &[u32]) -> bool {
        let assigned: Vec<u32> = self.steps.iter().map(|s| values[s.member]).collect();
        if self.steps.iter().enumerate().any(|(pos, step)| assigned[pos] as usize >= x.level_size(step.level)) {
            return false;
        }
        self.steps.iter().enumerate().all(|(pos, step)| {
            step.overlaps.iter().all(|(prev, pp, pt)| x.follow(pp, assigned[*prev]) == x.follow(pt, assigned[pos]))
        })
    }
}

/// All membranes of `x` over `coll`, in canonical order.
pub fn membrane_set(x: &TruncatedSimplicialSet, coll: &IndexCollection) -> Result<MembraneSet> {
    let plan = Plan::new(x, coll)?;
    let membranes = plan.enumerate(x);
    Ok(MembraneSet { collection: coll.clone(), maximal: plan.maximal, membranes })
}

/// Number of membranes, without materializing them.
pub fn membrane_count(x: &TruncatedSimplicialSet, coll: &IndexCollection) -> Result<u128> {
    Ok(Plan::new(x, coll)?.count(x))
}

/// Check whether a family of values on the maximal members is a membrane.
pub fn is_membrane(x: &TruncatedSimplicialSet, coll: &IndexCollection, m: &Membrane) -> Result<bool> {
    let plan = Plan::new(x, coll)?;
    Ok(m.values.len() == plan.maximal.len() && plan.is_compatible(x, &m.values))
}

/// The I-Segal map `X_n → X_I` together with its bijectivity verdict.
#[derive(Clone, Debug)]
pub struct SegalMap {
    pub membranes: MembraneSet,
    /// `images[x]` is the membrane restricted from `x ∈ X_n`.
    pub images: Vec<Membrane>,
    pub injective: bool,
    pub surjective: bool,
    pub failure: Option<MapFailure>,
}

impl SegalMap {
    pub fn is_bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

/// First failure of an I-Segal map in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapFailure {
    /// Two simplices of `X_n` with the same membrane.
    NotInjective { first: u32, second: u32 },
    /// Smallest membrane outside the image.
    NotSurjective { membrane: Membrane },
}

fn images(x: &TruncatedSimplicialSet, plan: &Plan, n: usize) -> Vec<Vec<u32>> {
    let paths = plan.image_fn(n);
    par::map_range(x.level_size(n), |e| paths.iter().map(|p| x.follow(p, e as u32)).collect())
}

fn first_collision(imgs: &[Vec<u32>]) -> Option<(u32, u32)> {
    let mut seen: HashMap<&[u32], u32> = HashMap::with_capacity(imgs.len());
    for (e, img) in imgs.iter().enumerate() {
        if let Some(&prev) = seen.get(img.as_slice()) {
            return Some((prev, e as u32));
        }
        seen.insert(img, e as u32);
    }
    None
}

/// Images packed as mixed-radix integers, one digit per maximal member, or
/// `None` if the product of the level sizes overflows.
fn packed_images(x: &TruncatedSimplicialSet, plan: &Plan, n: usize) -> Option<Vec<u128>> {
    let radices: Vec<u128> = plan.maximal.iter().map(|s| x.level_size(s.len() - 1) as u128).collect();
    radices.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r.max(1)))?;
    let paths = plan.image_fn(n);
    Some(par::map_range(x.level_size(n), |e| {
        paths.iter().zip(&radices).fold(0u128, |acc, (p, &r)| acc * r + x.follow(p, e as u32) as u128)
    }))
}

/// Same answer as `first_collision`: the smallest `e` whose image occurred
/// before, paired with that first occurrence.
fn first_packed_collision(codes: &[u128]) -> Option<(u32, u32)> {
    let mut tagged: Vec<(u128, u32)> = codes.iter().enumerate().map(|(e, &c)| (c, e as u32)).collect();
    tagged.sort_unstable();
    tagged.windows(2).filter(|w| w[0].0 == w[1].0).map(|w| w[1].1).min().map(|second| {
        let code = codes[second as usize];
        let first = tagged.partition_point(|&(c, _)| c < code);
        (tagged[first].1, second)
    })
}

pub fn segal_map(x: &TruncatedSimplicialSet, coll: &IndexCollection) -> Result<SegalMap> {
    let n = coll.n();
    if n > x.truncation() {
        return Err(Error::InsufficientTruncation { needed: n, available: x.truncation() });
    }
    let plan = Plan::new(x, coll)?;
    let imgs = images(x, &plan, n);
    let membranes = plan.enumerate(x);
    let collision = first_collision(&imgs);
    let hit: HashSet<&[u32]> = imgs.iter().map(Vec::as_slice).collect();
    let missing = membranes.iter().find(|m| !hit.contains(m.values.as_slice())).cloned();
    let failure = match (collision, &missing) {
        (Some((a, b)), _) => Some(MapFailure::NotInjective { first: a, second: b }),
        (None, Some(m)) => Some(MapFailure::NotSurjective { membrane: m.clone() }),
        (None, None) => None,
    };
    Ok(SegalMap {
        injective: collision.is_none(),
        surjective: missing.is_none(),
        failure,
        images: imgs.into_iter().map(|values| Membrane { values }).collect(),
        membranes: MembraneSet { collection: coll.clone(), maximal: plan.maximal, membranes },
    })
}

/// Bijectivity of the I-Segal map, returning the first failure if any. Only
/// enumerates membranes when surjectivity actually fails.
pub(crate) fn check_segal_bijective(x: &TruncatedSimplicialSet, coll: &IndexCollection) -> Result<Option<(Vec<Vec<usize>>, MapFailure)>> {
    let n = coll.n();
    if n > x.truncation() {
        return Err(Error::InsufficientTruncation { needed: n, available: x.truncation() });
    }
    let plan = Plan::new(x, coll)?;
    if let Some(codes) = packed_images(x, &plan, n) {
        if let Some((a, b)) = first_packed_collision(&codes) {
            return Ok(Some((plan.maximal, MapFailure::NotInjective { first: a, second: b })));
        }
        if plan.count(x) == codes.len() as u128 {
            return Ok(None);
        }
    }
    let imgs = images(x, &plan, n);
    if let Some((a, b)) = first_collision(&imgs) {
        return Ok(Some((plan.maximal, MapFailure::NotInjective { first: a, second: b })));
    }
    if plan.count(x) == imgs.len() as u128 {
        return Ok(None);
    }
    let hit: HashSet<&[u32]> = imgs.iter().map(Vec::as_slice).collect();
    let missing = plan.enumerate(x).into_iter().find(|m| !hit.contains(m.values.as_slice()));
    match missing {
        Some(membrane) => Ok(Some((plan.maximal, MapFailure::NotSurjective { membrane }))),
        None => Err(Error::Inconsistent("membrane count disagrees with enumeration".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset_core::standard_simplex;

    #[test]
    fn collection_is_sorted_and_deduplicated() {
        let c = IndexCollection::new(3, vec![vec![2, 0, 3], vec![0, 1, 2], vec![3, 2, 0]]).unwrap();
        assert_eq!(c.members(), &[vec![0, 1, 2], vec![0, 2, 3]]);
        assert!(IndexCollection::new(2, vec![vec![0, 3]]).is_err());
        assert!(IndexCollection::new(2, vec![vec![]]).is_err());
    }

    #[test]
    fn packed_collision_matches_hashed() {
        let rows: Vec<Vec<u32>> = (0..200u32).map(|e| vec![(e * 7) % 13, (e * 3) % 11]).collect();
        let codes: Vec<u128> = rows.iter().map(|r| r[0] as u128 * 11 + r[1] as u128).collect();
        assert_eq!(first_packed_collision(&codes), first_collision(&rows));
        assert!(first_collision(&rows).is_some());
        let distinct: Vec<u128> = (0..50).rev().collect();
        assert_eq!(first_packed_collision(&distinct), None);
    }

    #[test]
    fn full_collection_is_identity() {
        let x = standard_simplex(1, 1).unwrap();
        let m = segal_map(&x, &IndexCollection::full(1)).unwrap();
        assert_eq!(m.membranes.len(), 3);
        assert!(m.is_bijective());
    }

    #[test]
    fn spine_of_delta2() {
        let x = standard_simplex(2, 2).unwrap();
        let c = IndexCollection::intervals(2);
        assert_eq!(membrane_set(&x, &c).unwrap().len(), 10);
        assert!(segal_map(&x, &c).unwrap().is_bijective());
    }

    #[test]
    fn delta3_square_triangulation() {
        let x = standard_simplex(3, 3).unwrap();
        let c = IndexCollection::new(3, vec![vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
        assert!(segal_map(&x, &c).unwrap().is_bijective());
        assert!(check_segal_bijective(&x, &c).unwrap().is_none());
    }

    #[test]
    fn insufficient_truncation() {
        let x = standard_simplex(2, 1).unwrap();
        let c = IndexCollection::full(2);
        assert!(matches!(membrane_set(&x, &c), Err(Error::InsufficientTruncation { .. })));
    }

    #[test]
    fn value_at_reads_faces() {
        let x = standard_simplex(2, 2).unwrap();
        let c = IndexCollection::new(2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let ms = membrane_set(&x, &c).unwrap();
        let m = &ms.membranes[0];
        let v = m.value_at(&x, &ms.maximal, &[1]).unwrap();
        let from_first = x.face(1, 1, m.values[1]);
        assert_eq!(v, x.face(1, 0, m.values[0]));
        assert_eq!(v, from_first);
    }
}
