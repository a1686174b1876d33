//! Triangulations and polygonal subdivisions of the convex polygon with
//! vertices `0..=n`, flips and Poincaré dual trees.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::sset_core::IndexCollection;

/// Largest `n` for which subdivisions are enumerated.
pub const MAX_SUBDIVISION_N: usize = 8;

/// Triangles are sorted triples, stored in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangulation {
    n: usize,
    triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    pub fn new(n: usize, triangles: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let mut ts: Vec<[usize; 3]> = triangles
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        ts.sort_unstable();
        if n < 2 {
            return Err(Error::Invalid("a triangulation needs n >= 2".into()));
        }
        if ts.len() != n - 1 || ts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("expected {} distinct triangles", n - 1)));
        }
        if ts.iter().any(|t| t[0] == t[1] || t[1] == t[2] || t[2] > n) {
            return Err(Error::Invalid("degenerate or out-of-range triangle".into()));
        }
        let mut used = vec![false; ts.len()];
        if !consume(&ts, &mut used, 0, n) || used.iter().any(|u| !u) {
            return Err(Error::Invalid("triangles do not tile the polygon".into()));
        }
        Ok(Triangulation { n, triangles: ts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn to_collection(&self) -> IndexCollection {
        IndexCollection::new(self.n, self.triangles.iter().map(|t| t.to_vec())).expect("valid triangles")
    }

    /// Interior edges, sorted.
    pub fn diagonals(&self) -> Vec<(usize, usize)> {
        let mut d: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])])
            .filter(|&(a, b)| b - a > 1 && !(a == 0 && b == self.n))
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Replace a diagonal by the other diagonal of its quadrilateral.
    pub fn flip(&self, diagonal: (usize, usize)) -> Option<Triangulation> {
        let (a, b) = diagonal;
        let with: Vec<&[usize; 3]> = self.triangles.iter().filter(|t| t.contains(&a) && t.contains(&b)).collect();
        if with.len() != 2 {
            return None;
        }
        let apex = |t: &[usize; 3]| *t.iter().find(|&&v| v != a && v != b).unwrap();
        let (c, d) = (apex(with[0]), apex(with[1]));
        let ts = self.triangles.iter().filter(|t| !(t.contains(&a) && t.contains(&b))).copied().chain([[a, c, d], [b, c, d]]);
        Triangulation::new(self.n, ts).ok()
    }

    /// Dual plane binary tree; the root is dual to the edge `{0, n}` and the
    /// leaves, left to right, to the edges `{i, i+1}`.
    pub fn dual_tree(&self) -> PlaneTree {
        self.dual_between(0, self.n)
    }

    fn dual_between(&self, lo: usize, hi: usize) -> PlaneTree {
        if hi - lo == 1 {
            return PlaneTree::Leaf;
        }
        let t = self.triangles.iter().find(|t| t[0] == lo && t[2] == hi).expect("tiling");
        PlaneTree::node(self.dual_between(lo, t[1]), self.dual_between(t[1], hi))
    }

    /// Inverse of [`Triangulation::dual_tree`].
    pub fn from_dual_tree(tree: &PlaneTree) -> Result<Triangulation> {
        let n = tree.leaves();
        let mut ts = Vec::new();
        fn walk(t: &PlaneTree, lo: usize, ts: &mut Vec<[usize; 3]>) -> usize {
            match t {
                PlaneTree::Leaf => lo + 1,
                PlaneTree::Node(l, r) => {
                    let mid = walk(l, lo, ts);
                    let hi = walk(r, mid, ts);
                    ts.push([lo, mid, hi]);
                    hi
                }
            }
        }
        walk(tree, 0, &mut ts);
        Triangulation::new(n, ts)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.triangles.iter().map(|t| format!("{{{},{},{}}}", t[0], t[1], t[2])).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn consume(ts: &[[usize; 3]], used: &mut [bool], lo: usize, hi: usize) -> bool {
    if hi - lo == 1 {
        return true;
    }
    let Some(k) = ts.iter().position(|t| t[0] == lo && t[2] == hi) else { return false };
    if used[k] {
        return false;
    }
    used[k] = true;
    let mid = ts[k][1];
    consume(ts, used, lo, mid) && consume(ts, used, mid, hi)
}

/// All triangulations of the (n+1)-gon in lexicographic order.
pub fn enumerate_triangulations(n: usize) -> Result<Vec<Triangulation>> {
    if n < 2 {
        return Err(Error::Invalid("enumerate_triangulations needs n >= 2".into()));
    }
    let mut raw = triangulate_between(0, n);
    for t in raw.iter_mut() {
        t.sort_unstable();
    }
    raw.sort();
    Ok(raw.into_iter().map(|triangles| Triangulation { n, triangles }).collect())
}

fn triangulate_between(lo: usize, hi: usize) -> Vec<Vec<[usize; 3]>> {
    if hi - lo < 2 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mid in lo + 1..hi {
        let left = triangulate_between(lo, mid);
        let right = triangulate_between(mid, hi);
        for l in &left {
            for r in &right {
                let mut t = Vec::with_capacity(l.len() + r.len() + 1);
                t.push([lo, mid, hi]);
                t.extend_from_slice(l);
                t.extend_from_slice(r);
                out.push(t);
            }
        }
    }
    out
}

/// Every triangle contains `apex`.
pub fn fan_triangulation(n: usize, apex: usize) -> Result<Triangulation> {
    if n < 2 || apex > n {
        return Err(Error::Invalid(format!("fan apex {apex} outside [0, {n}]")));
    }
    // one triangle per polygon edge away from the apex
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
    edges.push((0, n));
    let ts = edges.into_iter().filter(|&(a, b)| a != apex && b != apex).map(|(a, b)| [apex, a, b]);
    Triangulation::new(n, ts)
}

/// `{{0..i} ∪ {j..n}, {i..j}}`.
pub fn boundary_pair_collection(n: usize, i: usize, j: usize) -> Result<IndexCollection> {
    if !(i < j && j <= n) || (i == 0 && j == n) {
        return Err(Error::Invalid(format!("invalid boundary pair ({i}, {j}) for n = {n}")));
    }
    let outer: Vec<usize> = (0..=i).chain(j..=n).collect();
    let inner: Vec<usize> = (i..=j).collect();
    IndexCollection::new(n, vec![outer, inner])
}

/// The pairs (i, j) with `i = 0` or `j = n` and at least one nontrivial cell.
pub fn boundary_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 2..n {
        out.push((0, j));
    }
    for i in 1..n.saturating_sub(1) {
        out.push((i, n));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneTree {
    Leaf,
    Node(Box<PlaneTree>, Box<PlaneTree>),
}

impl PlaneTree {
    pub fn node(l: PlaneTree, r: PlaneTree) -> Self {
        PlaneTree::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlaneTree::Leaf => 1,
            PlaneTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Every plane binary tree with `leaves` leaves.
    pub fn all(leaves: usize) -> Vec<PlaneTree> {
        if leaves <= 1 {
            return vec![PlaneTree::Leaf];
        }
        let mut out = Vec::new();
        for k in 1..leaves {
            for l in PlaneTree::all(k) {
                for r in PlaneTree::all(leaves - k) {
                    out.push(PlaneTree::node(l.clone(), r));
                }
            }
        }
        out
    }

    pub fn left_comb(leaves: usize) -> Self {
        (1..leaves).fold(PlaneTree::Leaf, |acc, _| PlaneTree::node(acc, PlaneTree::Leaf))
    }

    pub fn right_comb(leaves: usize) -> Self {
        (1..leaves).fold(PlaneTree::Leaf, |acc, _| PlaneTree::node(PlaneTree::Leaf, acc))
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneTree::Leaf => write!(f, "."),
            PlaneTree::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// Cells are vertex sets of convex sub-polygons tiling the polygon.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolygonalSubdivision {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl PolygonalSubdivision {
    pub fn trivial(n: usize) -> Self {
        PolygonalSubdivision { n, cells: vec![(0..=n).collect()] }
    }

    pub fn new(n: usize, cells: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut cs: Vec<Vec<usize>> = cells
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cs.sort();
        if cs.iter().any(|c| c.len() < 3 && !(cs.len() == 1 && c.len() == n + 1)) {
            return Err(Error::Invalid("cells need at least 3 vertices".into()));
        }
        if cs.iter().any(|c| *c.last().unwrap() > n) {
            return Err(Error::Invalid("cell outside the polygon".into()));
        }
        let mut used = vec![false; cs.len()];
        if !consume_cells(&cs, &mut used, 0, n) || used.iter().any(|u| !u) {
            return Err(Error::Invalid("cells do not tile the polygon".into()));
        }
        Ok(PolygonalSubdivision { n, cells: cs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn to_collection(&self) -> IndexCollection {
        IndexCollection::new(self.n, self.cells.clone()).expect("valid cells")
    }

    /// Is every cell of `self` inside a cell of `coarser`?
    pub fn refines(&self, coarser: &PolygonalSubdivision) -> bool {
        self.n == coarser.n
            && self.cells.iter().all(|c| coarser.cells.iter().any(|d| c.iter().all(|v| d.binary_search(v).is_ok())))
    }

    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 3)
    }
}

impl From<&Triangulation> for PolygonalSubdivision {
    fn from(t: &Triangulation) -> Self {
        PolygonalSubdivision { n: t.n, cells: t.triangles.iter().map(|t| t.to_vec()).collect() }
    }
}

fn consume_cells(cs: &[Vec<usize>], used: &mut [bool], lo: usize, hi: usize) -> bool {
    if hi - lo == 1 {
        return true;
    }
    let Some(k) = cs.iter().position(|c| c[0] == lo && *c.last().unwrap() == hi) else { return false };
    if used[k] {
        return false;
    }
    used[k] = true;
    let c = cs[k].clone();
    c.windows(2).all(|w| consume_cells(cs, used, w[0], w[1]))
}

/// All polygonal subdivisions, sorted; `n <= MAX_SUBDIVISION_N`.
pub fn enumerate_subdivisions(n: usize) -> Result<Vec<PolygonalSubdivision>> {
    if n < 2 {
        return Err(Error::Invalid("subdivisions need n >= 2".into()));
    }
    if n > MAX_SUBDIVISION_N {
        return Err(Error::Invalid(format!("subdivision enumeration is capped at n <= {MAX_SUBDIVISION_N}")));
    }
    let mut out: Vec<PolygonalSubdivision> = subdivide_between(0, n)
        .into_iter()
        .map(|mut cells| {
            for c in cells.iter_mut() {
                c.sort_unstable();
            }
            cells.sort();
            PolygonalSubdivision { n, cells }
        })
        .collect();
    out.sort();
    Ok(out)
}

fn subdivide_between(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if hi - lo < 2 {
        return vec![Vec::new()];
    }
    // choose the cell containing {lo, hi}: a vertex subset of lo..=hi with both ends
    let inner: Vec<usize> = (lo + 1..hi).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << inner.len()) {
        let mut cell = vec![lo];
        cell.extend(inner.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v));
        cell.push(hi);
        let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![cell.clone()]];
        for w in cell.windows(2) {
            let subs = subdivide_between(w[0], w[1]);
            partial = partial.iter().flat_map(|p| subs.iter().map(move |s| p.iter().chain(s).cloned().collect())).collect();
        }
        out.extend(partial);
    }
    out
}

/// Number of triangulations per `n`, computed in parallel.
pub fn triangulation_counts(ns: &[usize]) -> Result<Vec<usize>> {
    par::map(ns, |&n| enumerate_triangulations(n).map(|v| v.len())).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_and_pentagon() {
        let t3 = enumerate_triangulations(3).unwrap();
        assert_eq!(t3.len(), 2);
        assert_eq!(t3[0].triangles(), &[[0, 1, 2], [0, 2, 3]]);
        assert_eq!(t3[1].triangles(), &[[0, 1, 3], [1, 2, 3]]);
        assert_eq!(enumerate_triangulations(4).unwrap().len(), 5);
        assert_eq!(enumerate_triangulations(6).unwrap().len(), 42);
        assert!(enumerate_triangulations(1).is_err());
    }

    #[test]
    fn fans() {
        assert_eq!(fan_triangulation(3, 0).unwrap().triangles(), &[[0, 1, 2], [0, 2, 3]]);
        assert_eq!(fan_triangulation(3, 3).unwrap().triangles(), &[[0, 1, 3], [1, 2, 3]]);
        assert_eq!(fan_triangulation(4, 0).unwrap().triangles(), &[[0, 1, 2], [0, 2, 3], [0, 3, 4]]);
        assert_eq!(fan_triangulation(4, 2).unwrap().triangles(), &[[0, 1, 2], [0, 2, 4], [2, 3, 4]]);
        assert!(fan_triangulation(3, 4).is_err());
    }

    #[test]
    fn boundary_pair_examples() {
        assert_eq!(boundary_pair_collection(3, 0, 2).unwrap().members(), &[vec![0, 1, 2], vec![0, 2, 3]]);
        assert_eq!(boundary_pair_collection(4, 1, 4).unwrap().members(), &[vec![0, 1, 4], vec![1, 2, 3, 4]]);
        assert_eq!(boundary_pair_collection(3, 1, 3).unwrap().members(), &[vec![0, 1, 3], vec![1, 2, 3]]);
        assert!(boundary_pair_collection(3, 0, 3).is_err());
        assert!(boundary_pair_collection(3, 2, 1).is_err());
    }

    #[test]
    fn dual_trees_of_fans() {
        assert_eq!(fan_triangulation(3, 0).unwrap().dual_tree(), PlaneTree::left_comb(3));
        assert_eq!(fan_triangulation(3, 3).unwrap().dual_tree(), PlaneTree::right_comb(3));
        let t2 = &enumerate_triangulations(2).unwrap()[0];
        assert_eq!(t2.dual_tree(), PlaneTree::node(PlaneTree::Leaf, PlaneTree::Leaf));
    }

    #[test]
    fn flips_of_the_square() {
        let t = fan_triangulation(3, 0).unwrap();
        assert_eq!(t.diagonals(), vec![(0, 2)]);
        assert_eq!(t.flip((0, 2)).unwrap(), fan_triangulation(3, 3).unwrap());
        assert!(t.flip((1, 3)).is_none());
    }

    #[test]
    fn rejects_bad_tilings() {
        assert!(Triangulation::new(3, [[0, 1, 2], [1, 2, 3]]).is_err());
        assert!(Triangulation::new(3, [[0, 1, 3], [0, 2, 3]]).is_err());
        assert!(Triangulation::new(3, [[0, 1, 2]]).is_err());
    }

    #[test]
    fn subdivisions_of_the_square() {
        let s = enumerate_subdivisions(3).unwrap();
        assert_eq!(s.len(), 3);
        assert!(enumerate_subdivisions(9).is_err());
        let whole = PolygonalSubdivision::trivial(3);
        assert!(s.iter().all(|d| d.refines(&whole)));
    }
}
